from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self):
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ValueError(f"span starts after it ends: {self!r}")

    def to(self, other: "SourceSpan") -> "SourceSpan":
        return SourceSpan(self.file, self.start_line, self.start_col, other.end_line, other.end_col)

    def short(self) -> str:
        return f"{self.file}:{self.start_line}"

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"
