from __future__ import annotations

from typing import List, Optional, Sequence

from minikind.term import Sort, Term, Var, mk_and, mk_implies, mk_not, mk_var


class SequentialCounter:
    """Sequential counter over bool indicators.

    Register `r(i, j)` is forced true once at least j of the first i+1
    indicators hold; implications only point upward, so assuming the top
    register for j = m+1 false bounds the count by m.
    """

    def __init__(self, indicators: Sequence[Term], prefix: str):
        self.indicators = list(indicators)
        self.prefix = prefix
        self.size = len(self.indicators)

    def register(self, i: int, j: int) -> Var:
        return mk_var(f"{self.prefix}.{i}.{j}", Sort.BOOL)

    def clauses(self) -> List[Term]:
        result: List[Term] = []
        for i, indicator in enumerate(self.indicators):
            result.append(mk_implies(indicator, self.register(i, 1)))
            if i == 0:
                continue
            for j in range(1, i + 1):
                result.append(mk_implies(self.register(i - 1, j), self.register(i, j)))
            for j in range(2, i + 2):
                result.append(
                    mk_implies(
                        mk_and(indicator, self.register(i - 1, j - 1)), self.register(i, j)
                    )
                )
        return result

    def at_most(self, bound: int) -> Optional[Term]:
        """Literal limiting the count to `bound`; None when no limit is needed."""
        if bound >= self.size:
            return None
        return mk_not(self.register(self.size - 1, bound + 1))
