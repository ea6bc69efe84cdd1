from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from minikind.term import Sort, Term, Value

from .model import BaseModel


class Verdict(str, Enum):
    VALID = "valid"
    FALSIFIED = "falsified"
    UNKNOWN = "unknown"


class Trace(BaseModel):
    """Per-step valuation of every input and state variable.

    Generated names (the init flag, `%pre` auxiliaries) are not part of a
    trace. The violated property is false at the last step.
    """

    sorts: Dict[str, Sort]
    inputs: List[str]
    steps: List[Dict[str, Any]]
    annotation: Optional[str] = None

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def variables(self) -> List[str]:
        """Inputs first, then the remaining variables in declaration order."""
        return self.inputs + [name for name in self.sorts if name not in self.inputs]

    def value(self, name: str, step: int) -> Value:
        return self.steps[step][name]

    def column(self, name: str) -> List[Value]:
        return [step[name] for step in self.steps]

    def input_deltas(self) -> int:
        """Number of (input, step) pairs whose value differs from the previous step."""
        return sum(
            1
            for name in self.inputs
            for t in range(1, self.length)
            if self.steps[t][name] != self.steps[t - 1][name]
        )

    def annotated(self, annotation: str) -> "Trace":
        return self.copy(update={"annotation": annotation})

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "variables": [
                {
                    "name": name,
                    "sort": self.sorts[name].value,
                    "input": name in self.inputs,
                    "values": [json_value(v, self.sorts[name]) for v in self.column(name)],
                }
                for name in self.variables
            ],
            "annotation": self.annotation,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Trace":
        sorts = {var["name"]: Sort(var["sort"]) for var in data["variables"]}
        inputs = [var["name"] for var in data["variables"] if var["input"]]
        steps: List[Dict[str, Any]] = [{} for _ in range(data["length"])]
        for var in data["variables"]:
            for step, value in zip(steps, var["values"]):
                step[var["name"]] = parse_json_value(value, sorts[var["name"]])
        return cls(sorts=sorts, inputs=inputs, steps=steps, annotation=data.get("annotation"))


def json_value(value: Value, sort: Sort) -> Any:
    if sort is Sort.BOOL:
        return bool(value)
    if sort is Sort.INT:
        return int(value)
    q = Fraction(value)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_json_value(value: Any, sort: Sort) -> Value:
    if sort is Sort.BOOL:
        return bool(value)
    if sort is Sort.INT:
        return int(value)
    return Fraction(value)


class IvcResult(BaseModel):
    property_name: str
    core: List[str]
    reduced_invariants: List[Term] = []
    minimal: bool = False
    depth: int = 1


class PropertyResult(BaseModel):
    name: str
    verdict: Verdict
    engine: Optional[str] = None
    k: Optional[int] = None
    invariants: List[Term] = []
    ivc: Optional[IvcResult] = None
    trace: Optional[Trace] = None
    smoothed_trace: Optional[Trace] = None
    reason: Optional[str] = None
    wall_time: float = 0.0


class RunStats(BaseModel):
    check_sat_calls: int = 0
    per_engine: Dict[str, int] = {}
    wall_time: float = 0.0


class RunReport(BaseModel):
    model: str = ""
    results: List[PropertyResult]
    stats: RunStats = RunStats()
    unused_inputs: List[str] = []
    # engines that stopped with an error, by name
    diagnostics: Dict[str, str] = {}

    def result(self, name: str) -> PropertyResult:
        for result in self.results:
            if result.name == name:
                return result
        raise KeyError(name)

    @property
    def verdicts(self) -> Dict[str, Verdict]:
        return {result.name: result.verdict for result in self.results}
