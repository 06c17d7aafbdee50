"""Solver-neutral integer-program container and exact assignment checking.

Models are plain data: variables with kinds/bounds, linear constraints with
rational coefficients, and a linear objective. Builders attach structural
metadata (``meta``) that the internal solver exploits; the container itself
never depends on it, and the verifier below re-checks any assignment against
the literal constraint list so solver output is never trusted blindly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional

__all__ = [
    "Variable",
    "Constraint",
    "IlpModel",
    "IlpSolution",
    "verify_assignment",
    "evaluate_objective",
]

Number = int | Fraction


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # "binary" | "integer"
    lower: int = 0
    upper: Optional[int] = None  # None = unbounded above

    def __post_init__(self) -> None:
        if self.kind not in ("binary", "integer"):
            raise ValueError(f"unknown variable kind '{self.kind}'")
        if self.kind == "binary" and (self.lower, self.upper) != (0, 1):
            raise ValueError("binary variables must have bounds [0, 1]")


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[Fraction, str], ...]
    sense: str  # "<=" | ">=" | "="
    rhs: Fraction

    def __post_init__(self) -> None:
        if self.sense not in ("<=", ">=", "="):
            raise ValueError(f"unknown sense '{self.sense}'")


@dataclass
class IlpModel:
    """Variables, linear constraints, and one linear objective."""

    name: str
    sense: str = "min"  # "min" | "max"
    variables: dict[str, Variable] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    objective: list[tuple[Fraction, str]] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def add_variable(self, name: str, kind: str, lower: int = 0,
                     upper: Optional[int] = None) -> str:
        if name in self.variables:
            raise ValueError(f"duplicate variable '{name}'")
        if kind == "binary":
            lower, upper = 0, 1
        self.variables[name] = Variable(name, kind, lower, upper)
        return name

    def add_constraint(self, name: str,
                       terms: Iterable[tuple[Number, str]],
                       sense: str, rhs: Number) -> None:
        tt = tuple((Fraction(c), v) for c, v in terms if Fraction(c) != 0)
        for _, v in tt:
            if v not in self.variables:
                raise ValueError(
                    f"constraint '{name}' references unknown variable '{v}'")
        self.constraints.append(Constraint(name, tt, sense, Fraction(rhs)))

    def set_objective(self, sense: str,
                      terms: Iterable[tuple[Number, str]]) -> None:
        if sense not in ("min", "max"):
            raise ValueError(f"unknown objective sense '{sense}'")
        self.sense = sense
        self.objective = [(Fraction(c), v) for c, v in terms
                          if Fraction(c) != 0]
        for _, v in self.objective:
            if v not in self.variables:
                raise ValueError(f"objective references unknown variable '{v}'")

    def count_variables(self, kind: Optional[str] = None) -> int:
        if kind is None:
            return len(self.variables)
        return sum(1 for v in self.variables.values() if v.kind == kind)


@dataclass(frozen=True)
class IlpSolution:
    """An assignment with status and search diagnostics."""

    assignment: dict[str, int]
    objective_value: Fraction
    status: str  # "optimal" | "feasible_timeout" | "infeasible"
    bound: Optional[Fraction] = None  # dual bound when not proven optimal
    nodes_explored: int = 0
    wall_time_s: float = 0.0
    incumbent_history: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        if self.status not in ("optimal", "feasible_timeout", "infeasible"):
            raise ValueError(f"unknown status '{self.status}'")


def evaluate_objective(model: IlpModel,
                       assignment: dict[str, int]) -> Fraction:
    return sum((c * assignment[v] for c, v in model.objective),
               start=Fraction(0))


def verify_assignment(model: IlpModel, assignment: dict[str, int],
                      max_reports: int = 50) -> list[str]:
    """Exactly re-check an assignment against every constraint and bound.

    Returns human-readable violation descriptions (empty means feasible).
    Missing variables, broken integrality/bounds, and violated constraints
    are all reported.
    """
    problems: list[str] = []
    for name, var in model.variables.items():
        if name not in assignment:
            problems.append(f"variable '{name}' missing from assignment")
            continue
        val = assignment[name]
        if val != int(val):
            problems.append(f"variable '{name}' = {val} is not integral")
            continue
        if val < var.lower or (var.upper is not None and val > var.upper):
            problems.append(
                f"variable '{name}' = {val} outside bounds "
                f"[{var.lower}, {var.upper}]")
        if len(problems) >= max_reports:
            return problems
    for con in model.constraints:
        try:
            lhs = sum((c * assignment[v] for c, v in con.terms),
                      start=Fraction(0))
        except KeyError as e:
            problems.append(f"constraint '{con.name}' references missing {e}")
            continue
        ok = (lhs <= con.rhs if con.sense == "<=" else
              lhs >= con.rhs if con.sense == ">=" else lhs == con.rhs)
        if not ok:
            problems.append(
                f"constraint '{con.name}': {lhs} {con.sense} {con.rhs} fails")
        if len(problems) >= max_reports:
            break
    return problems
