"""CPLEX-LP text export and external-solution import.

The writer emits the widely understood LP file layout: objective section,
``Subject To``, ``Bounds`` (only non-default bounds are listed; LP default
is ``0 <= v``), ``Binary``/``General`` declarations, ``End``. Variable
names are the model names (``x_i_j_t``, ``l_i_j``, ``r_f_i_j_t``,
``b_f_i_t``, and probe indicators ``del_t_i_c``/``lam_t_i_c``), so an
external solver's solution maps back by name.

Solutions are imported from a plain ``name value`` per-line text file
(comment lines starting with ``#`` or ``\\`` are skipped), which matches
what most solvers can be told to dump.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .ilp_model import IlpModel

__all__ = ["export_lp", "format_lp", "read_solution"]

_LINE_WIDTH = 72


def _num(value: Fraction) -> str:
    """Exact numeric literal for a rational coefficient.

    Denominators made of 2s and 5s expand to exact decimals; anything else
    falls back to a float literal (documented precision loss).
    """
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den == 1:
        digits = max(twos, fives)
        scaled = value.numerator * 10 ** digits // value.denominator
        sign = "-" if scaled < 0 else ""
        body = str(abs(scaled)).rjust(digits + 1, "0")
        return f"{sign}{body[:-digits]}.{body[-digits:]}"
    return repr(float(value))


def _terms(terms: Iterable[tuple[Fraction, str]]) -> list[str]:
    parts: list[str] = []
    for k, (coef, var) in enumerate(terms):
        sign = "-" if coef < 0 else ("+" if k else "")
        mag = abs(coef)
        coef_txt = "" if mag == 1 else _num(mag) + " "
        parts.append(f"{sign} {coef_txt}{var}".strip())
    return parts or ["0 dummy"]


def _wrap(label: str, parts: list[str], tail: str = "") -> list[str]:
    lines = []
    cur = f" {label}" if label else " "
    for part in parts:
        if len(cur) + len(part) + 1 > _LINE_WIDTH and cur.strip():
            lines.append(cur)
            cur = "   " + part
        else:
            cur += " " + part
    if tail:
        cur += " " + tail
    lines.append(cur)
    return lines


def format_lp(model: IlpModel) -> str:
    """Render a model as CPLEX-LP text."""
    out: list[str] = [f"\\ slottopo model {model.name}"]
    out.append("Maximize" if model.sense == "max" else "Minimize")
    out.extend(_wrap("obj:", _terms(model.objective)))
    if model.constraints:
        out.append("Subject To")
        for con in model.constraints:
            sense = "=" if con.sense == "=" else con.sense
            out.extend(_wrap(f"{con.name}:", _terms(con.terms),
                             tail=f"{sense} {_num(con.rhs)}"))
    bounds = []
    for var in model.variables.values():
        if var.kind == "binary":
            continue
        if var.upper is not None:
            bounds.append(f" {var.lower} <= {var.name} <= {var.upper}")
        elif var.lower != 0:
            bounds.append(f" {var.name} >= {var.lower}")
    if bounds:
        out.append("Bounds")
        out.extend(bounds)
    binaries = [v.name for v in model.variables.values()
                if v.kind == "binary"]
    if binaries:
        out.append("Binary")
        out.extend(_wrap("", binaries))
    generals = [v.name for v in model.variables.values()
                if v.kind == "integer"]
    if generals:
        out.append("General")
        out.extend(_wrap("", generals))
    out.append("End")
    return "\n".join(out) + "\n"


def export_lp(model: IlpModel, path: str | Path) -> None:
    """Write the model to ``path`` in CPLEX-LP text format."""
    Path(path).write_text(format_lp(model))


def read_solution(path: str | Path) -> dict[str, int]:
    """Read a ``name value`` per-line solution file into an assignment.

    Values must be integral up to 1e-6 (solver round-off is absorbed);
    anything else is rejected.
    """
    assignment: dict[str, int] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        text = line.strip()
        if not text or text.startswith("#") or text.startswith("\\"):
            continue
        parts = text.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'name value', "
                             f"got {text!r}")
        name, raw = parts
        try:
            val = float(raw)
        except ValueError as e:
            raise ValueError(f"line {lineno}: bad value {raw!r}") from e
        rounded = round(val)
        if abs(val - rounded) > 1e-6:
            raise ValueError(
                f"line {lineno}: value {val} for '{name}' is not integral")
        if name in assignment:
            raise ValueError(f"line {lineno}: duplicate variable '{name}'")
        assignment[name] = int(rounded)
    return assignment
