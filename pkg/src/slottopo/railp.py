"""Routing-agnostic optimization model built on probe-matrix delay counting.

Instead of scheduling a route for every flow, this model scores a topology
purely by how often useful links appear: the access rows of non-anchor
satellites (to anchors) and of anchors (to antennas) are formed as linear
expressions of x, probe products detect zero runs, and binary indicator
matrices count the non-zero probe entries. Maximizing the weighted non-zero
count minimizes the summed access delay, because the total number of probe
entries per row is fixed at T(T+1)/2.

Queueing, buffer limits, and link capacities are deliberately ignored here;
the simulator surfaces whatever error that introduces.
"""

from __future__ import annotations

import warnings
from fractions import Fraction

import numpy as np

from .ilp_exact import add_topology_core, x_name
from .ilp_model import IlpModel, IlpSolution
from .scenario import (ScenarioState, SystemParams, TopologySchedule,
                       TrafficProfile, validate_topology)

__all__ = ["build_railp", "extract_topology", "ExtractionError",
           "delta_name", "lambda_name"]


class ExtractionError(ValueError):
    """Raised when a solution cannot be turned into a valid schedule."""


def delta_name(run_length: int, node: int, window: int) -> str:
    """Non-anchor non-zero indicator for (run length, node, window)."""
    return f"del_{run_length}_{node + 1}_{window + 1}"


def lambda_name(run_length: int, node: int, window: int) -> str:
    """Anchor non-zero indicator for (run length, node, window)."""
    return f"lam_{run_length}_{node + 1}_{window + 1}"


def _exact(value: float | int) -> Fraction:
    # str() round-trips user-intended decimals (0.4 -> 2/5) exactly.
    return Fraction(str(value)) if isinstance(value, float) else Fraction(value)


def build_railp(state: ScenarioState, traffic: TrafficProfile,
                params: SystemParams, tight_m: bool = False) -> IlpModel:
    """Assemble the routing-agnostic model for one state.

    Variables are the shared x/ell binaries plus one binary indicator per
    (run length, satellite row, window). Access rows never become variables:
    every window sum is written directly as a linear expression of x.
    """
    params.validate_for_horizon(state.slot_count)
    p = params.tightened(state.slot_count) if tight_m else params
    big_t = state.slot_count
    vis = state.visibility
    if traffic.n_satellites != len(state.satellite_ids) \
            or traffic.slot_count != big_t:
        raise ValueError("traffic shape does not match state")
    if not traffic.is_uniform():
        warnings.warn(
            "traffic is not uniform across slots; the routing-agnostic "
            "objective weighs rows by their first-slot volume only",
            stacklevel=2)

    model = IlpModel(name=f"state{state.index}_railp", sense="max")
    add_topology_core(model, state, p)

    def window_terms(node: int, partners: list[int],
                     start: int, length: int) -> list[tuple[int, str]]:
        return [(1, x_name(node, j, w))
                for w in range(start, start + length)
                for j in partners]

    groups = (
        ("del", state.non_anchor_ids, tuple(state.anchor_ids), p.m_bar,
         delta_name),
        ("lam", state.anchor_ids, tuple(state.gs_ids), p.m_tilde,
         lambda_name),
    )
    for _, rows, partner_pool, big_m, namer in groups:
        for i in rows:
            partners = [j for j in partner_pool if vis[i, j]]
            for rl in range(1, big_t + 1):
                for c in range(big_t - rl + 1):
                    var = model.add_variable(namer(rl, i, c), "binary")
                    bar = window_terms(i, partners, c, rl)
                    # indicator <= window sum <= bigM * indicator
                    model.add_constraint(
                        f"bin_lo_{var}", [(1, var)] + [(-v, nm)
                                                       for v, nm in bar],
                        "<=", 0)
                    model.add_constraint(
                        f"bin_hi_{var}", bar + [(-big_m, var)], "<=", 0)

    gamma = _exact(p.gamma)
    sat_row = {node: r for r, node in enumerate(state.satellite_ids)}
    obj: list[tuple[Fraction, str]] = []
    for i in state.non_anchor_ids:
        w = gamma * int(traffic.f[sat_row[i], 0])
        for rl in range(1, big_t + 1):
            for c in range(big_t - rl + 1):
                obj.append((w, delta_name(rl, i, c)))
    for i in state.anchor_ids:
        w = (1 - gamma) * int(traffic.f[sat_row[i], 0])
        for rl in range(1, big_t + 1):
            for c in range(big_t - rl + 1):
                obj.append((w, lambda_name(rl, i, c)))
    model.set_objective("max", obj)

    model.meta = {
        "kind": "railp",
        "state": state,
        "traffic": traffic,
        "params": p,
    }
    return model


def extract_topology(solution: IlpSolution,
                     state: ScenarioState) -> TopologySchedule:
    """Read the x variables of a solution into a validated schedule.

    Accepts either canonical (i < j) or redundant symmetric names, e.g. from
    an imported external solution. Raises :class:`ExtractionError` naming
    the offending pair on inconsistent symmetric values, non-binary values,
    or constraint violations.
    """
    if solution.status == "infeasible":
        raise ExtractionError("solution is infeasible; nothing to extract")
    n, big_t = state.n_nodes, state.slot_count
    x = np.zeros((n, n, big_t), dtype=np.int64)
    seen = np.zeros((n, n, big_t), dtype=bool)
    for name, val in solution.assignment.items():
        if not name.startswith("x_"):
            continue
        parts = name.split("_")
        if len(parts) != 4:
            raise ExtractionError(f"malformed link variable '{name}'")
        i, j, t = int(parts[1]) - 1, int(parts[2]) - 1, int(parts[3]) - 1
        if not (0 <= i < n and 0 <= j < n and 0 <= t < big_t):
            raise ExtractionError(f"link variable '{name}' out of range")
        if val not in (0, 1):
            raise ExtractionError(f"link variable '{name}' = {val} not 0/1")
        if seen[i, j, t] and x[i, j, t] != val:
            raise ExtractionError(
                f"inconsistent symmetric values for pair ({i + 1}, {j + 1}) "
                f"slot {t + 1}")
        x[i, j, t] = val
        seen[i, j, t] = True
        if seen[j, i, t] and x[j, i, t] != val:
            raise ExtractionError(
                f"inconsistent symmetric values for pair ({i + 1}, {j + 1}) "
                f"slot {t + 1}")
        x[j, i, t] = val
        seen[j, i, t] = True
    schedule = TopologySchedule(x.astype(np.uint8))
    violations = validate_topology(schedule, state)
    if violations:
        raise ExtractionError(
            "extracted schedule violates constraints: "
            + "; ".join(str(v) for v in violations[:5]))
    return schedule
