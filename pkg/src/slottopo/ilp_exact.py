"""Exact routing-aware topology-design ILP for one scenario state.

Decision variables: symmetric per-slot link binaries x, pair-linked-at-all
binaries ell, per-flow routed volumes r, and per-flow end-of-slot buffer
volumes b. The objective minimizes the age-weighted buffered volume: a flow
generated in slot s contributes (t - s) per buffered packet at the end of
each later slot t, so older data drains first and residual data is
penalized quadratically in its age.

Constraint families (names used in the model):
  deg       one link per node per slot
  rng       minimum distinct ranging partners per satellite
  lnk_lo/hi two-sided big-M link between ell and the slot sums of x
  src       source conservation at the flow's generation slot
  bal       store-carry-forward conservation elsewhere
  buf       per-satellite buffer capacity
  capss     ISL capacity on non-anchor -> anchor arcs
  capsg     GSL capacity on anchor -> antenna arcs
  zero_nn   no traffic between two non-anchors
  zero_aa   no traffic between two anchors
  act       arcs carry traffic only when the link is scheduled

Symmetric pairs share one x variable; x exists only for visible pairs (the
visibility bound) and routing variables exist only from a flow's generation
slot onward.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ilp_model import IlpModel
from .scenario import ScenarioState, SystemParams, TrafficProfile

__all__ = ["Flow", "build_ilp", "add_topology_core",
           "x_name", "l_name", "r_name", "b_name"]


@dataclass(frozen=True)
class Flow:
    """One traffic flow: packets generated on one satellite in one slot."""

    flow_id: int        # 1-based, stable over (source row, slot) order
    src_node: int       # global node index (0-based)
    src_row: int        # row in the traffic matrix
    start_slot: int     # 0-based generation slot
    volume: int


def x_name(i: int, j: int, t: int) -> str:
    a, b = min(i, j), max(i, j)
    return f"x_{a + 1}_{b + 1}_{t + 1}"


def l_name(i: int, j: int) -> str:
    a, b = min(i, j), max(i, j)
    return f"l_{a + 1}_{b + 1}"


def r_name(k: int, i: int, j: int, t: int) -> str:
    return f"r_{k}_{i + 1}_{j + 1}_{t + 1}"


def b_name(k: int, i: int, t: int) -> str:
    return f"b_{k}_{i + 1}_{t + 1}"


def add_topology_core(model: IlpModel, state: ScenarioState,
                      params: SystemParams) -> None:
    """Add x/ell variables and constraint families (1)-(4), (6)-(8).

    Shared by the exact and routing-agnostic builders. Binary x variables
    exist only for visible pairs (the visibility bound) and each symmetric
    pair shares one variable.
    """
    big_t = state.slot_count
    sats = state.satellite_ids
    vis = state.visibility
    pairs = state.visible_pairs()
    sat_pairs = state.visible_satellite_pairs()

    for (i, j) in pairs:
        for t in range(big_t):
            model.add_variable(x_name(i, j, t), "binary")
    for (i, j) in sat_pairs:
        model.add_variable(l_name(i, j), "binary")

    # (4) one link per node per slot
    for v in range(state.n_nodes):
        nbrs = [u for u in range(state.n_nodes) if vis[v, u]]
        if not nbrs:
            continue
        for t in range(big_t):
            model.add_constraint(
                f"deg_{v + 1}_{t + 1}",
                [(1, x_name(v, u, t)) for u in nbrs], "<=", 1)

    # (6) ranging requirement per satellite
    for i in sats:
        terms = [(1, l_name(i, j)) for (a, b) in sat_pairs
                 for j in ((b,) if a == i else (a,) if b == i else ())]
        model.add_constraint(f"rng_{i + 1}", terms, ">=", params.l_min)

    # (8) two-sided link between ell and the slot sum of x
    for (i, j) in sat_pairs:
        xsum = [(1, x_name(i, j, t)) for t in range(big_t)]
        model.add_constraint(f"lnk_lo_{i + 1}_{j + 1}",
                             [(1, l_name(i, j))] + [(-1, v) for _, v in xsum],
                             "<=", 0)
        model.add_constraint(f"lnk_hi_{i + 1}_{j + 1}",
                             xsum + [(-params.m_dot, l_name(i, j))], "<=", 0)


def build_ilp(state: ScenarioState, traffic: TrafficProfile,
              params: SystemParams, tight_m: bool = False) -> IlpModel:
    """Assemble the exact ILP for one state.

    With ``tight_m`` the big-M constants are recomputed to their minimum
    safe values (slot count + 1 for the link indicator, capacity + 1 for
    link activation) instead of the configured values.
    """
    params.validate_for_horizon(state.slot_count)
    p = params.tightened(state.slot_count) if tight_m else params
    big_t = state.slot_count
    sats = state.satellite_ids
    anchors = set(state.anchor_ids)
    non_anchors = set(state.non_anchor_ids)
    gs = set(state.gs_ids)
    vis = state.visibility
    if traffic.n_satellites != len(sats) or traffic.slot_count != big_t:
        raise ValueError("traffic shape does not match state")

    model = IlpModel(name=f"state{state.index}_exact", sense="min")
    add_topology_core(model, state, p)

    flows: list[Flow] = []
    row_to_node = {r: sats[r] for r in range(len(sats))}
    for (row, st, vol) in traffic.flows():
        flows.append(Flow(flow_id=len(flows) + 1, src_node=row_to_node[row],
                          src_row=row, start_slot=st, volume=vol))

    # Routing arcs: any visible ordered pair whose sender is a satellite.
    arcs = [(i, j) for i in sats for j in range(state.n_nodes)
            if vis[i, j]]
    for fl in flows:
        for t in range(fl.start_slot, big_t):
            for (i, j) in arcs:
                model.add_variable(r_name(fl.flow_id, i, j, t), "integer")
            for i in sats:
                model.add_variable(b_name(fl.flow_id, i, t), "integer",
                                   upper=p.b_max)

    # (9)/(10) conservation per flow and satellite
    for fl in flows:
        k = fl.flow_id
        for i in sats:
            out_nbrs = [j for j in range(state.n_nodes) if vis[i, j]]
            in_nbrs = [j for j in sats if vis[j, i]]
            for t in range(fl.start_slot, big_t):
                terms: list[tuple[int, str]] = []
                terms += [(1, r_name(k, i, j, t)) for j in out_nbrs]
                terms.append((1, b_name(k, i, t)))
                if i == fl.src_node and t == fl.start_slot:
                    model.add_constraint(f"src_{k}", terms, "=", fl.volume)
                else:
                    terms += [(-1, r_name(k, j, i, t)) for j in in_nbrs]
                    if t > fl.start_slot:
                        terms.append((-1, b_name(k, i, t - 1)))
                    model.add_constraint(
                        f"bal_{k}_{i + 1}_{t + 1}", terms, "=", 0)

    # (11) buffer bound
    for i in sats:
        for t in range(big_t):
            terms = [(1, b_name(fl.flow_id, i, t)) for fl in flows
                     if fl.start_slot <= t]
            if terms:
                model.add_constraint(f"buf_{i + 1}_{t + 1}", terms,
                                     "<=", p.b_max)

    # (12)-(16) per-arc aggregated traffic constraints
    for (i, j) in arcs:
        if i in non_anchors and j in anchors:
            cname, sense, rhs = "capss", "<=", p.c_ss
        elif i in anchors and j in gs:
            cname, sense, rhs = "capsg", "<=", p.c_sg
        elif i in non_anchors and j in non_anchors:
            cname, sense, rhs = "zero_nn", "=", 0
        elif i in anchors and j in anchors:
            cname, sense, rhs = "zero_aa", "=", 0
        else:
            cname = ""
        for t in range(big_t):
            terms = [(1, r_name(fl.flow_id, i, j, t)) for fl in flows
                     if fl.start_slot <= t]
            if not terms:
                continue
            if cname:
                model.add_constraint(f"{cname}_{i + 1}_{j + 1}_{t + 1}",
                                     terms, sense, rhs)
            model.add_constraint(
                f"act_{i + 1}_{j + 1}_{t + 1}",
                terms + [(-p.m_big, x_name(i, j, t))], "<=", 0)

    obj = []
    for fl in flows:
        for i in sats:
            for t in range(fl.start_slot, big_t):
                w = t - fl.start_slot
                if w:
                    obj.append((Fraction(w), b_name(fl.flow_id, i, t)))
    model.set_objective("min", obj)

    model.meta = {
        "kind": "ilp",
        "state": state,
        "traffic": traffic,
        "params": p,
        "flows": tuple(flows),
    }
    return model
