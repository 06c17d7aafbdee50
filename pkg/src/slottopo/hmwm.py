"""Slot-by-slot scheduling heuristic driven by weighted matchings.

Each slot of a state is scheduled as one maximum-weight matching of the
visibility graph. Edge weights blend two signals:

* a communication term from the difference of node weights (simulated
  backlog in packets) along the data direction: non-anchor -> anchor edges
  get the backlog difference, anchor -> antenna edges the anchor backlog,
  and edges that can never carry traffic (non-anchor pairs, anchor pairs) a
  constant penalty -Q so they are only picked when ranging needs them;
* a ranging-urgency term per endpoint: unmet partner quota divided by the
  remaining slots, raised to alpha and scaled by beta, averaged over both
  endpoints, zero once the pair has already linked (repeat links add no
  ranging value) and zero on antenna edges.

After each slot the node weights replay the traffic flows: matched senders
shed up to the link capacity, matched receivers absorb it, and every
satellite then adds its newly generated packets. The matching is
cardinality-preferred (perfect when one exists); pass
``prefer_perfect=False`` to study plain maximum-weight matchings instead.

All weight arithmetic is exact rational, so e.g. displayed figures like
12.5 are reproduced without float noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .matching import max_weight_matching
from .scenario import (ScenarioState, SystemParams, TopologySchedule,
                       TrafficProfile)

__all__ = [
    "EdgeClass",
    "WeightedSlotGraph",
    "HmwmTrace",
    "classify_edge",
    "comm_weight",
    "ranging_side_weight",
    "ranging_weight",
    "update_node_weights",
    "build_slot_graph",
    "solve_slot_matching",
    "schedule_state_hmwm",
]


class EdgeClass(Enum):
    NN = "non_anchor/non_anchor"
    NA = "non_anchor/anchor"
    AA = "anchor/anchor"
    AG = "anchor/gs_antenna"


def classify_edge(state: ScenarioState, i: int, j: int) -> EdgeClass:
    kinds = []
    for v in (i, j):
        if v in state.gs_ids:
            kinds.append("g")
        elif v in state.anchor_ids:
            kinds.append("a")
        else:
            kinds.append("n")
    pair = "".join(sorted(kinds))
    try:
        return {"nn": EdgeClass.NN, "an": EdgeClass.NA,
                "aa": EdgeClass.AA, "ag": EdgeClass.AG}[pair]
    except KeyError:
        raise ValueError(
            f"edge ({i}, {j}) has no data/ranging class (kinds {pair})")


def _exact(value) -> Fraction:
    return Fraction(str(value)) if isinstance(value, float) else Fraction(value)


def comm_weight(kind: EdgeClass, rho_i, rho_j, q) -> Fraction:
    """Communication edge weight; for NA ``rho_i`` is the non-anchor end,
    for AG the anchor end. May be negative."""
    if kind is EdgeClass.NA:
        return Fraction(rho_i) - Fraction(rho_j)
    if kind is EdgeClass.AG:
        return Fraction(rho_i)
    if kind in (EdgeClass.NN, EdgeClass.AA):
        return -_exact(q)
    raise ValueError(f"unclassified edge kind {kind}")


def ranging_side_weight(pair_linked: bool, partner_count: int,
                        remaining_slots: int, l_min: int,
                        alpha, beta) -> Fraction:
    """Urgency of one endpoint: quota still missing over slots left."""
    if pair_linked:
        return Fraction(0)
    need = max(0, l_min - partner_count)
    a = _exact(alpha)
    if a.denominator != 1:
        raise ValueError("alpha must be an integer for exact weights")
    return _exact(beta) * Fraction(need, remaining_slots) ** int(a)


def ranging_weight(kind: EdgeClass, pair_linked: bool,
                   count_i: int, count_j: int, remaining_slots: int,
                   l_min: int, alpha, beta) -> Fraction:
    """Two-sided average of the endpoint urgencies; zero on antenna edges."""
    if kind is EdgeClass.AG:
        return Fraction(0)
    side_i = ranging_side_weight(pair_linked, count_i, remaining_slots,
                                 l_min, alpha, beta)
    side_j = ranging_side_weight(pair_linked, count_j, remaining_slots,
                                 l_min, alpha, beta)
    return (side_i + side_j) / 2


@dataclass(frozen=True)
class WeightedSlotGraph:
    """One slot's weighted matching instance with its weighting inputs."""

    slot: int  # 0-based
    n_nodes: int
    edge_class: dict[tuple[int, int], EdgeClass]
    node_weights: dict[int, int]           # rho, packets; antennas are 0
    edge_weights: dict[tuple[int, int], Fraction]
    linked_pairs: frozenset[tuple[int, int]]
    partner_counts: dict[int, int]


def build_slot_graph(state: ScenarioState, params: SystemParams,
                     rho: dict[int, int], slot: int,
                     linked_pairs: frozenset[tuple[int, int]],
                     partner_counts: dict[int, int]) -> WeightedSlotGraph:
    """Assemble the weighted graph for one slot from the running state."""
    eta = _exact(params.eta)
    remaining = state.slot_count - slot  # slots left including this one
    classes: dict[tuple[int, int], EdgeClass] = {}
    weights: dict[tuple[int, int], Fraction] = {}
    non_anchor = set(state.non_anchor_ids)
    anchor = set(state.anchor_ids)
    for (i, j) in state.visible_pairs():
        kind = classify_edge(state, i, j)
        classes[(i, j)] = kind
        if kind is EdgeClass.NA:
            n_end = i if i in non_anchor else j
            a_end = j if i in non_anchor else i
            wc = comm_weight(kind, rho[n_end], rho[a_end], params.q)
        elif kind is EdgeClass.AG:
            a_end = i if i in anchor else j
            wc = comm_weight(kind, rho[a_end], 0, params.q)
        else:
            wc = comm_weight(kind, rho[i], rho[j], params.q)
        wr = ranging_weight(kind, (i, j) in linked_pairs,
                            partner_counts.get(i, 0), partner_counts.get(j, 0),
                            remaining, params.l_min, params.alpha, params.beta)
        weights[(i, j)] = eta * wc + (1 - eta) * wr
    return WeightedSlotGraph(slot=slot, n_nodes=state.n_nodes,
                             edge_class=classes, node_weights=dict(rho),
                             edge_weights=weights,
                             linked_pairs=linked_pairs,
                             partner_counts=dict(partner_counts))


def solve_slot_matching(graph: WeightedSlotGraph,
                        prefer_perfect: bool = True
                        ) -> tuple[tuple[int, int], ...]:
    """Matching for one slot; covers all coverable nodes by default."""
    edges = [(i, j, w) for (i, j), w in sorted(graph.edge_weights.items())]
    return max_weight_matching(graph.n_nodes, edges,
                               prefer_max_cardinality=prefer_perfect)


def update_node_weights(state: ScenarioState,
                        rho: dict[int, int],
                        matching: tuple[tuple[int, int], ...],
                        f_next: dict[int, int],
                        c_ss: int, c_sg: int) -> dict[int, int]:
    """Replay one slot's simulated transfers and add the next slot's traffic.

    Both endpoints of a transfer see the pre-update weights (simultaneous
    update). Unmatched satellites keep their backlog; antennas stay at 0.
    """
    mate: dict[int, int] = {}
    for a, b in matching:
        if a in mate or b in mate:
            raise ValueError(f"node matched twice in {matching}")
        mate[a] = b
        mate[b] = a
    non_anchor = set(state.non_anchor_ids)
    anchor = set(state.anchor_ids)
    gs = set(state.gs_ids)
    new: dict[int, int] = {}
    for i in state.satellite_ids:
        j = mate.get(i)
        if j is None:
            val = rho[i]
        elif i in non_anchor and j in anchor:
            val = max(0, rho[i] - c_ss)
        elif i in anchor and j in non_anchor:
            val = rho[i] + min(rho[j], c_ss)
        elif i in anchor and j in gs:
            val = max(0, rho[i] - c_sg)
        else:  # nn or aa pairing: no transfer
            val = rho[i]
        new[i] = val + f_next.get(i, 0)
    for g in gs:
        new[g] = 0
    return new


@dataclass(frozen=True)
class HmwmTrace:
    """Per-slot graphs and matchings of one heuristic run."""

    graphs: tuple[WeightedSlotGraph, ...]
    matchings: tuple[tuple[tuple[int, int], ...], ...]


def schedule_state_hmwm(
    state: ScenarioState, traffic: TrafficProfile, params: SystemParams,
    prefer_perfect: bool = True, with_trace: bool = False,
) -> TopologySchedule | tuple[TopologySchedule, HmwmTrace]:
    """Schedule all slots of one state with the matching heuristic.

    Ranging satisfaction is an audited outcome, not a guarantee: unsuitable
    eta/beta can leave the requirement unmet, which callers detect with
    ``ranging_audit``.
    """
    sat_rows = {node: r for r, node in enumerate(state.satellite_ids)}
    rho: dict[int, int] = {
        i: int(traffic.f[sat_rows[i], 0]) for i in state.satellite_ids}
    for g in state.gs_ids:
        rho[g] = 0
    linked: frozenset[tuple[int, int]] = frozenset()
    counts: dict[int, int] = {i: 0 for i in state.satellite_ids}
    sat_set = set(state.satellite_ids)

    graphs: list[WeightedSlotGraph] = []
    matchings: list[tuple[tuple[int, int], ...]] = []
    for slot in range(state.slot_count):
        graph = build_slot_graph(state, params, rho, slot, linked, counts)
        matching = solve_slot_matching(graph, prefer_perfect=prefer_perfect)
        graphs.append(graph)
        matchings.append(matching)
        if slot + 1 < state.slot_count:
            f_next = {i: int(traffic.f[sat_rows[i], slot + 1])
                      for i in state.satellite_ids}
            rho = update_node_weights(state, rho, matching, f_next,
                                      params.c_ss, params.c_sg)
        new_linked = set(linked)
        for a, b in matching:
            if a in sat_set and b in sat_set:
                pair = (min(a, b), max(a, b))
                if pair not in new_linked:
                    new_linked.add(pair)
                    counts[a] += 1
                    counts[b] += 1
        linked = frozenset(new_linked)

    schedule = TopologySchedule.from_matchings(state.n_nodes, matchings)
    if with_trace:
        return schedule, HmwmTrace(tuple(graphs), tuple(matchings))
    return schedule
