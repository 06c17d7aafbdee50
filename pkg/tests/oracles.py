"""Independent oracle implementations for cross-checking the package.

Everything here is deliberately written from scratch against the problem
statement (brute force, exhaustive enumeration, per-packet replay) and
never calls into the package's solvers or counters, so a bug in the
package cannot hide behind shared code.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


# -- matchings ---------------------------------------------------------------


def all_matchings(n_nodes, edges):
    """Every matching (including empty and partial) of an edge list."""
    edges = sorted((min(i, j), max(i, j)) for i, j in edges)
    out = []

    def rec(idx, used, cur):
        if idx == len(edges):
            out.append(tuple(cur))
            return
        i, j = edges[idx]
        if i not in used and j not in used:
            cur.append((i, j))
            rec(idx + 1, used | {i, j}, cur)
            cur.pop()
        rec(idx + 1, used, cur)

    rec(0, set(), [])
    return out


def best_matching_brute(n_nodes, weighted_edges, prefer_cardinality=True):
    """Optimal matching value by full enumeration.

    Returns ``(cardinality, total_weight)`` of the best matching under
    (cardinality, weight) lexicographic order when ``prefer_cardinality``,
    else under plain weight order.
    """
    edges = [(min(i, j), max(i, j)) for i, j, _ in weighted_edges]
    weights = {(min(i, j), max(i, j)): Fraction(w)
               for i, j, w in weighted_edges}
    best = None
    for m in all_matchings(n_nodes, edges):
        total = sum((weights[e] for e in m), start=Fraction(0))
        key = (len(m), total) if prefer_cardinality else (total,)
        if best is None or key > best:
            best = key
    if best is None:
        return (0, Fraction(0))
    if prefer_cardinality:
        return best
    return (None, best[0])


# -- zero runs ---------------------------------------------------------------


def zero_run_total_brute(row):
    """Sum of per-slot waiting delays by direct definition."""
    total = 0
    big_t = len(row)
    for t in range(big_t):
        if row[t] == 1:
            continue
        nxt = big_t  # virtual access just past the horizon
        for u in range(t + 1, big_t):
            if row[u] == 1:
                nxt = u
                break
        total += nxt - t
    return total


def run_lengths_brute(row):
    out = []
    cur = 0
    for v in row:
        if v == 0:
            cur += 1
        else:
            if cur:
                out.append(cur)
            cur = 0
    if cur:
        out.append(cur)
    return out


# -- per-packet replay (independent of slottopo.sim) -------------------------


def replay_packets(matchings, state, traffic, params):
    """Oldest-first store-carry-forward replay over explicit packet lists.

    Returns ``(age_weighted_buffer_sum, delays, undelivered)``. Transfers
    are capped by link capacity and receiver buffer headroom, matching the
    documented greedy semantics.
    """
    anchors = set(state.anchor_ids)
    non_anchors = set(state.non_anchor_ids)
    gs = set(state.gs_ids)
    sats = state.satellite_ids
    sat_rows = {node: r for r, node in enumerate(sats)}
    buffers = {i: [] for i in sats}  # list of (gen, src, seq)
    seq = itertools.count()
    age_sum = 0
    delays = []
    for t, matching in enumerate(matchings):
        for i in sats:
            for _ in range(int(traffic.f[sat_rows[i], t])):
                buffers[i].append((t, i, next(seq)))
            buffers[i].sort()
        transfers = []
        for (a, b) in matching:
            if a in non_anchors and b in anchors:
                transfers.append((a, b))
            elif b in non_anchors and a in anchors:
                transfers.append((b, a))
            elif a in anchors and b in gs:
                transfers.append((a, None))
            elif b in anchors and a in gs:
                transfers.append((b, None))
        for src, dst in sorted(transfers, key=lambda z: (z[0],)):
            if dst is None:
                cap = params.c_sg
                moved, buffers[src] = (buffers[src][:cap], buffers[src][cap:])
                for (gen, _, _) in moved:
                    delays.append(t - gen)
            else:
                headroom = min(params.c_ss,
                               params.b_max - len(buffers[dst]))
                cap = max(0, headroom)
                moved, buffers[src] = (buffers[src][:cap], buffers[src][cap:])
                buffers[dst].extend(moved)
                buffers[dst].sort()
        for i in sats:
            for (gen, _, _) in buffers[i]:
                age_sum += t - gen
    undelivered = sum(len(b) for b in buffers.values())
    return age_sum, delays, undelivered


# -- exhaustive topology search ----------------------------------------------


def distinct_partner_counts(matchings, state):
    sats = set(state.satellite_ids)
    partners = {i: set() for i in sats}
    for m in matchings:
        for (a, b) in m:
            if a in sats and b in sats:
                partners[a].add(b)
                partners[b].add(a)
    return {i: len(p) for i, p in partners.items()}


def exhaustive_min_age_sum(state, traffic, params):
    """True optimum of the age-weighted objective by full enumeration.

    Enumerates every combination of per-slot matchings of the visibility
    graph (all matchings, not only maximal ones), keeps ranging-feasible
    ones, and evaluates each with the independent packet replay. Returns
    ``(best_value, best_matchings)`` or ``(None, None)`` if infeasible.
    """
    per_slot = all_matchings(state.n_nodes, state.visible_pairs())
    best = None
    best_combo = None
    for combo in itertools.product(per_slot, repeat=state.slot_count):
        counts = distinct_partner_counts(combo, state)
        if any(c < params.l_min for c in counts.values()):
            continue
        age_sum, _, _ = replay_packets(combo, state, traffic, params)
        if best is None or age_sum < best:
            best = age_sum
            best_combo = combo
    return best, best_combo


def exhaustive_max_railp(state, traffic, params):
    """True optimum of the probe-count objective by full enumeration."""
    gamma = Fraction(str(params.gamma))
    sats = state.satellite_ids
    sat_rows = {node: r for r, node in enumerate(sats)}
    per_slot = all_matchings(state.n_nodes, state.visible_pairs())
    anchors = set(state.anchor_ids)
    gs = set(state.gs_ids)
    big_t = state.slot_count
    total_entries = big_t * (big_t + 1) // 2
    best = None
    for combo in itertools.product(per_slot, repeat=big_t):
        counts = distinct_partner_counts(combo, state)
        if any(c < params.l_min for c in counts.values()):
            continue
        value = Fraction(0)
        for i in state.non_anchor_ids + state.anchor_ids:
            row = []
            for m in combo:
                hit = 0
                for (a, b) in m:
                    if a == i and (b in anchors if i not in anchors
                                   else b in gs):
                        hit = 1
                    if b == i and (a in anchors if i not in anchors
                                   else a in gs):
                        hit = 1
                row.append(hit)
            zeros = sum(k * (k + 1) // 2 for k in run_lengths_brute(row))
            weight = gamma if i not in anchors else (1 - gamma)
            value += weight * int(traffic.f[sat_rows[i], 0]) \
                * (total_entries - zeros)
        if best is None or value > best:
            best = value
    return best
