"""Desk-scale exact solver for the topology-design models.

Rather than branching on raw binaries, the search branches over whole
per-slot matchings of the state's visibility graph: the one-link-per-node
constraint makes every feasible slot a matching, and enlarging a matching
never hurts either model (extra links only add routing options, access
opportunities, and ranging pairs), so only maximal matchings are branched
on. Matchings with identical effect on a model (same transfer arcs, same
new ranging pairs, same access rows) are deduplicated.

Exact-model leaves are evaluated by oldest-first greedy forwarding, which
is optimal routing here: the age weight of the objective strictly
prioritizes older data, every node has at most one active link per slot (so
there is never a path choice, only a which-packets choice), and convexity
of the per-packet cost makes oldest-first exchange-optimal. The tests
additionally check this greedy evaluation against LP-relaxation routing.

Pruning bound (exact model): any completion delivers at most the total
ground capacity per slot, and a packet sitting on a non-anchor cannot reach
ground in the very next slot (its relay anchor cannot hold the uplink and
the downlink within one slot). Assigning the oldest packets to the earliest
slots allowed by those two rules is exchange-optimal for the relaxed
problem, so its cost lower-bounds every completion.

Routing-agnostic model: solved as a layered dynamic program over (open
zero-run lengths, linked pairs) states with the same matching branching, an
optimistic immediate-close bound, and a warm-start incumbent from a bounded
greedy descent.

The post-hoc verifier (`verify_assignment`) re-checks every returned
assignment against the literal model; the solver's word is never final.

Buffer bound caveat: greedy forwarding caps transfers at the receiver's
remaining buffer headroom and declares a branch infeasible if generation
alone overflows a buffer. When the buffer bound actually binds, an optimal
router could in principle offload data sideways where greedy cannot; the
desk-scale oracle instances this solver exists for keep total traffic far
below the bound.
"""

from __future__ import annotations

import time
from fractions import Fraction
from math import gcd
from typing import Optional

import numpy as np

from .ilp_exact import b_name, l_name, r_name, x_name
from .ilp_model import IlpModel, IlpSolution, evaluate_objective
from .railp import delta_name, lambda_name
from .scenario import ScenarioState, TopologySchedule

__all__ = ["solve_branch_and_bound", "enumerate_maximal_matchings",
           "SolverStructureError"]


class SolverStructureError(ValueError):
    """Model lacks the structural metadata the internal solver needs."""


def enumerate_maximal_matchings(
    state: ScenarioState,
) -> list[tuple[tuple[int, int], ...]]:
    """All maximal matchings of the state's visibility graph, sorted.

    Desk-scale only: refuses graphs with more than 26 visible pairs.
    """
    edges = state.visible_pairs()
    if len(edges) > 26:
        raise SolverStructureError(
            f"{len(edges)} visible pairs is beyond the desk-scale internal "
            "solver; export the model and use an external solver instead")
    out: list[tuple[tuple[int, int], ...]] = []

    def rec(idx: int, used: frozenset[int], cur: list[tuple[int, int]]):
        if idx == len(edges):
            for (a, b) in edges:
                if a not in used and b not in used:
                    return
            out.append(tuple(cur))
            return
        a, b = edges[idx]
        if a not in used and b not in used:
            cur.append((a, b))
            rec(idx + 1, used | {a, b}, cur)
            cur.pop()
        rec(idx + 1, used, cur)

    rec(0, frozenset(), [])
    out.sort()
    return out


def solve_branch_and_bound(model: IlpModel,
                           time_budget: float = 300.0) -> IlpSolution:
    """Solve a model from ``build_ilp`` or ``build_railp`` exactly.

    Returns status ``optimal`` with the true optimum, ``feasible_timeout``
    with the best incumbent and a valid dual bound when the budget runs
    out, or ``infeasible``. Deterministic for identical inputs.
    """
    kind = model.meta.get("kind")
    if kind == "ilp":
        return _solve_exact(model, time_budget)
    if kind == "railp":
        return _solve_railp(model, time_budget)
    raise SolverStructureError(
        "model carries no structural metadata; build it with build_ilp or "
        "build_railp")


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------


def _ranging_hopeless(state: ScenarioState, l_min: int) -> bool:
    """True when no schedule can satisfy the ranging requirement."""
    sats = state.satellite_ids
    vis = state.visibility
    for i in sats:
        partners = sum(1 for j in sats if j != i and vis[i, j])
        if min(partners, state.slot_count) < l_min:
            return True
    return False


class _Pairs:
    """Bit indexing of visible satellite pairs for ranging bookkeeping."""

    def __init__(self, state: ScenarioState):
        self.pairs = state.visible_satellite_pairs()
        self.index = {p: k for k, p in enumerate(self.pairs)}
        self.sat_mask = {i: 0 for i in state.satellite_ids}
        for (a, b), k in self.index.items():
            self.sat_mask[a] |= 1 << k
            self.sat_mask[b] |= 1 << k

    def short_by(self, bits: int, l_min: int) -> int:
        """Largest per-satellite shortfall of distinct linked partners."""
        worst = 0
        for m in self.sat_mask.values():
            short = l_min - bin(bits & m).count("1")
            if short > worst:
                worst = short
        return worst


def _infeasible(model: IlpModel, t0: float, nodes: int) -> IlpSolution:
    return IlpSolution(assignment={}, objective_value=Fraction(0),
                       status="infeasible", bound=None,
                       nodes_explored=nodes,
                       wall_time_s=time.perf_counter() - t0)


def _x_assignment(model: IlpModel, state: ScenarioState,
                  matchings) -> dict[str, int]:
    """x and ell values for a schedule, zero-filled over all model vars."""
    chosen: set[str] = set()
    linked: set[tuple[int, int]] = set()
    sat_set = set(state.satellite_ids)
    for t, m in enumerate(matchings):
        for (i, j) in m:
            chosen.add(x_name(i, j, t))
            if i in sat_set and j in sat_set:
                linked.add((min(i, j), max(i, j)))
    out: dict[str, int] = {}
    for name in model.variables:
        if name.startswith("x_"):
            out[name] = 1 if name in chosen else 0
        elif name.startswith("l_"):
            parts = name.split("_")
            pair = (int(parts[1]) - 1, int(parts[2]) - 1)
            out[name] = 1 if pair in linked else 0
    return out


# ---------------------------------------------------------------------------
# exact model: matchings + greedy routing
# ---------------------------------------------------------------------------


def _slot_effects_exact(state: ScenarioState, matchings, pairs: _Pairs):
    """Deduplicate matchings by (transfer arcs, new ranging pairs)."""
    anchors = set(state.anchor_ids)
    non_anchors = set(state.non_anchor_ids)
    gs = set(state.gs_ids)
    effects = {}
    for m in matchings:
        na = []
        ag = []
        bits = 0
        for (a, b) in m:
            if a in non_anchors and b in anchors:
                na.append((a, b))
            elif b in non_anchors and a in anchors:
                na.append((b, a))
            elif a in anchors and b in gs:
                ag.append(a)
            elif b in anchors and a in gs:
                ag.append(b)
            key = (min(a, b), max(a, b))
            if key in pairs.index:
                bits |= 1 << pairs.index[key]
        sig = (tuple(sorted(na)), tuple(sorted(ag)), bits)
        if sig not in effects:
            effects[sig] = m
    return sorted(effects.items())


def _route_step(buffers, gen_row, t, na_moves, ag_moves, c_ss, c_sg, b_max):
    """Advance gen-aggregated buffers one slot.

    ``buffers`` maps node -> dict of gen_slot -> count. Returns
    ``(frozen_state, cost_at_end_of_slot)`` or ``(None, None)`` when the
    buffer bound is overrun with no transfer able to prevent it.
    """
    work = {i: dict(b) for i, b in buffers.items()}
    for i, vol in gen_row:
        if vol:
            work[i][t] = work[i].get(t, 0) + vol
    for (n, a) in na_moves:
        src = work[n]
        cap = min(c_ss, b_max - sum(work[a].values()))
        for g in sorted(src):
            if cap <= 0:
                break
            mv = min(cap, src[g])
            src[g] -= mv
            if not src[g]:
                del src[g]
            work[a][g] = work[a].get(g, 0) + mv
            cap -= mv
    for a in ag_moves:
        src = work[a]
        cap = c_sg
        for g in sorted(src):
            if cap <= 0:
                break
            mv = min(cap, src[g])
            src[g] -= mv
            if not src[g]:
                del src[g]
            cap -= mv
    cost = 0
    for b in work.values():
        tot = 0
        for g, cnt in b.items():
            cost += (t - g) * cnt
            tot += cnt
        if tot > b_max:
            return None, None
    frozen = tuple(tuple(sorted(b.items()))
                   for _, b in sorted(work.items()))
    return frozen, cost


def _future_lb_exact(frozen_buffers, sat_nodes, t, big_t, ground_cap,
                     non_anchors) -> int:
    """Admissible lower bound on cost accrued after slot ``t``.

    Relaxation: per future slot at most ``ground_cap`` packets reach
    ground; packets on non-anchors are not deliverable in slot t+1. The
    oldest eligible packets take the earliest slots (exchange-optimal for
    the relaxation). A packet delivered in slot d is still buffered at the
    end of slots t+1 .. min(T-1, d-1).
    """
    last = big_t - 1
    if t >= last or ground_cap <= 0:
        return 0
    anch: list[list[int]] = []
    nonan: list[list[int]] = []
    for node, buf in zip(sat_nodes, frozen_buffers):
        target = nonan if node in non_anchors else anch
        for g, c in buf:
            target.append([g, c])
    anch.sort()
    nonan.sort()
    cost = 0
    ia = inn = 0
    d = t + 1
    cap = ground_cap
    while ia < len(anch) or inn < len(nonan):
        if d > last:
            # contributions no longer grow with d: charge through slot `last`
            k = last - t
            base = (t + 1 + last) * k // 2
            for lst, idx in ((anch, ia), (nonan, inn)):
                for g, c in lst[idx:]:
                    cost += c * (base - g * k)
            break
        head_a = anch[ia] if ia < len(anch) else None
        head_n = nonan[inn] if inn < len(nonan) and d >= t + 2 else None
        if head_a is None and head_n is None:
            d += 1
            cap = ground_cap
            continue
        if head_n is None or (head_a is not None
                              and head_a[0] <= head_n[0]):
            unit = head_a
            from_anchor = True
        else:
            unit = head_n
            from_anchor = False
        take = min(unit[1], cap)
        hi = min(last, d - 1)
        if hi >= t + 1:
            k = hi - t
            cost += take * ((t + 1 + hi) * k // 2 - unit[0] * k)
        unit[1] -= take
        cap -= take
        if unit[1] == 0:
            if from_anchor:
                ia += 1
            else:
                inn += 1
        if cap == 0:
            d += 1
            cap = ground_cap
    return cost


def _solve_exact(model: IlpModel, time_budget: float) -> IlpSolution:
    t0 = time.perf_counter()
    state: ScenarioState = model.meta["state"]
    traffic = model.meta["traffic"]
    params = model.meta["params"]
    big_t = state.slot_count
    pairs = _Pairs(state)

    if _ranging_hopeless(state, params.l_min):
        return _infeasible(model, t0, 0)

    effects = _slot_effects_exact(
        state, enumerate_maximal_matchings(state), pairs)
    sats = state.satellite_ids
    sat_rows = {node: r for r, node in enumerate(sats)}
    gen_rows = [tuple((i, int(traffic.f[sat_rows[i], t])) for i in sats)
                for t in range(big_t)]
    sat_sorted = tuple(sorted(sats))
    non_anchors = frozenset(state.non_anchor_ids)
    ground_cap = min(len(state.gs_ids), len(state.anchor_ids)) * params.c_sg

    empty = tuple(tuple() for _ in sat_sorted)

    best_cost: list[Optional[int]] = [None]
    best_path: list = [None]
    incumbents: list[int] = []
    memo: dict = {}
    nodes = [0]
    open_bounds: list[int] = []
    deadline = t0 + time_budget
    timed_out = [False]

    def thaw(frozen):
        return {node: dict(b) for node, b in zip(sat_sorted, frozen)}

    def rec(t, buf, lbits, cost, path):
        nodes[0] += 1
        if time.perf_counter() > deadline:
            timed_out[0] = True
            return
        if t == big_t:
            if pairs.short_by(lbits, params.l_min) == 0:
                if best_cost[0] is None or cost < best_cost[0]:
                    best_cost[0] = cost
                    best_path[0] = tuple(path)
                    incumbents.append(cost)
            return
        key = (t, buf, lbits)
        prev = memo.get(key)
        if prev is not None and prev <= cost:
            return
        memo[key] = cost
        if pairs.short_by(lbits, params.l_min) > big_t - t:
            return
        thawed = thaw(buf)
        kids = []
        for (na, ag, pbits), matching in effects:
            nb, inc = _route_step(thawed, gen_rows[t], t, na, ag,
                                  params.c_ss, params.c_sg, params.b_max)
            if nb is None:
                continue
            c2 = cost + inc
            bound = c2 + _future_lb_exact(nb, sat_sorted, t, big_t,
                                          ground_cap, non_anchors)
            if best_cost[0] is not None and bound >= best_cost[0]:
                continue
            kids.append((bound, c2, nb, pbits, matching))
        kids.sort(key=lambda z: (z[0], z[4]))
        for bound, c2, nb, pbits, matching in kids:
            if best_cost[0] is not None and bound >= best_cost[0]:
                continue
            if timed_out[0]:
                open_bounds.append(bound)
                continue
            path.append(matching)
            rec(t + 1, nb, lbits | pbits, c2, path)
            path.pop()

    rec(0, empty, 0, 0, [])
    wall = time.perf_counter() - t0

    if best_cost[0] is None:
        if timed_out[0]:
            return IlpSolution(assignment={}, objective_value=Fraction(0),
                               status="feasible_timeout", bound=None,
                               nodes_explored=nodes[0], wall_time_s=wall)
        return _infeasible(model, t0, nodes[0])

    assignment = _x_assignment(model, state, best_path[0])
    assignment.update(_capture_routing(model, state, best_path[0]))
    objective = evaluate_objective(model, assignment)
    status = "feasible_timeout" if timed_out[0] else "optimal"
    bound = Fraction(min([best_cost[0]] + open_bounds)) if timed_out[0] \
        else objective
    return IlpSolution(assignment=assignment, objective_value=objective,
                       status=status, bound=bound,
                       nodes_explored=nodes[0], wall_time_s=wall,
                       incumbent_history=tuple(Fraction(c)
                                               for c in incumbents))


def _capture_routing(model: IlpModel, state: ScenarioState,
                     matchings) -> dict[str, int]:
    """Replay greedy forwarding flow-resolved, emitting r/b variables."""
    traffic = model.meta["traffic"]
    params = model.meta["params"]
    flows = model.meta["flows"]
    big_t = state.slot_count
    anchors = set(state.anchor_ids)
    non_anchors = set(state.non_anchor_ids)
    gs = set(state.gs_ids)
    flow_by_key = {(fl.src_node, fl.start_slot): fl for fl in flows}

    out = {name: 0 for name in model.variables
           if name.startswith(("r_", "b_"))}
    buffers: dict[int, dict[tuple[int, int], int]] = {
        i: {} for i in state.satellite_ids}
    sat_rows = {node: r for r, node in enumerate(state.satellite_ids)}
    for t in range(big_t):
        for i in state.satellite_ids:
            vol = int(traffic.f[sat_rows[i], t])
            if vol:
                buffers[i][(t, i)] = buffers[i].get((t, i), 0) + vol
        arcs = []
        for (a, b) in matchings[t]:
            if a in non_anchors and b in anchors:
                arcs.append((a, b, params.c_ss))
            elif b in non_anchors and a in anchors:
                arcs.append((b, a, params.c_ss))
            elif a in anchors and b in gs:
                arcs.append((a, b, params.c_sg))
            elif b in anchors and a in gs:
                arcs.append((b, a, params.c_sg))
        for (src, dst, cap) in sorted(arcs):
            if dst in gs:
                headroom = cap
            else:
                headroom = min(cap,
                               params.b_max - sum(buffers[dst].values()))
            for key in sorted(buffers[src]):
                if headroom <= 0:
                    break
                mv = min(headroom, buffers[src][key])
                buffers[src][key] -= mv
                if not buffers[src][key]:
                    del buffers[src][key]
                gen, origin = key
                fl = flow_by_key[(origin, gen)]
                out[r_name(fl.flow_id, src, dst, t)] += mv
                if dst not in gs:
                    buffers[dst][key] = buffers[dst].get(key, 0) + mv
                headroom -= mv
        for i in state.satellite_ids:
            for (gen, origin), cnt in buffers[i].items():
                fl = flow_by_key[(origin, gen)]
                out[b_name(fl.flow_id, i, t)] = cnt
    return out


# ---------------------------------------------------------------------------
# routing-agnostic model: layered DP over zero-run states
# ---------------------------------------------------------------------------


def _tri(k: int) -> int:
    return k * (k + 1) // 2


def _solve_railp(model: IlpModel, time_budget: float) -> IlpSolution:
    t0 = time.perf_counter()
    state: ScenarioState = model.meta["state"]
    traffic = model.meta["traffic"]
    params = model.meta["params"]
    big_t = state.slot_count
    pairs = _Pairs(state)

    if _ranging_hopeless(state, params.l_min):
        return _infeasible(model, t0, 0)

    gamma = Fraction(str(params.gamma)) if isinstance(params.gamma, float) \
        else Fraction(params.gamma)
    sat_rows = {node: r for r, node in enumerate(state.satellite_ids)}
    w_exact = ([gamma * int(traffic.f[sat_rows[i], 0])
                for i in state.non_anchor_ids]
               + [(1 - gamma) * int(traffic.f[sat_rows[i], 0])
                  for i in state.anchor_ids])
    den = 1
    for w in w_exact:
        den = den * w.denominator // gcd(den, w.denominator)
    weights = [int(w * den) for w in w_exact]
    n_rows = len(weights)
    n_na = len(state.non_anchor_ids)

    non_anchors = tuple(state.non_anchor_ids)
    anchors = tuple(state.anchor_ids)
    anchor_set = set(anchors)
    gs = set(state.gs_ids)
    effects = {}
    for m in enumerate_maximal_matchings(state):
        accn = 0
        acca = 0
        pbits = 0
        for (a, b) in m:
            if a in non_anchors and b in anchor_set:
                accn |= 1 << non_anchors.index(a)
            elif b in non_anchors and a in anchor_set:
                accn |= 1 << non_anchors.index(b)
            elif a in anchor_set and b in gs:
                acca |= 1 << anchors.index(a)
            elif b in anchor_set and a in gs:
                acca |= 1 << anchors.index(b)
            key = (min(a, b), max(a, b))
            if key in pairs.index:
                pbits |= 1 << pairs.index[key]
        sig = (accn, acca, pbits)
        if sig not in effects:
            effects[sig] = m
    effect_list = sorted(effects.items())

    def leaf_penalty(runs) -> int:
        return sum(w * _tri(r) for w, r in zip(weights, runs))

    # which rows can ever be accessed (visible partner of the right kind)
    vis = state.visibility
    accessible = ([any(vis[i, j] for j in anchors)
                   for i in state.non_anchor_ids]
                  + [any(vis[i, g] for g in state.gs_ids)
                     for i in state.anchor_ids])
    n_closes = max(1, len(anchors))

    def future_penalty(runs, rem: int) -> int:
        """Admissible lower bound on zeros still to come with ``rem`` slots.

        Immediate-close baseline, exact trailing runs for rows that can
        never be accessed, plus a capacity correction: per future slot at
        most one row per anchor closes, so at offset x at least
        (accessible rows - anchors * x) rows extend their open run and each
        extension of row k costs at least weights[k] * (runs[k] + x).
        """
        base = 0
        open_rows = []
        for k in range(n_rows):
            if accessible[k]:
                base += weights[k] * _tri(runs[k])
                open_rows.append(k)
            else:
                base += weights[k] * _tri(runs[k] + rem)
        extra = 0
        for x in range(1, rem + 1):
            still_open = len(open_rows) - n_closes * x
            if still_open <= 0:
                break
            incs = sorted(weights[k] * (runs[k] + x) for k in open_rows)
            extra += sum(incs[:still_open])
        return base + extra

    def apply_effect(runs, w_closed, sig):
        accn, acca, _ = sig
        out = list(runs)
        w2 = w_closed
        for k in range(n_rows):
            acc = (accn >> k) & 1 if k < n_na else (acca >> (k - n_na)) & 1
            if acc:
                w2 += weights[k] * _tri(runs[k])
                out[k] = 0
            else:
                out[k] = runs[k] + 1
        return tuple(out), w2

    # warm-start incumbent: bounded best-bound-first descent
    incumbent: list[Optional[int]] = [None]
    incumbent_path: list = [None]

    def descend(tries: int = 80):
        visits = [0]

        def rec(t, runs, lbits, w_closed, path):
            if visits[0] > tries:
                return
            if t == big_t:
                if pairs.short_by(lbits, params.l_min) == 0:
                    total = w_closed + leaf_penalty(runs)
                    if incumbent[0] is None or total < incumbent[0]:
                        incumbent[0] = total
                        incumbent_path[0] = tuple(path)
                visits[0] += 1
                return
            kids = []
            for sig, matching in effect_list:
                if pairs.short_by(lbits | sig[2],
                                  params.l_min) > big_t - t - 1:
                    continue
                runs2, w2 = apply_effect(runs, w_closed, sig)
                kids.append((w2 + future_penalty(runs2, big_t - t - 1),
                             w2, runs2, sig[2], matching))
            kids.sort(key=lambda z: (z[0], z[4]))
            for _, w2, runs2, pbits, matching in kids[:3]:
                path.append(matching)
                rec(t + 1, runs2, lbits | pbits, w2, path)
                path.pop()
                if visits[0] > tries:
                    return

        rec(0, (0,) * n_rows, 0, 0, [])

    descend()

    # layered DP with parent pointers, pruned by the incumbent bound
    start_key = ((0,) * n_rows, 0)
    layers: list[dict] = [{start_key: (0, None, None)}]
    deadline = t0 + time_budget
    timed_out = False
    nodes = 0
    for t in range(big_t):
        nxt: dict = {}
        rem_after = big_t - t - 1
        future_cache: dict[tuple, int] = {}
        for (runs, lbits), (w_closed, _, _) in layers[t].items():
            nodes += 1
            if time.perf_counter() > deadline:
                timed_out = True
                break
            for sig, matching in effect_list:
                if pairs.short_by(lbits | sig[2], params.l_min) > rem_after:
                    continue
                runs2, w2 = apply_effect(runs, w_closed, sig)
                if incumbent[0] is not None:
                    fut = future_cache.get(runs2)
                    if fut is None:
                        fut = future_penalty(runs2, rem_after)
                        future_cache[runs2] = fut
                    if w2 + fut > incumbent[0]:
                        continue
                key = (runs2, lbits | sig[2])
                prev = nxt.get(key)
                if prev is None or w2 < prev[0]:
                    nxt[key] = (w2, (runs, lbits), matching)
        if timed_out:
            break
        layers.append(nxt)

    if timed_out:
        return _railp_timeout(model, state, incumbent_path[0], weights,
                              den, t0, nodes)

    best_key = None
    best_total: Optional[int] = None
    for (runs, lbits), (w_closed, _, _) in layers[big_t].items():
        if pairs.short_by(lbits, params.l_min) > 0:
            continue
        total = w_closed + leaf_penalty(runs)
        if best_total is None or total < best_total:
            best_total = total
            best_key = (runs, lbits)
    if best_total is None and incumbent[0] is None:
        return _infeasible(model, t0, nodes)
    if best_total is None or (incumbent[0] is not None
                              and incumbent[0] < best_total):
        matchings = incumbent_path[0]
    else:
        matchings = []
        key = best_key
        for t in range(big_t, 0, -1):
            _, parent, matching = layers[t][key]
            matchings.append(matching)
            key = parent
        matchings = tuple(reversed(matchings))

    assignment = _railp_assignment(model, state, matchings)
    objective = evaluate_objective(model, assignment)
    return IlpSolution(assignment=assignment, objective_value=objective,
                       status="optimal", bound=objective,
                       nodes_explored=nodes,
                       wall_time_s=time.perf_counter() - t0)


def _railp_timeout(model, state, matchings, weights, den, t0, nodes):
    if matchings is None:
        return IlpSolution(assignment={}, objective_value=Fraction(0),
                           status="feasible_timeout", bound=None,
                           nodes_explored=nodes,
                           wall_time_s=time.perf_counter() - t0)
    assignment = _railp_assignment(model, state, matchings)
    objective = evaluate_objective(model, assignment)
    big_t = state.slot_count
    # every probe entry non-zero is an upper bound for the maximization
    ub = Fraction(sum(w * _tri(big_t) for w in weights), den)
    return IlpSolution(assignment=assignment, objective_value=objective,
                       status="feasible_timeout", bound=ub,
                       nodes_explored=nodes,
                       wall_time_s=time.perf_counter() - t0)


def _railp_assignment(model: IlpModel, state: ScenarioState,
                      matchings) -> dict[str, int]:
    """Full variable assignment for a schedule under the probe model."""
    assignment = _x_assignment(model, state, matchings)
    big_t = state.slot_count
    vis = state.visibility
    schedule = TopologySchedule.from_matchings(state.n_nodes, matchings)
    x = schedule.x.astype(np.int64)
    groups = (
        (state.non_anchor_ids, tuple(state.anchor_ids), delta_name),
        (state.anchor_ids, tuple(state.gs_ids), lambda_name),
    )
    for rows, pool, namer in groups:
        for i in rows:
            partners = [j for j in pool if vis[i, j]]
            access = np.zeros(big_t, dtype=np.int64)
            for j in partners:
                access += x[i, j, :]
            for rl in range(1, big_t + 1):
                for c in range(big_t - rl + 1):
                    window = int(access[c:c + rl].sum())
                    assignment[namer(rl, i, c)] = 1 if window >= 1 else 0
    return assignment
