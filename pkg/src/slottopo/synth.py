"""Canonical and synthetic scenario builders.

``test_scenario``: the 8-node benchmark (7 satellites, 1 ground antenna,
two anchors) used throughout the test suite, with the benchmark parameter
column (eta=0.4, beta=700, gamma=0.5, L_min=2). ``walkthrough_scenario``:
the 8-node, 4-slot network behind the worked heuristic example (three
anchors, one antenna, beta=300, eta=0.5). Both are also shipped as frozen
JSON files under ``slottopo/data`` and the tests assert builder/file
agreement.

``synthetic_scenario`` generates seeded random multi-state scenarios at
arbitrary scale for runtime studies: satellite-to-satellite visibility is
Bernoulli with a minimum-degree repair pass, a subset of satellites see
ground antennas, and antennas are grouped into stations.
"""

from __future__ import annotations

import numpy as np

from .scenario import (Node, NodeKind, Scenario, ScenarioState, SystemParams)

__all__ = ["test_scenario", "walkthrough_scenario", "synthetic_scenario"]


def _state_from_pairs(index: int, slots: int, nodes: tuple[Node, ...],
                      pairs) -> ScenarioState:
    n = len(nodes)
    vis = np.zeros((n, n), dtype=np.uint8)
    for i, j in pairs:
        vis[i, j] = 1
        vis[j, i] = 1
    return ScenarioState(index=index, slot_count=slots, nodes=nodes,
                         visibility=vis)


def test_scenario(slot_count: int = 6) -> Scenario:
    """The 8-node benchmark: ring of five non-anchors, two anchors, one
    ground antenna seen only by the anchors."""
    nodes = tuple(
        [Node(f"sat{i}", NodeKind.SATELLITE) for i in range(1, 8)]
        + [Node("gs1-a1", NodeKind.GS_ANTENNA, gs_group="gs1")])
    pairs = [
        # non-anchor ring sat1..sat5
        (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
        # non-anchor to anchor
        (0, 5), (1, 5), (2, 5), (2, 6), (3, 6), (4, 6),
        # anchor pair and ground links
        (5, 6), (5, 7), (6, 7),
    ]
    params = SystemParams(l_min=2, b_max=150, c_ss=25, c_sg=50, gamma=0.5,
                          eta=0.4, alpha=2, beta=700.0, q=50.0,
                          m_dot=25, m_big=50, m_bar=25, m_tilde=25)
    state = _state_from_pairs(1, slot_count, nodes, pairs)
    return Scenario(nodes=nodes, states=(state,), f_td=6, f_sm=4,
                    service_nodes=("sat1", "sat3", "sat5", "sat7"),
                    params=params)


def walkthrough_scenario() -> Scenario:
    """The 8-node, 4-slot worked example: anchors sat5..sat7, antenna gs1-a1,
    non-anchor sat4 reachable only via sat3 and sat7."""
    nodes = tuple(
        [Node(f"sat{i}", NodeKind.SATELLITE) for i in range(1, 8)]
        + [Node("gs1-a1", NodeKind.GS_ANTENNA, gs_group="gs1")])
    pairs = [
        # non-anchor chain sat1-sat2-sat3-sat4
        (0, 1), (1, 2), (2, 3),
        # non-anchor to anchor
        (0, 4), (1, 5), (2, 5), (2, 6), (3, 6),
        # anchor pairs
        (4, 5), (4, 6), (5, 6),
        # ground links (all anchors see the antenna)
        (4, 7), (5, 7), (6, 7),
    ]
    params = SystemParams(l_min=2, b_max=150, c_ss=25, c_sg=50, gamma=0.5,
                          eta=0.5, alpha=2, beta=300.0, q=50.0,
                          m_dot=25, m_big=50, m_bar=25, m_tilde=25)
    state = _state_from_pairs(1, 4, nodes, pairs)
    return Scenario(nodes=nodes, states=(state,), f_td=6, f_sm=4,
                    service_nodes=("sat1", "sat3", "sat5", "sat7"),
                    params=params)


def synthetic_scenario(
    n_satellites: int = 30,
    antennas_per_gs: tuple[int, ...] = (2, 2, 2),
    n_states: int = 288,
    slot_count: int = 20,
    seed: int = 0,
    isl_density: float = 0.45,
    anchor_fraction: float = 0.4,
    params: SystemParams | None = None,
) -> Scenario:
    """Seeded random multi-state scenario at configurable scale.

    Each state draws symmetric satellite visibility with the given density,
    then repairs the satellite graph to a minimum degree of ``l_min`` so
    the ranging requirement is not structurally hopeless. A random
    ``anchor_fraction`` of satellites sees ground antennas; every antenna
    sees at least one satellite.
    """
    if params is None:
        params = SystemParams(l_min=6, b_max=150, c_ss=25, c_sg=50,
                              gamma=0.1, eta=0.7, alpha=2, beta=500.0,
                              q=50.0, m_dot=max(25, slot_count + 1),
                              m_big=50, m_bar=max(25, slot_count),
                              m_tilde=max(25, slot_count))
    rng = np.random.default_rng(seed)
    sat_nodes = [Node(f"sat{i:02d}", NodeKind.SATELLITE)
                 for i in range(1, n_satellites + 1)]
    gs_nodes = []
    for g, count in enumerate(antennas_per_gs, start=1):
        for a in range(1, count + 1):
            gs_nodes.append(Node(f"gs{g}-a{a}", NodeKind.GS_ANTENNA,
                                 gs_group=f"gs{g}"))
    nodes = tuple(sat_nodes + gs_nodes)
    n = len(nodes)
    n_gs = len(gs_nodes)

    states = []
    for s in range(n_states):
        vis = np.zeros((n, n), dtype=np.uint8)
        draw = rng.random((n_satellites, n_satellites)) < isl_density
        for i in range(n_satellites):
            for j in range(i + 1, n_satellites):
                if draw[i, j]:
                    vis[i, j] = vis[j, i] = 1
        # repair pass: every satellite needs at least l_min sat partners
        for i in range(n_satellites):
            deg = int(vis[i, :n_satellites].sum())
            while deg < params.l_min:
                j = int(rng.integers(n_satellites))
                if j != i and not vis[i, j]:
                    vis[i, j] = vis[j, i] = 1
                    deg += 1
        n_anchor = max(1, round(anchor_fraction * n_satellites))
        anchor_choice = rng.choice(n_satellites, size=n_anchor,
                                   replace=False)
        for g in range(n_gs):
            seen = [i for i in anchor_choice if rng.random() < 0.6]
            if not seen:
                seen = [int(anchor_choice[int(rng.integers(n_anchor))])]
            for i in seen:
                vis[i, n_satellites + g] = 1
                vis[n_satellites + g, i] = 1
        states.append(ScenarioState(index=s + 1, slot_count=slot_count,
                                    nodes=nodes, visibility=vis))
    service = tuple(nd.name for k, nd in enumerate(sat_nodes) if k % 2 == 0)
    return Scenario(nodes=nodes, states=tuple(states), f_td=6, f_sm=4,
                    service_nodes=service, params=params)
