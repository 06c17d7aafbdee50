import random

import numpy as np
import pytest

from slottopo.scenario import (Node, NodeKind, Scenario, ScenarioState,
                               SystemParams, TrafficProfile)
from slottopo.synth import test_scenario, walkthrough_scenario


@pytest.fixture(scope="session")
def bench6():
    """8-node benchmark scenario, 6 slots."""
    return test_scenario(6)


@pytest.fixture(scope="session")
def bench4():
    return test_scenario(4)


@pytest.fixture(scope="session")
def walkthrough():
    return walkthrough_scenario()


def tiny_instance(seed: int):
    """Seeded random desk-scale instance for oracle comparisons.

    3-4 satellites, one ground antenna, 2-3 slots, small link capacities so
    routing contention actually happens, visibility dense enough that some
    schedule is usually ranging-feasible.
    """
    rng = random.Random(seed)
    n_sats = rng.choice((3, 4))
    slot_count = rng.choice((2, 3))
    nodes = tuple([Node(f"sat{i}", NodeKind.SATELLITE)
                   for i in range(1, n_sats + 1)]
                  + [Node("gs1-a1", NodeKind.GS_ANTENNA, gs_group="gs1")])
    n = n_sats + 1
    vis = np.zeros((n, n), dtype=np.uint8)
    for i in range(n_sats):
        for j in range(i + 1, n_sats):
            if rng.random() < 0.6:
                vis[i, j] = vis[j, i] = 1
    n_anchor = rng.choice((1, 2))
    for i in rng.sample(range(n_sats), n_anchor):
        vis[i, n_sats] = vis[n_sats, i] = 1
    params = SystemParams(
        l_min=rng.choice((0, 1)), b_max=150,
        c_ss=rng.choice((1, 2, 3)), c_sg=rng.choice((2, 3, 4)),
        gamma=0.5, eta=0.4, alpha=2, beta=300.0, q=50.0,
        m_dot=max(25, slot_count + 1), m_big=50, m_bar=25, m_tilde=25)
    state = ScenarioState(index=1, slot_count=slot_count, nodes=nodes,
                          visibility=vis)
    f_td = rng.choice((1, 2))
    f_sm = rng.choice((0, 1))
    service = tuple(nd.name for k, nd in enumerate(nodes[:-1]) if k % 2 == 0)
    traffic = TrafficProfile.uniform(state, f_td, f_sm, service)
    scenario = Scenario(nodes=nodes, states=(state,), f_td=f_td, f_sm=f_sm,
                        service_nodes=service, params=params)
    return scenario, state, traffic, params
