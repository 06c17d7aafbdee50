import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from slottopo.scenario import (Node, NodeKind, ScenarioError, ScenarioState,
                               SystemParams, TopologySchedule, TrafficProfile,
                               classify_nodes, load_scenario, ranging_audit,
                               save_scenario, validate_topology)
from slottopo.synth import test_scenario, walkthrough_scenario


def symmetric_visibility(n, rng):
    vis = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                vis[i, j] = vis[j, i] = 1
    return vis


class TestClassifyNodes:
    def test_benchmark_anchor_partition(self, bench6):
        # recompute by row scan against the ground-antenna column
        state = bench6.states[0]
        gs = state.gs_ids
        expect_anchor = tuple(
            i for i in state.satellite_ids
            if any(state.visibility[i, g] for g in gs))
        anchors, non_anchors = classify_nodes(state.visibility, gs)
        assert anchors == expect_anchor == (5, 6)
        assert non_anchors == (0, 1, 2, 3, 4)

    def test_all_zero_visibility(self):
        anchors, non_anchors = classify_nodes(np.zeros((4, 4), int), [3])
        assert anchors == ()
        assert non_anchors == (0, 1, 2)

    def test_every_satellite_sees_gs(self):
        vis = np.zeros((4, 4), dtype=int)
        for i in range(3):
            vis[i, 3] = vis[3, i] = 1
        anchors, non_anchors = classify_nodes(vis, [3])
        assert anchors == (0, 1, 2)
        assert non_anchors == ()

    def test_asymmetric_rejected(self):
        vis = np.zeros((3, 3), dtype=int)
        vis[0, 1] = 1
        with pytest.raises(ScenarioError, match=r"\(0, 1\)"):
            classify_nodes(vis, [2])

    def test_non_binary_rejected(self):
        vis = np.zeros((3, 3), dtype=int)
        vis[0, 1] = vis[1, 0] = 2
        with pytest.raises(ScenarioError, match="0/1"):
            classify_nodes(vis, [2])

    @given(hst.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_partition_property(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 9))
        vis = symmetric_visibility(n, rng)
        gs = [n - 1]
        anchors, non_anchors = classify_nodes(vis, gs)
        sats = set(range(n - 1))
        assert set(anchors) | set(non_anchors) == sats
        assert set(anchors) & set(non_anchors) == set()


class TestValidateTopology:
    def test_all_zero_valid(self, bench6):
        state = bench6.states[0]
        x = TopologySchedule.empty(state.n_nodes, state.slot_count)
        assert validate_topology(x, state) == []

    def test_symmetry_violation_located(self, bench6):
        state = bench6.states[0]
        x = np.zeros((8, 8, 6), dtype=np.uint8)
        x[0, 1, 2] = 1  # x[1, 0, 2] left at 0
        out = validate_topology(TopologySchedule(x), state)
        assert any(v.constraint == "symmetry" and v.nodes == (0, 1)
                   and v.slot == 2 for v in out)

    def test_degree_violation(self, bench6):
        state = bench6.states[0]
        x = np.zeros((8, 8, 6), dtype=np.uint8)
        for j in (1, 4):  # sat1 visible to sat2 and sat5
            x[0, j, 0] = x[j, 0, 0] = 1
        out = validate_topology(TopologySchedule(x), state)
        assert any(v.constraint == "degree" and v.nodes == (0,)
                   and v.slot == 0 for v in out)

    def test_visibility_violation(self, bench6):
        state = bench6.states[0]
        x = np.zeros((8, 8, 6), dtype=np.uint8)
        x[0, 3, 0] = x[3, 0, 0] = 1  # sat1 and sat4 are not visible
        out = validate_topology(TopologySchedule(x), state)
        assert any(v.constraint == "visibility" for v in out)

    def test_dimension_mismatch(self, bench6):
        state = bench6.states[0]
        with pytest.raises(ScenarioError):
            validate_topology(TopologySchedule.empty(8, 5), state)

    @given(hst.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_matches_brute_force_on_small_tensors(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 7))
        big_t = int(rng.integers(1, 5))
        vis = symmetric_visibility(n, rng)
        nodes = tuple([Node(f"s{i}", NodeKind.SATELLITE)
                       for i in range(n - 1)]
                      + [Node("g", NodeKind.GS_ANTENNA)])
        state = ScenarioState(1, big_t, nodes, vis)
        x = (rng.random((n, n, big_t)) < 0.3).astype(np.uint8)
        for t in range(big_t):
            np.fill_diagonal(x[:, :, t], 0)
        ok = not validate_topology(TopologySchedule(x), state)
        # brute-force re-evaluation of the constraint families
        brute = True
        for t in range(big_t):
            sl = x[:, :, t]
            if (sl != sl.T).any():
                brute = False
            if ((sl == 1) & (vis == 0)).any():
                brute = False
            if (sl.sum(axis=1) > 1).any():
                brute = False
        assert ok == brute


class TestRangingAudit:
    def test_repeated_partner_counts_once(self, bench6):
        state = bench6.states[0]
        matchings = [[(0, 1)]] * 6
        sched = TopologySchedule.from_matchings(8, matchings)
        audit = ranging_audit(sched, state, 1)
        assert audit.counts[0] == 1
        assert audit.counts[1] == 1

    def test_gsl_partner_never_counts(self, bench6):
        state = bench6.states[0]
        sched = TopologySchedule.from_matchings(8, [[(5, 7)]] * 6)
        audit = ranging_audit(sched, state, 1)
        assert audit.counts[5] == 0

    def test_zero_requirement_always_passes(self, bench6):
        state = bench6.states[0]
        sched = TopologySchedule.empty(8, 6)
        assert ranging_audit(sched, state, 0).passed

    def test_monotone_in_requirement(self, bench6):
        state = bench6.states[0]
        rng = np.random.default_rng(7)
        matchings = []
        pairs = state.visible_pairs()
        for _ in range(6):
            matchings.append([pairs[rng.integers(len(pairs))]])
        sched = TopologySchedule.from_matchings(8, matchings)
        passes = [ranging_audit(sched, state, l).passed for l in range(6)]
        assert passes == sorted(passes, reverse=True)

    def test_round_robin_reaches_full_count(self):
        # 4 satellites, complete visibility, no GS: 3 slots of round robin
        nodes = tuple(Node(f"s{i}", NodeKind.SATELLITE) for i in range(4))
        vis = 1 - np.eye(4, dtype=np.uint8)
        state = ScenarioState(1, 3, nodes, vis)
        rounds = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]]
        sched = TopologySchedule.from_matchings(4, rounds)
        audit = ranging_audit(sched, state, 3)
        assert audit.passed
        assert set(audit.counts.values()) == {3}


class TestSystemParams:
    def test_table_defaults_accepted(self):
        SystemParams()  # M = 50 with C_sg = 50 is valid

    def test_m_big_below_capacity_refused(self):
        with pytest.raises(ScenarioError, match="m_big"):
            SystemParams(m_big=49)

    def test_weight_factor_ranges(self):
        with pytest.raises(ScenarioError):
            SystemParams(gamma=1.5)
        with pytest.raises(ScenarioError):
            SystemParams(eta=-0.1)

    def test_horizon_checks(self):
        p = SystemParams()
        p.validate_for_horizon(20)
        with pytest.raises(ScenarioError, match="m_dot"):
            p.validate_for_horizon(25)

    def test_tightened(self):
        p = SystemParams().tightened(20)
        assert p.m_dot == 21
        assert p.m_big == 51
        assert p.m_bar == p.m_tilde == 21


class TestScenarioIO:
    def test_roundtrip(self, tmp_path, bench6):
        path = tmp_path / "scn.json"
        save_scenario(bench6, path)
        loaded = load_scenario(path)
        assert loaded.params == bench6.params
        assert [nd.name for nd in loaded.nodes] == \
            [nd.name for nd in bench6.nodes]
        assert np.array_equal(loaded.states[0].visibility,
                              bench6.states[0].visibility)
        assert loaded.service_nodes == bench6.service_nodes

    def test_benchmark_file_shape(self, bench6):
        state = bench6.states[0]
        assert len(bench6.states) == 1
        assert state.n_nodes == 8
        assert state.slot_count == 6

    def test_asymmetric_visibility_names_pair(self, tmp_path, bench6):
        path = tmp_path / "bad.json"
        save_scenario(bench6, path)
        doc = json.loads(path.read_text())
        doc["states"][0]["visibility"][0][1] = 1
        doc["states"][0]["visibility"][1][0] = 0
        path.write_text(json.dumps(doc))
        with pytest.raises(ScenarioError, match=r"\(0, 1\)"):
            load_scenario(path)

    def test_unknown_service_node_rejected(self, tmp_path, bench6):
        path = tmp_path / "bad.json"
        save_scenario(bench6, path)
        doc = json.loads(path.read_text())
        doc["traffic"]["service_nodes"] = ["nope"]
        path.write_text(json.dumps(doc))
        with pytest.raises(ScenarioError, match="nope"):
            load_scenario(path)

    def test_multi_antenna_expansion(self):
        from slottopo.synth import synthetic_scenario
        scn = synthetic_scenario(n_satellites=6, antennas_per_gs=(2, 1),
                                 n_states=2, slot_count=4, seed=3)
        kinds = [nd.kind for nd in scn.nodes]
        assert kinds.count(NodeKind.GS_ANTENNA) == 3
        groups = {nd.gs_group for nd in scn.nodes
                  if nd.kind is NodeKind.GS_ANTENNA}
        assert groups == {"gs1", "gs2"}


class TestTrafficProfile:
    def test_uniform_construction(self, bench6):
        state = bench6.states[0]
        tr = bench6.traffic_for(state)
        assert tr.f.shape == (7, 6)
        # odd-numbered satellites carry the service payload
        assert list(tr.f[:, 0]) == [10, 6, 10, 6, 10, 6, 10]
        assert tr.is_uniform()

    def test_flow_metadata(self, bench6):
        state = bench6.states[0]
        tr = bench6.traffic_for(state)
        flows = list(tr.flows())
        assert len(flows) == 7 * 6
        assert flows[0] == (0, 0, 10)

    def test_negative_traffic_rejected(self):
        with pytest.raises(ScenarioError):
            TrafficProfile(f=np.array([[-1]]), f_td=1, f_sm=0,
                           service_flags=(False,))


def test_walkthrough_anchor_partition(walkthrough):
    state = walkthrough.states[0]
    assert state.anchor_ids == (4, 5, 6)
    assert state.non_anchor_ids == (0, 1, 2, 3)
    # sat4 can only reach sat3 and sat7
    nbrs = [j for j in state.satellite_ids if state.visibility[3, j]]
    assert nbrs == [2, 6]
