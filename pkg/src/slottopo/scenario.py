"""Core domain model: scenario states, traffic, parameters, schedules.

A scenario is a list of fixed-visibility states. Within a state the network
is a set of nodes (satellites and ground-station antennas, one node per
antenna) with a constant symmetric visibility matrix, scheduled over a fixed
number of equal time slots. Satellites visible to at least one antenna in a
state are *anchors*; the rest are *non-anchors*.

Scenario file format (JSON):

    {
      "nodes":  [{"name": "sat01", "kind": "satellite"},
                 {"name": "gs1-a1", "kind": "gs_antenna", "gs_group": "gs1"},
                 ...],
      "states": [{"index": 1, "slots": 6, "visibility": [[0,1,...], ...]},
                 ...],
      "traffic": {"f_td": 6, "f_sm": 4, "service_nodes": ["sat01", ...]},
      "params":  {"l_min": 2, "b_max": 150, "c_ss": 25, "c_sg": 50,
                  "gamma": 0.5, "eta": 0.4, "alpha": 2, "beta": 700,
                  "q": 50, "m_dot": 25, "m_big": 50, "m_bar": 25,
                  "m_tilde": 25}
    }

Visibility matrices are row-major 0/1 over the node order fixed by "nodes".
Node indices are stable across slots within a state; identity across states
is by node name.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterator, Optional, Sequence

import numpy as np

__all__ = [
    "NodeKind",
    "Node",
    "SystemParams",
    "ScenarioState",
    "TrafficProfile",
    "TopologySchedule",
    "Scenario",
    "Violation",
    "RangingAudit",
    "ScenarioError",
    "classify_nodes",
    "validate_topology",
    "ranging_audit",
    "load_scenario",
    "save_scenario",
]


class ScenarioError(ValueError):
    """Raised for scenario files or inputs that violate model invariants."""


class NodeKind(str, Enum):
    SATELLITE = "satellite"
    GS_ANTENNA = "gs_antenna"


@dataclass(frozen=True)
class Node:
    name: str
    kind: NodeKind
    gs_group: Optional[str] = None  # physical GS an antenna belongs to


@dataclass(frozen=True)
class SystemParams:
    """Scenario-wide algorithm parameters (Table-style configuration).

    ``m_dot``/``m_big``/``m_bar``/``m_tilde`` are the big-M constants of the
    optimization models. ``m_dot`` must exceed the slot count and the other
    big-Ms must cover their linked sums; horizon-dependent checks live in
    :meth:`validate_for_horizon` since the slot count is per state.
    """

    l_min: int = 2
    b_max: int = 150
    c_ss: int = 25
    c_sg: int = 50
    gamma: float = 0.5
    eta: float = 0.4
    alpha: float = 2.0
    beta: float = 700.0
    q: float = 50.0
    m_dot: int = 25
    m_big: int = 50
    m_bar: int = 25
    m_tilde: int = 25

    def __post_init__(self) -> None:
        if self.l_min < 0:
            raise ScenarioError("l_min must be non-negative")
        if self.b_max <= 0 or self.c_ss <= 0 or self.c_sg <= 0:
            raise ScenarioError("capacities b_max, c_ss, c_sg must be positive")
        if not (0.0 <= self.gamma <= 1.0):
            raise ScenarioError("gamma must lie in [0, 1]")
        if not (0.0 <= self.eta <= 1.0):
            raise ScenarioError("eta must lie in [0, 1]")
        # m_big >= max(c_ss, c_sg) keeps the link-activation constraint from
        # binding below capacity; equality is sufficient (Table-I style M=50
        # with C_sg=50 is valid).
        if self.m_big < max(self.c_ss, self.c_sg):
            raise ScenarioError(
                f"m_big={self.m_big} must be at least max(c_ss, c_sg)="
                f"{max(self.c_ss, self.c_sg)}")

    def validate_for_horizon(self, slot_count: int) -> None:
        """Check horizon-dependent big-M sizes for a state with T slots."""
        if self.m_dot <= slot_count:
            raise ScenarioError(
                f"m_dot={self.m_dot} must exceed the slot count {slot_count}")
        if self.m_bar < slot_count or self.m_tilde < slot_count:
            raise ScenarioError(
                f"m_bar/m_tilde must be at least the slot count {slot_count}")

    def tightened(self, slot_count: int) -> "SystemParams":
        """Recompute big-M constants to their minimum safe values."""
        return replace(
            self,
            m_dot=slot_count + 1,
            m_big=max(self.c_ss, self.c_sg) + 1,
            m_bar=slot_count + 1,
            m_tilde=slot_count + 1,
        )


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def classify_nodes(
    visibility: np.ndarray, gs_ids: Sequence[int]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split satellites into anchors and non-anchors.

    A satellite is an anchor iff it is visible to at least one ground-station
    antenna node. Every index not in ``gs_ids`` is treated as a satellite.

    Returns ``(anchors, non_anchors)`` as sorted index tuples.
    """
    vis = np.asarray(visibility)
    n = vis.shape[0]
    if vis.ndim != 2 or vis.shape[0] != vis.shape[1]:
        raise ScenarioError("visibility must be a square matrix")
    if not np.isin(vis, (0, 1)).all():
        raise ScenarioError("visibility must be a 0/1 matrix")
    if np.any(vis != vis.T):
        i, j = np.argwhere(vis != vis.T)[0]
        raise ScenarioError(f"visibility is not symmetric at pair ({i}, {j})")
    if np.any(np.diag(vis) != 0):
        raise ScenarioError("visibility diagonal must be zero")
    gs = sorted(set(int(g) for g in gs_ids))
    for g in gs:
        if not (0 <= g < n):
            raise ScenarioError(f"ground node index {g} out of range")
    sats = [i for i in range(n) if i not in set(gs)]
    anchors = tuple(i for i in sats if gs and vis[i, gs].any())
    non_anchors = tuple(i for i in sats if i not in set(anchors))
    return anchors, non_anchors


@dataclass(frozen=True)
class ScenarioState:
    """One fixed-visibility window: nodes, slot count, visibility matrix."""

    index: int
    slot_count: int
    nodes: tuple[Node, ...]
    visibility: np.ndarray
    anchor_ids: tuple[int, ...] = field(init=False)
    non_anchor_ids: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        vis = np.asarray(self.visibility, dtype=np.uint8)
        if vis.shape != (len(self.nodes), len(self.nodes)):
            raise ScenarioError(
                f"state {self.index}: visibility shape {vis.shape} does not "
                f"match {len(self.nodes)} nodes")
        if self.slot_count < 0:
            raise ScenarioError(f"state {self.index}: negative slot count")
        object.__setattr__(self, "visibility", _frozen(vis))
        anchors, non_anchors = classify_nodes(vis, self.gs_ids)
        object.__setattr__(self, "anchor_ids", anchors)
        object.__setattr__(self, "non_anchor_ids", non_anchors)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def satellite_ids(self) -> tuple[int, ...]:
        return tuple(i for i, nd in enumerate(self.nodes)
                     if nd.kind is NodeKind.SATELLITE)

    @property
    def gs_ids(self) -> tuple[int, ...]:
        return tuple(i for i, nd in enumerate(self.nodes)
                     if nd.kind is NodeKind.GS_ANTENNA)

    def visible_pairs(self) -> tuple[tuple[int, int], ...]:
        """All visible unordered pairs (i < j)."""
        vis = self.visibility
        return tuple((int(i), int(j)) for i, j in np.argwhere(np.triu(vis, 1)))

    def visible_satellite_pairs(self) -> tuple[tuple[int, int], ...]:
        sat = set(self.satellite_ids)
        return tuple(p for p in self.visible_pairs()
                     if p[0] in sat and p[1] in sat)


@dataclass(frozen=True)
class TrafficProfile:
    """Packets generated per satellite per slot, with flow metadata.

    ``f`` has one row per satellite of the owning state (ordered like
    ``state.satellite_ids``) and one column per slot. Flow ``(i, t)`` has
    source satellite row ``i`` and generation slot ``t`` (1-based slot in
    formulas, 0-based here).
    """

    f: np.ndarray
    f_td: int
    f_sm: int
    service_flags: tuple[bool, ...]

    def __post_init__(self) -> None:
        f = np.asarray(self.f, dtype=np.int64)
        if f.ndim != 2:
            raise ScenarioError("traffic matrix must be 2-D")
        if (f < 0).any():
            raise ScenarioError("traffic volumes must be non-negative")
        if len(self.service_flags) != f.shape[0]:
            raise ScenarioError("service flags must match satellite count")
        object.__setattr__(self, "f", _frozen(f))

    @classmethod
    def uniform(cls, state: ScenarioState, f_td: int, f_sm: int,
                service_nodes: Sequence[str]) -> "TrafficProfile":
        """Telemetry for everyone, plus service packets for flagged nodes."""
        names = [state.nodes[i].name for i in state.satellite_ids]
        flags = tuple(nm in set(service_nodes) for nm in names)
        rows = [[f_td + (f_sm if fl else 0)] * state.slot_count for fl in flags]
        f = np.array(rows, dtype=np.int64).reshape(len(flags), state.slot_count)
        return cls(f=f, f_td=f_td, f_sm=f_sm, service_flags=flags)

    @property
    def n_satellites(self) -> int:
        return int(self.f.shape[0])

    @property
    def slot_count(self) -> int:
        return int(self.f.shape[1])

    def flows(self) -> Iterator[tuple[int, int, int]]:
        """Yield (satellite_row, generation_slot, volume) for volume > 0."""
        for i in range(self.f.shape[0]):
            for t in range(self.f.shape[1]):
                v = int(self.f[i, t])
                if v > 0:
                    yield i, t, v

    def is_uniform(self) -> bool:
        return all((self.f[r] == self.f[r, 0]).all()
                   for r in range(self.f.shape[0]))


@dataclass(frozen=True)
class TopologySchedule:
    """Binary link-assignment tensor x[i, j, t] over one state."""

    x: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=np.uint8)
        if x.ndim != 3 or x.shape[0] != x.shape[1]:
            raise ScenarioError("schedule tensor must have shape (N, N, T)")
        object.__setattr__(self, "x", _frozen(x))

    @classmethod
    def empty(cls, n_nodes: int, slot_count: int) -> "TopologySchedule":
        return cls(np.zeros((n_nodes, n_nodes, slot_count), dtype=np.uint8))

    @classmethod
    def from_matchings(
        cls, n_nodes: int,
        matchings: Sequence[Sequence[tuple[int, int]]],
    ) -> "TopologySchedule":
        x = np.zeros((n_nodes, n_nodes, len(matchings)), dtype=np.uint8)
        for t, m in enumerate(matchings):
            for i, j in m:
                x[i, j, t] = 1
                x[j, i, t] = 1
        return cls(x)

    @property
    def n_nodes(self) -> int:
        return int(self.x.shape[0])

    @property
    def slot_count(self) -> int:
        return int(self.x.shape[2])

    def matching_at(self, t: int) -> tuple[tuple[int, int], ...]:
        sl = self.x[:, :, t]
        return tuple((int(i), int(j)) for i, j in np.argwhere(np.triu(sl, 1)))

    def link_matrix(self) -> np.ndarray:
        """ell[i, j] = 1 iff nodes i and j are linked in at least one slot."""
        return (self.x.sum(axis=2) >= 1).astype(np.uint8)

    def permuted_slots(self, order: Sequence[int]) -> "TopologySchedule":
        return TopologySchedule(self.x[:, :, list(order)])


@dataclass(frozen=True)
class Violation:
    """One broken schedule constraint, with its location."""

    constraint: str  # binary | symmetry | visibility | degree | diagonal
    nodes: tuple[int, ...]
    slot: Optional[int]
    detail: str

    def __str__(self) -> str:
        where = f" slot {self.slot}" if self.slot is not None else ""
        return f"{self.constraint} at nodes {self.nodes}{where}: {self.detail}"


def validate_topology(
    schedule: TopologySchedule, state: ScenarioState
) -> list[Violation]:
    """Check a schedule against the per-slot link constraints.

    Returns an empty list iff the tensor is binary, symmetric, respects
    visibility, has a zero diagonal, and no node holds two links in a slot.
    """
    x = np.asarray(schedule.x)
    n, t_cnt = state.n_nodes, state.slot_count
    if x.shape != (n, n, t_cnt):
        raise ScenarioError(
            f"schedule shape {x.shape} does not match state "
            f"({n} nodes, {t_cnt} slots)")
    out: list[Violation] = []
    bad = np.argwhere(~np.isin(x, (0, 1)))
    for i, j, t in bad[:16]:
        out.append(Violation("binary", (int(i), int(j)), int(t),
                             f"x={x[i, j, t]} is not 0/1"))
    if bad.size:
        return out
    for t in range(t_cnt):
        sl = x[:, :, t]
        for i, j in np.argwhere(sl != sl.T):
            if i < j:
                out.append(Violation("symmetry", (int(i), int(j)), t,
                                     "x[i,j,t] != x[j,i,t]"))
        for i in np.argwhere(np.diag(sl) != 0).ravel():
            out.append(Violation("diagonal", (int(i),), t, "self link"))
        for i, j in np.argwhere((sl == 1) & (state.visibility == 0)):
            if i < j:
                out.append(Violation("visibility", (int(i), int(j)), t,
                                     "link between invisible nodes"))
        deg = sl.sum(axis=1)
        for i in np.argwhere(deg > 1).ravel():
            out.append(Violation("degree", (int(i),), t,
                                 f"node holds {int(deg[i])} links"))
    return out


@dataclass(frozen=True)
class RangingAudit:
    """Distinct satellite-partner counts vs. the ranging requirement."""

    counts: dict[int, int]  # satellite index -> distinct satellite partners
    l_min: int
    passed: bool
    failing: tuple[int, ...]


def ranging_audit(
    schedule: TopologySchedule, state: ScenarioState, l_min: int
) -> RangingAudit:
    """Count distinct satellite partners per satellite across all slots.

    Ground-antenna partners never count toward ranging. Passes iff every
    satellite reaches at least ``l_min`` distinct satellite partners.
    """
    ell = schedule.link_matrix()
    sats = state.satellite_ids
    counts: dict[int, int] = {}
    for i in sats:
        counts[i] = int(sum(ell[i, j] for j in sats if j != i))
    failing = tuple(i for i in sats if counts[i] < l_min)
    return RangingAudit(counts=counts, l_min=l_min,
                        passed=not failing, failing=failing)


@dataclass(frozen=True)
class Scenario:
    """A loaded scenario: shared node list, states, traffic rule, params."""

    nodes: tuple[Node, ...]
    states: tuple[ScenarioState, ...]
    f_td: int
    f_sm: int
    service_nodes: tuple[str, ...]
    params: SystemParams

    def traffic_for(self, state: ScenarioState) -> TrafficProfile:
        return TrafficProfile.uniform(state, self.f_td, self.f_sm,
                                      self.service_nodes)

    def state_by_index(self, index: int) -> ScenarioState:
        for st in self.states:
            if st.index == index:
                return st
        raise ScenarioError(f"no state with index {index}")


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ScenarioError(msg)


def load_scenario(path: str | Path) -> Scenario:
    """Parse and validate a scenario JSON file.

    Raises :class:`ScenarioError` naming the offending element on parse or
    invariant failures.
    """
    p = Path(path)
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{p}: invalid JSON ({e})") from e
    for key in ("nodes", "states", "traffic", "params"):
        _require(key in raw, f"{p}: missing top-level key '{key}'")

    nodes: list[Node] = []
    seen: set[str] = set()
    for k, nd in enumerate(raw["nodes"]):
        _require(isinstance(nd, dict) and "name" in nd and "kind" in nd,
                 f"{p}: nodes[{k}] needs 'name' and 'kind'")
        _require(nd["kind"] in (NodeKind.SATELLITE.value,
                                NodeKind.GS_ANTENNA.value),
                 f"{p}: nodes[{k}] has unknown kind '{nd['kind']}'")
        _require(nd["name"] not in seen, f"{p}: duplicate node '{nd['name']}'")
        seen.add(nd["name"])
        nodes.append(Node(name=nd["name"], kind=NodeKind(nd["kind"]),
                          gs_group=nd.get("gs_group")))

    try:
        params = SystemParams(**raw["params"])
    except TypeError as e:
        raise ScenarioError(f"{p}: bad params ({e})") from e

    states: list[ScenarioState] = []
    for k, st in enumerate(raw["states"]):
        for key in ("index", "slots", "visibility"):
            _require(key in st, f"{p}: states[{k}] missing '{key}'")
        vis = np.asarray(st["visibility"])
        try:
            state = ScenarioState(index=int(st["index"]),
                                  slot_count=int(st["slots"]),
                                  nodes=tuple(nodes), visibility=vis)
        except ScenarioError as e:
            raise ScenarioError(f"{p}: states[{k}]: {e}") from e
        params.validate_for_horizon(state.slot_count)
        states.append(state)

    tr = raw["traffic"]
    for key in ("f_td", "f_sm", "service_nodes"):
        _require(key in tr, f"{p}: traffic missing '{key}'")
    _require(int(tr["f_td"]) >= 0 and int(tr["f_sm"]) >= 0,
             f"{p}: traffic sizes must be non-negative")
    names = {nd.name for nd in nodes}
    for s in tr["service_nodes"]:
        _require(s in names, f"{p}: unknown service node '{s}'")

    return Scenario(nodes=tuple(nodes), states=tuple(states),
                    f_td=int(tr["f_td"]), f_sm=int(tr["f_sm"]),
                    service_nodes=tuple(tr["service_nodes"]), params=params)


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    """Write a scenario back to the JSON interchange format."""
    doc = {
        "nodes": [
            {"name": nd.name, "kind": nd.kind.value,
             **({"gs_group": nd.gs_group} if nd.gs_group else {})}
            for nd in scenario.nodes
        ],
        "states": [
            {"index": st.index, "slots": st.slot_count,
             "visibility": st.visibility.astype(int).tolist()}
            for st in scenario.states
        ],
        "traffic": {"f_td": scenario.f_td, "f_sm": scenario.f_sm,
                    "service_nodes": list(scenario.service_nodes)},
        "params": {
            "l_min": scenario.params.l_min, "b_max": scenario.params.b_max,
            "c_ss": scenario.params.c_ss, "c_sg": scenario.params.c_sg,
            "gamma": scenario.params.gamma, "eta": scenario.params.eta,
            "alpha": scenario.params.alpha, "beta": scenario.params.beta,
            "q": scenario.params.q, "m_dot": scenario.params.m_dot,
            "m_big": scenario.params.m_big, "m_bar": scenario.params.m_bar,
            "m_tilde": scenario.params.m_tilde,
        },
    }
    Path(path).write_text(json.dumps(doc, indent=1))
