"""Fairness-driven contact-plan baseline.

Slot by slot, every visible pair carries a counter of how long it has been
visible but left unscheduled; the slot's matching maximizes the summed
counters (cardinality-preferred, so the all-zero first slot still yields a
maximal topology). Scheduled pairs reset their counter to zero, all other
visible pairs age by one. After the whole state is scheduled, the slot
order is shuffled under the caller's seed.

Interpretations (the source description is one line): counters reset to
zero rather than decrement, and start at zero each state with no
carry-over. Traffic plays no role, so the plan meets the ranging
requirement only "by fairness" — the audit records whether it did.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .matching import max_weight_matching
from .scenario import ScenarioState, TopologySchedule

__all__ = ["FairnessCounters", "schedule_state_fcp"]


@dataclass
class FairnessCounters:
    """Accumulated disabled contact time per visible pair."""

    disabled_time: dict[tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def for_state(cls, state: ScenarioState) -> "FairnessCounters":
        return cls({pair: 0 for pair in state.visible_pairs()})

    def record_slot(self, scheduled: tuple[tuple[int, int], ...]) -> None:
        chosen = {(min(a, b), max(a, b)) for a, b in scheduled}
        for pair in self.disabled_time:
            if pair in chosen:
                self.disabled_time[pair] = 0
            else:
                self.disabled_time[pair] += 1


def schedule_state_fcp(state: ScenarioState, seed: int,
                       prefer_perfect: bool = True) -> TopologySchedule:
    """Fair-contact schedule for one state, slot order shuffled by seed."""
    counters = FairnessCounters.for_state(state)
    matchings = []
    for _ in range(state.slot_count):
        edges = [(i, j, c) for (i, j), c in
                 sorted(counters.disabled_time.items())]
        matching = max_weight_matching(state.n_nodes, edges,
                                       prefer_max_cardinality=prefer_perfect)
        matchings.append(matching)
        counters.record_slot(matching)
    rng = random.Random(seed)
    order = list(range(state.slot_count))
    rng.shuffle(order)
    return TopologySchedule.from_matchings(
        state.n_nodes, [matchings[t] for t in order])
