"""Probe matrices and zero-run delay counting for link-access patterns.

A binary access row over T slots records in which slots a satellite holds a
useful link (non-anchor -> any anchor, or anchor -> any antenna). Data
generated during a slot without access waits for the next accessible slot,
so the per-slot delay vector of a row is the distance to the next 1 (with a
virtual access just past the horizon for trailing zeros).

The probe matrix P(t) has one column per length-t window of the horizon;
multiplying an access row by P(t) counts window sums, and a zero entry marks
t consecutive zeros. Summed over t = 1..T, the number of zero entries equals
the summed per-slot delays: a maximal zero run of length k contributes
k + (k-1) + ... + 1 = k(k+1)/2 zeros. This identity turns delay into a
linear expression, which the routing-agnostic model maximizes against.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

__all__ = [
    "ProbeMatrix",
    "AccessKind",
    "AccessPattern",
    "probe_matrix",
    "zero_run_delay",
    "zero_runs",
    "count_probe_zeros",
    "total_probe_entries",
    "access_patterns",
]


@dataclass(frozen=True)
class ProbeMatrix:
    """Window-sum probe for runs of a given length over a fixed horizon."""

    run_length: int
    slot_count: int
    p: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.p, dtype=np.uint8)
        arr.flags.writeable = False
        object.__setattr__(self, "p", arr)


def probe_matrix(run_length: int, slot_count: int) -> ProbeMatrix:
    """Build the T x (T - t + 1) probe matrix for run length ``t``.

    Column i (0-based) holds ones exactly in rows i .. i+t-1. For t = T the
    matrix is a single all-ones column; for t = 1 it is the identity.
    """
    t, big_t = run_length, slot_count
    if not (1 <= t <= big_t):
        raise ValueError(f"run length {t} out of range 1..{big_t}")
    cols = big_t - t + 1
    p = np.zeros((big_t, cols), dtype=np.uint8)
    for i in range(cols):
        p[i:i + t, i] = 1
    return ProbeMatrix(run_length=t, slot_count=big_t, p=p)


def zero_run_delay(row: Sequence[int] | np.ndarray) -> np.ndarray:
    """Per-slot waiting times until the next accessible slot.

    ``delay[t]`` is 0 when ``row[t] == 1``, otherwise the number of slots
    until the next 1. A trailing zero run of length k yields k, k-1, ..., 1
    (virtual access just past the horizon), which keeps the total equal to
    the probe zero count.
    """
    r = np.asarray(row, dtype=np.int64).ravel()
    if not np.isin(r, (0, 1)).all():
        raise ValueError("access row must be binary")
    big_t = r.size
    delay = np.zeros(big_t, dtype=np.int64)
    nxt = big_t  # virtual access index just past the end
    for t in range(big_t - 1, -1, -1):
        if r[t] == 1:
            nxt = t
            delay[t] = 0
        else:
            delay[t] = nxt - t
    return delay


def zero_runs(row: Sequence[int] | np.ndarray) -> list[int]:
    """Lengths of maximal zero runs in a binary row."""
    r = np.asarray(row, dtype=np.int64).ravel()
    runs: list[int] = []
    cur = 0
    for v in r:
        if v == 0:
            cur += 1
        elif cur:
            runs.append(cur)
            cur = 0
    if cur:
        runs.append(cur)
    return runs


class AccessKind(str, Enum):
    NON_ANCHOR_TO_ANCHOR = "non_anchor_to_anchor"
    ANCHOR_TO_GS = "anchor_to_gs"


@dataclass(frozen=True)
class AccessPattern:
    """Binary access rows (one per satellite of the given kind) over T slots."""

    rows: np.ndarray
    kind: AccessKind

    def __post_init__(self) -> None:
        arr = np.asarray(self.rows, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("access pattern must be a 2-D matrix")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("access pattern must be binary")
        arr.flags.writeable = False
        object.__setattr__(self, "rows", arr)

    @property
    def slot_count(self) -> int:
        return int(self.rows.shape[1])


def count_probe_zeros(pattern: AccessPattern | np.ndarray) -> int:
    """Total zero entries across ``pattern @ P(1) .. pattern @ P(T)``.

    Computed literally through the probe products; equals the summed
    zero-run delays of all rows.
    """
    rows = pattern.rows if isinstance(pattern, AccessPattern) else pattern
    rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
    big_t = rows.shape[1]
    if big_t == 0:
        return 0
    zeros = 0
    for t in range(1, big_t + 1):
        prod = rows @ probe_matrix(t, big_t).p.astype(np.int64)
        zeros += int((prod == 0).sum())
    return zeros


def total_probe_entries(slot_count: int) -> int:
    """Entries per row across all probes: sum of (T - t + 1) = T(T+1)/2."""
    return slot_count * (slot_count + 1) // 2


def access_patterns(schedule, state) -> tuple[AccessPattern, AccessPattern]:
    """Realized access rows of a schedule.

    Returns (non-anchor rows over anchor links, anchor rows over antenna
    links), row order following ``state.non_anchor_ids`` and
    ``state.anchor_ids``.
    """
    x = schedule.x
    t_cnt = state.slot_count
    psi = np.zeros((len(state.non_anchor_ids), t_cnt), dtype=np.uint8)
    for r, i in enumerate(state.non_anchor_ids):
        for j in state.anchor_ids:
            psi[r] |= x[i, j, :]
    phi = np.zeros((len(state.anchor_ids), t_cnt), dtype=np.uint8)
    for r, i in enumerate(state.anchor_ids):
        for g in state.gs_ids:
            phi[r] |= x[i, g, :]
    return (AccessPattern(psi, AccessKind.NON_ANCHOR_TO_ANCHOR),
            AccessPattern(phi, AccessKind.ANCHOR_TO_GS))
