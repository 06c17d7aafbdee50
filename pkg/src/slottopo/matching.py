"""Exact maximum-weight matching with a cardinality preference.

Weights may be ints, Fractions, or floats; they are scaled by the least
common denominator to integers so the blossom search runs in exact
arithmetic. In the default (cardinality-preferred) mode every weight is
shifted by one common offset large enough that an extra matched edge always
beats any re-weighting: among equal-cardinality matchings the argmax is
unchanged, so the result is the maximum-weight matching among
maximum-cardinality ones. When a perfect matching exists this is exactly
the maximum-weight perfect matching, negative edges included.

Determinism: nodes and edges are inserted in sorted order and the blossom
implementation is deterministic, so identical inputs give identical
matchings.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import networkx as nx

__all__ = ["max_weight_matching"]

Weight = int | float | Fraction


def _to_int_weights(edges: Sequence[tuple[int, int, Fraction]]
                    ) -> list[tuple[int, int, int]]:
    den = 1
    for _, _, w in edges:
        den = den * w.denominator // gcd(den, w.denominator)
    return [(i, j, int(w * den)) for i, j, w in edges]


def max_weight_matching(
    n_nodes: int,
    edges: Iterable[tuple[int, int, Weight]],
    prefer_max_cardinality: bool = True,
) -> tuple[tuple[int, int], ...]:
    """Maximum-weight matching over nodes ``0..n_nodes-1``.

    With ``prefer_max_cardinality`` (the default) the matching maximizes
    cardinality first and total weight among those; otherwise it is a plain
    maximum-weight matching, which never includes negative-gain edges.

    Returns sorted ``(i, j)`` pairs with ``i < j``.
    """
    canon: dict[tuple[int, int], Fraction] = {}
    for i, j, w in edges:
        if i == j:
            raise ValueError(f"self edge at node {i}")
        if not (0 <= i < n_nodes and 0 <= j < n_nodes):
            raise ValueError(f"edge ({i}, {j}) out of range")
        key = (min(i, j), max(i, j))
        if key in canon:
            raise ValueError(f"duplicate edge {key}")
        canon[key] = Fraction(w)
    if not canon:
        return ()

    ints = _to_int_weights(sorted((i, j, w) for (i, j), w in canon.items()))
    graph = nx.Graph()
    graph.add_nodes_from(range(n_nodes))
    if prefer_max_cardinality:
        lo = min(w for _, _, w in ints)
        hi = max(w for _, _, w in ints)
        offset = n_nodes * (hi - lo) + 1 - lo
        for i, j, w in ints:
            graph.add_edge(i, j, weight=w + offset)
        mate = nx.max_weight_matching(graph, maxcardinality=True)
    else:
        for i, j, w in ints:
            graph.add_edge(i, j, weight=w)
        mate = nx.max_weight_matching(graph, maxcardinality=False)
    return tuple(sorted((min(a, b), max(a, b)) for a, b in mate))
