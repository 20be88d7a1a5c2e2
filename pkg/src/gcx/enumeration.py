"""Exhaustive generation of connected multigraphs with minimum valence 3."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

from .canon import compute_labelings
from .graph import DirectedOrderedGraph


def degree_sequences(v: int, e: int, min_degree: int = 3) -> Iterator[tuple[int, ...]]:
    """Non-increasing sequences of ``v`` integers >= ``min_degree`` summing to ``2e``."""

    def rec(left: int, total: int, cap: int) -> Iterator[tuple[int, ...]]:
        if left == 0:
            if total == 0:
                yield ()
            return
        hi = min(cap, total - min_degree * (left - 1))
        for d in range(hi, min_degree - 1, -1):
            for rest in rec(left - 1, total - d, d):
                yield (d,) + rest

    yield from rec(v, 2 * e, 2 * e)


def _arrangements(degrees: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Distinct orderings of a degree sequence."""
    yield from sorted(set(itertools.permutations(degrees)), reverse=True)


def _multigraphs(degrees: tuple[int, ...], allow_loops: bool) -> Iterator[list[tuple[int, int]]]:
    """Connected labelled multigraphs realising ``degrees`` in breadth-first order.

    Every vertex after the first has a lower-labelled neighbour, and the
    lowest such neighbour (its parent) never decreases with the label.  Each
    connected graph has a breadth-first labelling, so no class is missed.
    """
    n = len(degrees)
    rem = list(degrees)
    edges: list[tuple[int, int]] = []
    parent = [0] * n

    def row(i: int) -> Iterator[list[tuple[int, int]]]:
        if i == n:
            yield list(edges)
            return
        if i > 0:
            low = [a for a, b in edges if b == i + 1 and a != b]
            if not low:
                return
            parent[i] = min(low)
            if i > 1 and parent[i] < parent[i - 1]:
                return
        max_loops = rem[i] // 2 if allow_loops else 0
        for loops in range(max_loops, -1, -1):
            rem[i] -= 2 * loops
            edges.extend([(i + 1, i + 1)] * loops)
            if rem[i] <= sum(rem[i + 1 :]):
                yield from cols(i, i + 1)
            del edges[len(edges) - loops :]
            rem[i] += 2 * loops

    def cols(i: int, j: int) -> Iterator[list[tuple[int, int]]]:
        if rem[i] == 0:
            yield from row(i + 1)
            return
        if j == n:
            return
        tail = sum(rem[j + 1 :])
        for m in range(min(rem[i], rem[j]), -1, -1):
            if rem[i] - m > tail:
                break
            rem[i] -= m
            rem[j] -= m
            edges.extend([(i + 1, j + 1)] * m)
            yield from cols(i, j + 1)
            del edges[len(edges) - m :]
            rem[i] += m
            rem[j] += m

    yield from row(0)


@lru_cache(maxsize=None)
def isomorphism_classes(v: int, e: int, allow_loops: bool = True) -> tuple[DirectedOrderedGraph, ...]:
    """Canonical representatives of connected multigraphs with ``v`` vertices,
    ``e`` edges and every valence >= 3, sorted by encoding."""
    if v < 1 or e < 0:
        return ()
    seen = set()
    for sorted_degrees in degree_sequences(v, e):
        for degrees in _arrangements(sorted_degrees):
            for edges in _multigraphs(degrees, allow_loops):
                g = DirectedOrderedGraph(v, tuple(edges))
                seen.add(compute_labelings(g)[0])
    return tuple(DirectedOrderedGraph(v, enc) for enc in sorted(seen))
