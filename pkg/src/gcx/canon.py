"""Canonical forms of directed ordered multigraphs.

The encoding of a vertex labelling is the sorted tuple of ``(min, max)``
label pairs over all edges; with edges then listed in that order and
directed low-to-high, the encoding already fixes edge order and edge
directions.  Labellings are produced by colour refinement plus
individualisation over every branch, and the smallest encoding among the
leaves wins.  The set of leaf encodings is an isomorphism invariant, so the
result is canonical; the leaves of the representative achieving the minimum
are exactly its vertex automorphisms.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

from .graph import DirectedOrderedGraph, GraphIso

Encoding = tuple[tuple[int, int], ...]

ODD = "odd"
EVEN = "even"
PARITIES = (ODD, EVEN)


def _adjacency(g: DirectedOrderedGraph):
    n = g.n_vertices
    mult: list[dict[int, int]] = [defaultdict(int) for _ in range(n)]
    loops = [0] * n
    for t, h in g.edges:
        if t == h:
            loops[t - 1] += 1
        else:
            mult[t - 1][h - 1] += 1
            mult[h - 1][t - 1] += 1
    nbrs = [tuple(m.items()) for m in mult]
    return nbrs, loops


def _refine(colors: list[int], nbrs, loops) -> list[int]:
    n_classes = len(set(colors))
    while True:
        sigs = [
            (colors[v], loops[v], tuple(sorted((colors[w], m) for w, m in nbrs[v])))
            for v in range(len(colors))
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [rank[s] for s in sigs]
        if len(rank) == n_classes:
            return colors
        n_classes = len(rank)


def _individualize(colors: list[int], v: int) -> list[int]:
    keys = [(c, 0 if u == v else 1) for u, c in enumerate(colors)]
    rank = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [rank[k] for k in keys]


def _encode(g: DirectedOrderedGraph, lab: tuple[int, ...]) -> Encoding:
    return tuple(
        sorted((min(lab[t - 1], lab[h - 1]), max(lab[t - 1], lab[h - 1])) for t, h in g.edges)
    )


def compute_labelings(g: DirectedOrderedGraph) -> tuple[Encoding, tuple[tuple[int, ...], ...]]:
    """Minimal encoding and every search leaf attaining it (in search order).

    A labelling ``lab`` sends vertex ``v`` to ``lab[v - 1]``.
    """
    nbrs, loops = _adjacency(g)
    n = g.n_vertices
    best: list = [None, []]

    def search(colors: list[int]) -> None:
        colors = _refine(colors, nbrs, loops)
        if len(set(colors)) == n:
            lab = tuple(c + 1 for c in colors)
            enc = _encode(g, lab)
            if best[0] is None or enc < best[0]:
                best[0], best[1] = enc, [lab]
            elif enc == best[0]:
                best[1].append(lab)
            return
        counts: dict[int, int] = defaultdict(int)
        for c in colors:
            counts[c] += 1
        target = min(c for c, k in counts.items() if k > 1)
        for v in range(n):
            if colors[v] == target:
                search(_individualize(colors, v))

    search([0] * n)
    return best[0], tuple(best[1])


canonical_labelings = lru_cache(maxsize=None)(compute_labelings)


def iso_from_labeling(g: DirectedOrderedGraph, lab: tuple[int, ...], target: DirectedOrderedGraph) -> GraphIso:
    """Isomorphism ``g -> target`` with vertex map ``lab``.

    ``target`` must carry edges sorted low-to-high (a representative).
    Parallel edges are matched in order and loops are not reversed.
    """
    slots: dict[tuple[int, int], list[int]] = defaultdict(list)
    for j, pair in enumerate(target.edges, 1):
        slots[pair].append(j)
    cursor: dict[tuple[int, int], int] = defaultdict(int)
    ep = []
    rev = set()
    for i, (t, h) in enumerate(g.edges, 1):
        a, b = lab[t - 1], lab[h - 1]
        key = (min(a, b), max(a, b))
        ep.append(slots[key][cursor[key]])
        cursor[key] += 1
        if a > b:
            rev.add(i)
    return GraphIso(tuple(lab), tuple(ep), frozenset(rev))


def relation_sign(a: GraphIso, parity: str) -> int:
    """Sign relating source and target under the odd or even relation."""
    pv, pe, pa = a.parities()
    if parity == ODD:
        return -1 if (pv + pa) % 2 else 1
    if parity == EVEN:
        return -1 if pe else 1
    raise ValueError(f"unknown parity {parity!r}")


@dataclass(frozen=True)
class CanonicalForm:
    representative: DirectedOrderedGraph
    to_rep: GraphIso
    zero_odd: bool
    zero_even: bool

    def zero(self, parity: str) -> bool:
        return self.zero_odd if parity == ODD else self.zero_even

    def sign(self, parity: str) -> int:
        """Coefficient of the representative in the class of the input graph."""
        return 0 if self.zero(parity) else relation_sign(self.to_rep, parity)


@lru_cache(maxsize=None)
def _representative_data(rep: DirectedOrderedGraph) -> tuple[bool, bool, tuple[GraphIso, ...]]:
    """Zero flags and the lifted vertex automorphisms of a representative."""
    _, auts = canonical_labelings(rep)
    lifts = tuple(iso_from_labeling(rep, lab, rep) for lab in auts)
    pairs: dict[tuple[int, int], int] = defaultdict(int)
    for pair in rep.edges:
        pairs[pair] += 1
    # kernel of Aut -> vertex permutations: parallel transpositions (edge sign -1)
    # and loop reversals (arrow sign -1)
    zero_even = any(k > 1 for k in pairs.values())
    zero_odd = any(a == b for a, b in pairs)
    zero_odd = zero_odd or any(relation_sign(x, ODD) < 0 for x in lifts)
    zero_even = zero_even or any(relation_sign(x, EVEN) < 0 for x in lifts)
    return zero_odd, zero_even, lifts


@lru_cache(maxsize=None)
def canonical_form(g: DirectedOrderedGraph) -> CanonicalForm:
    enc, leaves = canonical_labelings(g)
    rep = DirectedOrderedGraph(g.n_vertices, enc)
    zero_odd, zero_even, _ = _representative_data(rep)
    return CanonicalForm(rep, iso_from_labeling(g, leaves[0], rep), zero_odd, zero_even)


def vertex_automorphism_lifts(rep: DirectedOrderedGraph) -> tuple[GraphIso, ...]:
    return _representative_data(canonical_form(rep).representative)[2]


def is_representative(g: DirectedOrderedGraph) -> bool:
    return canonical_form(g).representative == g
