"""Directed ordered multigraphs and their undirected isomorphisms.

Vertices are the labels ``1..n``; the label is the position in the vertex
order.  Edges are ``(tail, head)`` pairs and their list position (1-based)
is the edge label.  Self-loops and parallel edges are allowed.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import (
    EmptyGraph,
    InputError,
    NotAnAutomorphism,
    NotConnected,
    SelfLoopContraction,
    ValenceTooLow,
)
from .signed_perm import SignedPermutation, perm_parity

Edge = tuple[int, int]


@dataclass(frozen=True)
class DirectedOrderedGraph:
    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        n = int(self.vertex_count)
        if n < 1:
            raise InputError(f"vertex_count must be positive, got {self.vertex_count}")
        edges = tuple((int(t), int(h)) for t, h in self.edges)
        for t, h in edges:
            if not (1 <= t <= n and 1 <= h <= n):
                raise InputError(f"edge ({t}, {h}) has an endpoint outside 1..{n}")
        object.__setattr__(self, "vertex_count", n)
        object.__setattr__(self, "edges", edges)

    @property
    def n_vertices(self) -> int:
        return self.vertex_count

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge(self, i: int) -> Edge:
        return self.edges[i - 1]

    def is_loop(self, i: int) -> bool:
        t, h = self.edges[i - 1]
        return t == h

    def valences(self) -> list[int]:
        """Loop-inclusive valences; index ``v - 1`` holds vertex ``v``."""
        val = [0] * self.vertex_count
        for t, h in self.edges:
            val[t - 1] += 1
            val[h - 1] += 1
        return val

    def valence(self, v: int) -> int:
        return self.valences()[v - 1]

    def has_repeated_edges(self) -> bool:
        """True if some unordered endpoint pair (loops included) occurs twice."""
        pairs = [tuple(sorted(e)) for e in self.edges]
        return len(set(pairs)) != len(pairs)

    def has_loops(self) -> bool:
        return any(t == h for t, h in self.edges)

    def is_connected(self) -> bool:
        adj: dict[int, set[int]] = defaultdict(set)
        for t, h in self.edges:
            adj[t].add(h)
            adj[h].add(t)
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.vertex_count

    def to_json(self) -> dict:
        return {
            "vertices": self.vertex_count,
            "edges": [{"tail": t, "head": h} for t, h in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DirectedOrderedGraph":
        try:
            edges = tuple((e["tail"], e["head"]) for e in data["edges"])
            return cls(data["vertices"], edges)
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad graph object: {exc}") from exc


def theta() -> DirectedOrderedGraph:
    return DirectedOrderedGraph(2, ((1, 2), (1, 2), (1, 2)))


def complete_graph(n: int) -> DirectedOrderedGraph:
    return DirectedOrderedGraph(n, tuple(itertools.combinations(range(1, n + 1), 2)))


def validate_generator(g: DirectedOrderedGraph) -> DirectedOrderedGraph:
    if g.n_edges == 0:
        raise EmptyGraph("graph has no edges")
    val = g.valences()
    for v, k in enumerate(val, 1):
        if k == 0:
            raise ValenceTooLow(v, k)
    if not g.is_connected():
        raise NotConnected("underlying undirected graph is not connected")
    for v, k in enumerate(val, 1):
        if k < 3:
            raise ValenceTooLow(v, k)
    return g


# ---------------------------------------------------------------------------
# contraction and subgraphs
# ---------------------------------------------------------------------------

def contract_edge(g: DirectedOrderedGraph, i: int) -> DirectedOrderedGraph:
    """Contract edge ``i``; the merged vertex becomes vertex 1."""
    if not 1 <= i <= g.n_edges:
        raise InputError(f"edge index {i} outside 1..{g.n_edges}")
    t, h = g.edge(i)
    if t == h:
        raise SelfLoopContraction(f"edge {i} is a self-loop at vertex {t}")
    relabel = _front_relabeling(g.vertex_count, {t, h})
    edges = tuple(
        (relabel[a], relabel[b]) for k, (a, b) in enumerate(g.edges, 1) if k != i
    )
    return DirectedOrderedGraph(g.vertex_count - 1, edges)


def _front_relabeling(n: int, merged: set[int]) -> dict[int, int]:
    relabel = {v: 1 for v in merged}
    nxt = 2
    for v in range(1, n + 1):
        if v not in merged:
            relabel[v] = nxt
            nxt += 1
    return relabel


class SubgraphMap(NamedTuple):
    graph: DirectedOrderedGraph
    vertex_origin: tuple[int | None, ...]  # new vertex -> old vertex (None for merged)
    edge_origin: tuple[int, ...]  # new edge -> old edge index


def induced_subgraph(g: DirectedOrderedGraph, vertices: Iterable[int]) -> SubgraphMap:
    """Subgraph spanned by ``vertices``; orders inherited from ``g``."""
    keep = sorted(set(vertices))
    relabel = {v: k for k, v in enumerate(keep, 1)}
    edges, origin = [], []
    for k, (t, h) in enumerate(g.edges, 1):
        if t in relabel and h in relabel:
            edges.append((relabel[t], relabel[h]))
            origin.append(k)
    return SubgraphMap(DirectedOrderedGraph(len(keep), tuple(edges)), tuple(keep), tuple(origin))


def contract_vertices(g: DirectedOrderedGraph, vertices: Iterable[int]) -> SubgraphMap:
    """Collapse the subgraph spanned by ``vertices`` to a single front vertex.

    Edges with both ends in the set disappear; the rest keep their order and
    direction.
    """
    merged = set(vertices)
    relabel = _front_relabeling(g.vertex_count, merged)
    edges, origin = [], []
    for k, (t, h) in enumerate(g.edges, 1):
        if t in merged and h in merged:
            continue
        edges.append((relabel[t], relabel[h]))
        origin.append(k)
    vertex_origin: list[int | None] = [None] + [
        v for v in range(1, g.vertex_count + 1) if v not in merged
    ]
    n = g.vertex_count - len(merged) + 1
    return SubgraphMap(DirectedOrderedGraph(n, tuple(edges)), tuple(vertex_origin), tuple(origin))


def relabel(
    g: DirectedOrderedGraph,
    vertex_perm: Sequence[int],
    edge_perm: Sequence[int] | None = None,
    reversed_edges: Iterable[int] = (),
) -> DirectedOrderedGraph:
    """Image of ``g`` under relabelling: vertex ``v`` becomes ``vertex_perm[v-1]``,
    edge ``i`` moves to position ``edge_perm[i-1]``, edges in
    ``reversed_edges`` (source labels) have their direction flipped."""
    if edge_perm is None:
        edge_perm = range(1, g.n_edges + 1)
    rev = set(reversed_edges)
    out: list[Edge] = [None] * g.n_edges  # type: ignore[list-item]
    for i, (t, h) in enumerate(g.edges, 1):
        a, b = vertex_perm[t - 1], vertex_perm[h - 1]
        out[edge_perm[i - 1] - 1] = (b, a) if i in rev else (a, b)
    return DirectedOrderedGraph(g.vertex_count, tuple(out))


# ---------------------------------------------------------------------------
# isomorphisms
# ---------------------------------------------------------------------------

class Signs(NamedTuple):
    vertex: int
    edge: int
    arrow: int
    d: int


@dataclass(frozen=True)
class GraphIso:
    """An undirected, unordered isomorphism between directed ordered graphs.

    ``vertex_perm[v-1]`` and ``edge_perm[i-1]`` are images; ``reversed`` holds
    the source edges whose direction is not carried along.
    """

    vertex_perm: tuple[int, ...]
    edge_perm: tuple[int, ...]
    reversed: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertex_perm", tuple(self.vertex_perm))
        object.__setattr__(self, "edge_perm", tuple(self.edge_perm))
        object.__setattr__(self, "reversed", frozenset(self.reversed))

    def sort_key(self) -> tuple:
        return (self.vertex_perm, self.edge_perm, tuple(sorted(self.reversed)))

    @classmethod
    def identity(cls, g: DirectedOrderedGraph) -> "GraphIso":
        return cls(tuple(range(1, g.n_vertices + 1)), tuple(range(1, g.n_edges + 1)))

    def compose(self, other: "GraphIso") -> "GraphIso":
        """``self o other`` (``other`` applied first)."""
        vp = tuple(self.vertex_perm[v - 1] for v in other.vertex_perm)
        ep = tuple(self.edge_perm[e - 1] for e in other.edge_perm)
        rev = frozenset(
            e
            for e in range(1, len(other.edge_perm) + 1)
            if (e in other.reversed) != (other.edge_perm[e - 1] in self.reversed)
        )
        return GraphIso(vp, ep, rev)

    def inverse(self) -> "GraphIso":
        vp = [0] * len(self.vertex_perm)
        for v, w in enumerate(self.vertex_perm, 1):
            vp[w - 1] = v
        ep = [0] * len(self.edge_perm)
        for e, f in enumerate(self.edge_perm, 1):
            ep[f - 1] = e
        return GraphIso(tuple(vp), tuple(ep), frozenset(self.edge_perm[e - 1] for e in self.reversed))

    def parities(self) -> tuple[int, int, int]:
        """(vertex, edge, arrow) parities in {0, 1}."""
        return perm_parity(self.vertex_perm), perm_parity(self.edge_perm), len(self.reversed) % 2

    def to_json(self) -> dict:
        return {
            "vertex_perm": list(self.vertex_perm),
            "edge_perm": list(self.edge_perm),
            "reversed": sorted(self.reversed),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GraphIso":
        try:
            return cls(tuple(data["vertex_perm"]), tuple(data["edge_perm"]), frozenset(data["reversed"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad isomorphism object: {exc}") from exc


def is_isomorphism(g1: DirectedOrderedGraph, g2: DirectedOrderedGraph, a: GraphIso) -> bool:
    """Check that ``a`` is an undirected isomorphism with consistent reversal data."""
    if (g1.n_vertices, g1.n_edges) != (g2.n_vertices, g2.n_edges):
        return False
    if len(a.vertex_perm) != g1.n_vertices or len(a.edge_perm) != g1.n_edges:
        return False
    if sorted(a.vertex_perm) != list(range(1, g1.n_vertices + 1)):
        return False
    if sorted(a.edge_perm) != list(range(1, g1.n_edges + 1)):
        return False
    for e, (t, h) in enumerate(g1.edges, 1):
        t2, h2 = g2.edge(a.edge_perm[e - 1])
        mt, mh = a.vertex_perm[t - 1], a.vertex_perm[h - 1]
        if t == h:
            if not (t2 == h2 == mt):
                return False
            continue
        if e in a.reversed:
            if (mt, mh) != (h2, t2):
                return False
        elif (mt, mh) != (t2, h2):
            return False
    return True


def _pair_counts(g: DirectedOrderedGraph) -> tuple[dict[tuple[int, int], list[int]], list[int]]:
    classes: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, (t, h) in enumerate(g.edges, 1):
        classes[(min(t, h), max(t, h))].append(i)
    loops = [0] * g.n_vertices
    for t, h in g.edges:
        if t == h:
            loops[t - 1] += 1
    return classes, loops


def _vertex_maps(g1: DirectedOrderedGraph, g2: DirectedOrderedGraph) -> Iterator[tuple[int, ...]]:
    """All multiplicity-preserving vertex bijections, lexicographically."""
    n = g1.n_vertices
    c1, l1 = _pair_counts(g1)
    c2, l2 = _pair_counts(g2)
    m1 = {k: len(v) for k, v in c1.items()}
    m2 = {k: len(v) for k, v in c2.items()}
    val1, val2 = g1.valences(), g2.valences()
    image = [0] * n
    used = [False] * (n + 1)

    def mult(m: dict, a: int, b: int) -> int:
        return m.get((min(a, b), max(a, b)), 0)

    def extend(v: int) -> Iterator[tuple[int, ...]]:
        if v > n:
            yield tuple(image)
            return
        for w in range(1, n + 1):
            if used[w] or val1[v - 1] != val2[w - 1] or l1[v - 1] != l2[w - 1]:
                continue
            if any(mult(m1, u, v) != mult(m2, image[u - 1], w) for u in range(1, v)):
                continue
            image[v - 1] = w
            used[w] = True
            yield from extend(v + 1)
            used[w] = False
        image[v - 1] = 0

    if n == g2.n_vertices:
        yield from extend(1)


def iter_isomorphisms(g1: DirectedOrderedGraph, g2: DirectedOrderedGraph) -> Iterator[GraphIso]:
    """Every isomorphism ``g1 -> g2``, ordered by (vertex_perm, edge_perm, reversed)."""
    if (g1.n_vertices, g1.n_edges) != (g2.n_vertices, g2.n_edges):
        return
    c1, _ = _pair_counts(g1)
    c2, _ = _pair_counts(g2)
    for vp in _vertex_maps(g1, g2):
        options = []  # per source class: list of (assignments, reversed) choices
        for (a, b), src in sorted(c1.items()):
            x, y = vp[a - 1], vp[b - 1]
            dst = c2[(min(x, y), max(x, y))]
            choices = []
            for p in itertools.permutations(dst):
                if a == b:
                    for bits in itertools.product((False, True), repeat=len(src)):
                        rev = frozenset(e for e, bit in zip(src, bits) if bit)
                        choices.append((tuple(zip(src, p)), rev))
                else:
                    rev = frozenset(
                        e for e, f in zip(src, p) if vp[g1.edge(e)[0] - 1] != g2.edge(f)[0]
                    )
                    choices.append((tuple(zip(src, p)), rev))
            options.append(choices)
        isos = []
        for combo in itertools.product(*options):
            ep = [0] * g1.n_edges
            rev: set[int] = set()
            for pairs, r in combo:
                for e, f in pairs:
                    ep[e - 1] = f
                rev |= r
            isos.append(GraphIso(vp, tuple(ep), frozenset(rev)))
        isos.sort(key=GraphIso.sort_key)
        yield from isos


def find_isomorphisms(g1: DirectedOrderedGraph, g2: DirectedOrderedGraph) -> list[GraphIso]:
    return list(iter_isomorphisms(g1, g2))


def aut_group(g: DirectedOrderedGraph) -> list[GraphIso]:
    return find_isomorphisms(g, g)


def signs(a: GraphIso, d: int) -> Signs:
    """Vertex, edge and arrow signs of ``a`` and the combined ``sgn_d``.

    ``sgn_d`` is ``(-1)^((d-1) e_E + d (e_V + e_arrow))`` with the e's the
    parities behind the three signs.
    """
    if d < 3:
        raise InputError(f"d must be >= 3, got {d}")
    pv, pe, pa = a.parities()
    sd = ((d - 1) * pe + d * (pv + pa)) % 2
    return Signs(1 - 2 * pv, 1 - 2 * pe, 1 - 2 * pa, 1 - 2 * sd)


def signed_aut_count(g: DirectedOrderedGraph, d: int) -> int:
    return sum(signs(a, d).d for a in iter_isomorphisms(g, g))


def _require_automorphism(g: DirectedOrderedGraph, a: GraphIso) -> None:
    if not is_isomorphism(g, g, a):
        raise NotAnAutomorphism(f"{a} is not an automorphism of {g}")


def psi_gamma(g: DirectedOrderedGraph, a: GraphIso) -> SignedPermutation:
    """The signed edge permutation induced by an automorphism."""
    _require_automorphism(g, a)
    return SignedPermutation(a.edge_perm, a.reversed)


def edge_tuple_action_check(g: DirectedOrderedGraph, a: GraphIso) -> bool:
    """Check ``f o gamma(a) == phi(psi(a)) o f`` on a symbolic configuration.

    The configuration puts point ``v`` at vertex ``v``; ``f`` reads off the
    (tail point, head point) tuple per edge.  Both group actions push
    entries forward: ``gamma(a)`` moves the point at ``v`` to ``a_V(v)`` and
    ``phi`` moves tuple entry ``e`` to position ``a_E(e)``.
    """
    _require_automorphism(g, a)
    moved = [0] * g.n_vertices
    for v, w in enumerate(a.vertex_perm, 1):
        moved[w - 1] = v
    lhs = tuple((moved[t - 1], moved[h - 1]) for t, h in g.edges)
    rhs = psi_gamma(g, a).act_on_tuple(g.edges)
    return lhs == rhs
