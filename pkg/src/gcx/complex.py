"""Graph complexes with odd/even orientations, boundary maps and homology."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .canon import EVEN, ODD, PARITIES, canonical_form, relation_sign
from .enumeration import isomorphism_classes
from .errors import (
    BasisMismatch,
    InputError,
    MixedBidegree,
    NotClosed,
    PairingNotFound,
)
from .graph import DirectedOrderedGraph, GraphIso, contract_edge, iter_isomorphisms, signs
from .intlinalg import SmithForm, SparseIntMatrix, smith_normal_form

log = logging.getLogger(__name__)

INTEGER_CAVEAT = (
    "integer coefficients: classes with an orientation-reversing automorphism are "
    "dropped from the basis, which agrees with the quotient only after inverting 2"
)


def _check_parity(parity: str) -> str:
    if parity not in PARITIES:
        raise InputError(f"parity must be one of {PARITIES}, got {parity!r}")
    return parity


@dataclass(frozen=True)
class CanonicalClass:
    representative: DirectedOrderedGraph
    parity: str
    zero: bool

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.representative.n_vertices, self.representative.n_edges

    def to_json(self) -> dict:
        data = self.representative.to_json()
        data["parity"] = self.parity
        data["zero"] = self.zero
        return data

    @classmethod
    def from_json(cls, data: dict) -> "CanonicalClass":
        return cls(DirectedOrderedGraph.from_json(data), _check_parity(data["parity"]), bool(data["zero"]))


@dataclass(frozen=True)
class SignedGraphSum:
    terms: tuple[tuple[int, DirectedOrderedGraph], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple((int(c), g) for c, g in self.terms))

    @classmethod
    def single(cls, g: DirectedOrderedGraph) -> "SignedGraphSum":
        return cls(((1, g),))

    def bidegree(self) -> tuple[int, int] | None:
        degs = {(g.n_vertices, g.n_edges) for _, g in self.terms}
        if len(degs) > 1:
            raise MixedBidegree(f"terms span several bidegrees: {sorted(degs)}")
        return degs.pop() if degs else None

    def to_json(self) -> dict:
        return {"terms": [{"coefficient": c, "graph": g.to_json()} for c, g in self.terms]}

    @classmethod
    def from_json(cls, data: dict) -> "SignedGraphSum":
        if "terms" not in data:
            return cls.single(DirectedOrderedGraph.from_json(data))
        return cls(tuple((t.get("coefficient", 1), DirectedOrderedGraph.from_json(t["graph"])) for t in data["terms"]))


def canonicalize(g: DirectedOrderedGraph, parity: str) -> tuple[int, CanonicalClass]:
    """``g = sign * representative`` in the quotient; sign 0 for zero classes."""
    _check_parity(parity)
    cf = canonical_form(g)
    return cf.sign(parity), CanonicalClass(cf.representative, parity, cf.zero(parity))


def enumerate_basis(v: int, e: int, parity: str, allow_loops: bool = True) -> list[CanonicalClass]:
    _check_parity(parity)
    out = []
    for rep in isomorphism_classes(v, e, allow_loops):
        if not canonical_form(rep).zero(parity):
            out.append(CanonicalClass(rep, parity, False))
    return out


def contraction_coefficient(g: DirectedOrderedGraph, i: int, parity: str) -> int:
    """Sign attached to the term ``g/e_i`` in the differential.

    Odd: ``(-1)^(o(head) - o(tail))`` for an edge running up the vertex
    order, negated for an edge running down.  The extra factor keeps the
    differential compatible with reversing the edge; on representatives all
    edges run up, so it never fires there.  Even: ``(-1)^i``.
    """
    if parity == ODD:
        t, h = g.edge(i)
        k = (h - t) + (1 if t > h else 0)
        return -1 if k % 2 else 1
    return -1 if i % 2 else 1


def differential_terms(g: DirectedOrderedGraph, parity: str) -> list[tuple[int, int, DirectedOrderedGraph]]:
    """``(edge, coefficient, contracted graph)`` for every non-loop edge."""
    return [
        (i, contraction_coefficient(g, i, parity), contract_edge(g, i))
        for i in range(1, g.n_edges + 1)
        if not g.is_loop(i)
    ]


def expand_differential(s: SignedGraphSum, parity: str) -> dict[DirectedOrderedGraph, int]:
    """Differential of a sum, collected on canonical representatives (zeros dropped)."""
    _check_parity(parity)
    acc: dict[DirectedOrderedGraph, int] = defaultdict(int)
    for coef, g in s.terms:
        for _, c, h in differential_terms(g, parity):
            sign, cls = canonicalize(h, parity)
            if sign:
                acc[cls.representative] += coef * c * sign
    return {g: x for g, x in acc.items() if x}


def boundary_matrix(
    source_basis: Sequence[CanonicalClass],
    target_basis: Sequence[CanonicalClass],
    parity: str,
) -> SparseIntMatrix:
    """Matrix of the differential; column ``j`` expands ``source_basis[j]``."""
    _check_parity(parity)
    index = {cls.representative: k for k, cls in enumerate(target_basis)}
    entries: dict[tuple[int, int], int] = {}
    for j, cls in enumerate(source_basis):
        for rep, x in expand_differential(SignedGraphSum.single(cls.representative), parity).items():
            if rep not in index:
                raise BasisMismatch(f"contraction {rep} of source {j} is not in the target basis")
            entries[(index[rep], j)] = x
    return SparseIntMatrix(len(target_basis), len(source_basis), entries)


def loop_order_bidegrees(loop_order: int) -> list[tuple[int, int]]:
    """All ``(v, e)`` with ``e - v + 1 = loop_order`` that admit min-valence-3 graphs."""
    if loop_order < 1:
        return []
    # 2e >= 3v with e = v + g - 1 gives v <= 2g - 2; a single vertex needs g >= 2
    return [(v, v + loop_order - 1) for v in range(1, max(2 * loop_order - 2, 0) + 1)]


@dataclass
class HomologyRow:
    bidegree: tuple[int, int]
    dim_chains: int
    rank_out: int
    rank_in: int
    dim_homology: int
    torsion: tuple[int, ...] = ()

    def to_json(self) -> dict:
        v, e = self.bidegree
        return {
            "vertices": v,
            "edges": e,
            "dim_chains": self.dim_chains,
            "rank_out": self.rank_out,
            "rank_in": self.rank_in,
            "dim_homology": self.dim_homology,
            "torsion": list(self.torsion),
        }


@dataclass
class HomologyTable:
    parity: str
    ring: str
    rows: list[HomologyRow] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def euler_characteristics(self) -> tuple[int, int]:
        chains = sum((-1) ** r.bidegree[0] * r.dim_chains for r in self.rows)
        homology = sum((-1) ** r.bidegree[0] * r.dim_homology for r in self.rows)
        return chains, homology

    def to_json(self) -> dict:
        return {
            "parity": self.parity,
            "ring": self.ring,
            "notes": self.notes,
            "rows": [r.to_json() for r in self.rows],
        }


def homology(
    bases: Mapping[tuple[int, int], Sequence[CanonicalClass]],
    parity: str,
    ring: str = "rationals",
) -> HomologyTable:
    """Homology of the complex spanned by ``bases`` (keyed by ``(v, e)``).

    The differential maps ``(v, e)`` to ``(v - 1, e - 1)``; a missing
    neighbour counts as the zero module.
    """
    _check_parity(parity)
    if ring not in ("rationals", "integers"):
        raise InputError(f"ring must be 'rationals' or 'integers', got {ring!r}")
    snf: dict[tuple[int, int], SmithForm] = {}
    for (v, e), basis in bases.items():
        target = bases.get((v - 1, e - 1))
        if target is None or not basis:
            continue
        snf[(v, e)] = smith_normal_form(boundary_matrix(basis, target, parity))
    table = HomologyTable(parity, ring)
    if ring == "integers":
        table.notes.append(INTEGER_CAVEAT)
    table.notes.append("self-loop edges contribute no term to the differential")
    for (v, e) in sorted(bases):
        out = snf.get((v, e))
        inc = snf.get((v + 1, e + 1))
        rank_out = out.rank if out else 0
        rank_in = inc.rank if inc else 0
        dim = len(bases[(v, e)])
        torsion = inc.torsion if (inc and ring == "integers") else ()
        table.rows.append(HomologyRow((v, e), dim, rank_out, rank_in, dim - rank_out - rank_in, torsion))
    return table


def loop_order_complex(loop_order: int, parity: str, allow_loops: bool = True) -> dict[tuple[int, int], list[CanonicalClass]]:
    return {
        (v, e): enumerate_basis(v, e, parity, allow_loops) for v, e in loop_order_bidegrees(loop_order)
    }


# ---------------------------------------------------------------------------
# closedness and pairings
# ---------------------------------------------------------------------------

@dataclass
class ClosedReport:
    closed: bool
    residual: list[tuple[int, DirectedOrderedGraph]]
    omitted_loop_terms: int
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "closed": self.closed,
            "residual": [{"coefficient": c, "graph": g.to_json()} for c, g in self.residual],
            "omitted_loop_terms": self.omitted_loop_terms,
            "warnings": self.warnings,
        }


def check_closed(s: SignedGraphSum, parity: str) -> ClosedReport:
    _check_parity(parity)
    s.bidegree()
    residual = expand_differential(s, parity)
    loops = sum(1 for _, g in s.terms for i in range(1, g.n_edges + 1) if g.is_loop(i))
    warnings = []
    total: dict[DirectedOrderedGraph, int] = defaultdict(int)
    for c, g in s.terms:
        sign, cls = canonicalize(g, parity)
        total[cls.representative] += c * sign
    if not any(total.values()):
        warnings.append("input is zero in the quotient; closedness is vacuous")
    if loops:
        warnings.append(f"{loops} self-loop term(s) omitted from the differential")
    ordered = sorted(residual.items(), key=lambda kv: kv[0].edges)
    return ClosedReport(not residual, [(x, g) for g, x in ordered], loops, warnings)


def negate(g: DirectedOrderedGraph, parity: str) -> DirectedOrderedGraph:
    """A graph isomorphic to ``g`` that represents ``-g``."""
    if parity == ODD:
        for i, (t, h) in enumerate(g.edges):
            if t != h:
                edges = list(g.edges)
                edges[i] = (h, t)
                return DirectedOrderedGraph(g.n_vertices, tuple(edges))
        raise InputError("odd negation needs a non-loop edge")
    if g.n_edges < 2:
        raise InputError("even negation needs two edges")
    edges = list(g.edges)
    edges[0], edges[1] = edges[1], edges[0]
    return DirectedOrderedGraph(g.n_vertices, tuple(edges))


def expand_unit_terms(s: SignedGraphSum, parity: str) -> list[DirectedOrderedGraph]:
    """Rewrite ``sum c_a G_a`` as a plain sum of graphs (negatives via :func:`negate`)."""
    out = []
    for c, g in s.terms:
        unit = g if c > 0 else negate(g, parity)
        out.extend([unit] * abs(c))
    return out


def pairing_condition(
    ga: DirectedOrderedGraph, i: int, gb: DirectedOrderedGraph, j: int, alpha: GraphIso, parity: str
) -> int:
    """The sign product that a valid pair must drive to -1."""
    s = signs(alpha, 3)
    c = contraction_coefficient(ga, i, parity) * contraction_coefficient(gb, j, parity)
    if parity == ODD:
        return s.vertex * s.arrow * c
    return s.edge * c


@dataclass(frozen=True)
class PairingEntry:
    first: tuple[int, int]  # (term index, edge index), 0-based term, 1-based edge
    second: tuple[int, int]
    witness: GraphIso

    def to_json(self) -> dict:
        return {
            "first": {"term": self.first[0], "edge": self.first[1]},
            "second": {"term": self.second[0], "edge": self.second[1]},
            "witness": self.witness.to_json(),
        }


@dataclass
class Pairing:
    parity: str
    terms: list[DirectedOrderedGraph]
    entries: list[PairingEntry]
    # contraction terms that are zero classes, each cancelled by itself
    vanishing: list[PairingEntry]

    def partner_map(self, include_vanishing: bool = True) -> dict[tuple[int, int], tuple[tuple[int, int], GraphIso]]:
        out = {}
        for p in self.entries + (self.vanishing if include_vanishing else []):
            out[p.first] = (p.second, p.witness)
            out[p.second] = (p.first, p.witness.inverse())
        return out

    def to_json(self) -> dict:
        return {
            "parity": self.parity,
            "terms": [g.to_json() for g in self.terms],
            "pairs": [p.to_json() for p in self.entries],
            "vanishing": [p.to_json() for p in self.vanishing],
        }


def _self_witness(h: DirectedOrderedGraph, parity: str) -> GraphIso | None:
    """First orientation-reversing automorphism, preferring involutions."""
    fallback = None
    for a in iter_isomorphisms(h, h):
        if relation_sign(a, parity) < 0:
            if a.compose(a) == GraphIso.identity(h):
                return a
            if fallback is None:
                fallback = a
    return fallback


def gamma_pairing(s: SignedGraphSum, parity: str, d: int | None = None) -> Pairing:
    """Match cancelling contraction terms of a closed sum.

    Nonzero terms are grouped by target class and matched greedily in
    lexicographic order; within a class every positive term is compatible
    with every negative one, so the greedy matching is the lexicographically
    first perfect matching.  Zero-class terms go to ``vanishing`` with a
    self-witness.
    """
    _check_parity(parity)
    if d is not None and (d % 2 == 1) != (parity == ODD):
        raise InputError(f"d={d} does not have parity {parity}")
    if not check_closed(s, parity).closed:
        raise NotClosed("the differential of the input does not vanish")
    terms = expand_unit_terms(s, parity)
    groups: dict[DirectedOrderedGraph, list[tuple[tuple[int, int], int, GraphIso, DirectedOrderedGraph]]] = defaultdict(list)
    vanishing = []
    for a, g in enumerate(terms):
        for i, c, h in differential_terms(g, parity):
            cf = canonical_form(h)
            if cf.zero(parity):
                w = _self_witness(h, parity)
                if w is None or pairing_condition(g, i, g, i, w, parity) != -1:
                    raise PairingNotFound(f"no self-cancelling automorphism for term ({a}, {i})")
                vanishing.append(PairingEntry((a, i), (a, i), w))
                continue
            net = c * relation_sign(cf.to_rep, parity)
            groups[cf.representative].append(((a, i), net, cf.to_rep, g))
    entries = []
    for items in groups.values():
        used = [False] * len(items)
        for x, (key_x, net_x, iso_x, g_x) in enumerate(items):
            if used[x]:
                continue
            y = next(
                (y for y in range(x + 1, len(items)) if not used[y] and items[y][1] == -net_x),
                None,
            )
            if y is None:
                raise PairingNotFound(f"contraction term {key_x} has no cancelling partner")
            key_y, _, iso_y, g_y = items[y]
            used[x] = used[y] = True
            w = iso_y.inverse().compose(iso_x)
            if pairing_condition(g_x, key_x[1], g_y, key_y[1], w, parity) != -1:
                raise PairingNotFound(f"witness for {key_x} ~ {key_y} fails the sign condition")
            entries.append(PairingEntry(key_x, key_y, w))
    entries.sort(key=lambda p: (p.first, p.second))
    return Pairing(parity, terms, entries, vanishing)


def kernel_sums(
    source_basis: Sequence[CanonicalClass], matrix: SparseIntMatrix
) -> list[SignedGraphSum]:
    """Kernel vectors of a boundary matrix as sums of representatives."""
    from .intlinalg import rational_kernel_basis

    sums = []
    for vec in rational_kernel_basis(matrix):
        sums.append(SignedGraphSum(tuple((c, source_basis[k].representative) for k, c in enumerate(vec) if c)))
    return sums


def closed_graphs(v: int, e: int, parity: str, allow_loops: bool = True) -> list[DirectedOrderedGraph]:
    """Basis representatives whose own differential vanishes."""
    basis = enumerate_basis(v, e, parity, allow_loops)
    return [c.representative for c in basis if check_closed(SignedGraphSum.single(c.representative), parity).closed]


__all__ = [
    "CanonicalClass",
    "ClosedReport",
    "EVEN",
    "HomologyTable",
    "ODD",
    "Pairing",
    "PairingEntry",
    "SignedGraphSum",
    "boundary_matrix",
    "canonicalize",
    "check_closed",
    "closed_graphs",
    "enumerate_basis",
    "gamma_pairing",
    "homology",
    "kernel_sums",
    "loop_order_bidegrees",
    "loop_order_complex",
    "pairing_condition",
]
