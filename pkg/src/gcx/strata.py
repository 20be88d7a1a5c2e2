"""Boundary-stratum bookkeeping for a closed graph.

Subsets ``A`` of ``{inf} + V(G)`` are encoded as sorted tuples of labels with
``0`` standing for the point at infinity.  Nothing geometric is built here:
each subset gets its spanned/contracted graphs, a type in 1..4, the signed
edge permutations that glue type 2 and type 4 strata, and the integer
dimension counts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .canon import ODD, EVEN
from .complex import Pairing, PairingEntry, SignedGraphSum, check_closed, gamma_pairing
from .errors import (
    AuditFailure,
    InputError,
    LabelOutOfRange,
    NotAPair,
    NotClosed,
    NotTrivalent,
    NotTypeTwo,
    RepeatedEdgesStrictMode,
    SubsetTooSmall,
    Unclassifiable,
)
from .graph import (
    DirectedOrderedGraph,
    GraphIso,
    SubgraphMap,
    aut_group,
    contract_vertices,
    induced_subgraph,
    is_isomorphism,
    psi_gamma,
    contract_edge,
)
from .signed_perm import LITERAL, SignedPermutation, orientation_twist

INFINITY = 0

__all__ = [
    "INFINITY",
    "ChamberResult",
    "StratumRecord",
    "AuditReport",
    "DimensionReport",
    "cancellation_audit",
    "chamber_classify",
    "classify",
    "dimension_report",
    "enumerate_subsets",
    "orientation_twist",
    "sigma_A",
    "sigma_pair",
    "stratum_record",
    "subgraph_and_quotient",
]


def _subset(g: DirectedOrderedGraph, A: Iterable[int]) -> tuple[int, ...]:
    a = tuple(sorted(set(int(x) for x in A)))
    if len(a) < 2:
        raise SubsetTooSmall(f"subset {a} has fewer than 2 elements")
    bad = [x for x in a if not 0 <= x <= g.n_vertices]
    if bad:
        raise LabelOutOfRange(f"labels {bad} outside 0..{g.n_vertices}")
    return a


def enumerate_subsets(g: DirectedOrderedGraph) -> Iterator[tuple[int, ...]]:
    """All admissible ``A`` by size, then lexicographically."""
    labels = range(0, g.n_vertices + 1)
    for k in range(2, g.n_vertices + 2):
        yield from itertools.combinations(labels, k)


def _split(g: DirectedOrderedGraph, a: tuple[int, ...]) -> tuple[SubgraphMap, SubgraphMap]:
    vs = [x for x in a if x != INFINITY]
    if INFINITY in a:
        return contract_vertices(g, vs), induced_subgraph(g, vs)
    return induced_subgraph(g, vs), contract_vertices(g, vs)


def subgraph_and_quotient(g: DirectedOrderedGraph, A: Iterable[int]) -> tuple[DirectedOrderedGraph, DirectedOrderedGraph]:
    sub, quo = _split(g, _subset(g, A))
    return sub.graph, quo.graph


def _free_vertices(a: tuple[int, ...], gamma_a: DirectedOrderedGraph) -> list[int]:
    # with inf in A the front vertex of G/(A - inf) is the point at infinity
    start = 2 if INFINITY in a else 1
    return list(range(start, gamma_a.n_vertices + 1))


def _classify(a: tuple[int, ...], gamma_a: DirectedOrderedGraph) -> int:
    val = gamma_a.valences()
    free = [val[v - 1] for v in _free_vertices(a, gamma_a)]
    if INFINITY not in a and gamma_a.n_vertices == 2 and gamma_a.n_edges == 1:
        return 4
    if any(x <= 1 for x in free):
        if len(a) >= 3 or gamma_a.n_edges == 0:
            return 1
        raise Unclassifiable(f"subset {a}: low-valence vertex, |A| = 2 and edges present")
    if any(x == 2 for x in free):
        return 2
    return 3


def classify(g: DirectedOrderedGraph, A: Iterable[int]) -> int:
    a = _subset(g, A)
    sub, _ = _split(g, a)
    return _classify(a, sub.graph)


def _bivalent_data(g: DirectedOrderedGraph, a: tuple[int, ...], sub: SubgraphMap) -> tuple[int, int, int]:
    val = sub.graph.valences()
    v_local = next(v for v in _free_vertices(a, sub.graph) if val[v - 1] == 2)
    v_a = sub.vertex_origin[v_local - 1]
    incident = [sub.edge_origin[k] for k, (t, h) in enumerate(sub.graph.edges) if v_local in (t, h)]
    return v_a, incident[0], incident[-1]


def sigma_A(g: DirectedOrderedGraph, A: Iterable[int]) -> SignedPermutation:
    """Involution swapping the two edges at the lowest bivalent vertex of ``G_A``."""
    a = _subset(g, A)
    sub, _ = _split(g, a)
    if _classify(a, sub.graph) != 2:
        raise NotTypeTwo(f"subset {a} is not of type 2")
    v_a, e1, e2 = _bivalent_data(g, a, sub)
    perm = list(range(1, g.n_edges + 1))
    if e1 == e2:
        # bivalent self-loop vertex: pure flip
        return SignedPermutation(tuple(perm), frozenset({e1}))
    perm[e1 - 1], perm[e2 - 1] = e2, e1
    starts = [g.edge(e)[0] == v_a for e in (e1, e2)]
    if starts[0] == starts[1]:
        return SignedPermutation(tuple(perm), frozenset({e1, e2}))
    return SignedPermutation(tuple(perm), frozenset())


def sigma_pair(g: DirectedOrderedGraph, e1: int, e2: int, witness: GraphIso) -> SignedPermutation:
    """Signed edge permutation of ``G`` carried by ``witness: G/e1 -> G/e2``.

    ``e1`` goes to ``e2`` unflipped; every other edge follows the witness
    through the identification of ``E(G) - {e}`` with the edges of ``G/e``.
    """
    for e in (e1, e2):
        if not 1 <= e <= g.n_edges or g.is_loop(e):
            raise NotAPair(f"edge {e} is not a contractible edge of the graph")
    h1, h2 = contract_edge(g, e1), contract_edge(g, e2)
    if not is_isomorphism(h1, h2, witness):
        raise NotAPair(f"witness is not an isomorphism G/e{e1} -> G/e{e2}")
    perm = [0] * g.n_edges
    flips = set()
    perm[e1 - 1] = e2
    for i in range(1, g.n_edges + 1):
        if i == e1:
            continue
        local = i if i < e1 else i - 1
        k = witness.edge_perm[local - 1]
        perm[i - 1] = k if k < e2 else k + 1
        if local in witness.reversed:
            flips.add(i)
    return SignedPermutation(tuple(perm), frozenset(flips))


def sigma_pair_from_entry(g: DirectedOrderedGraph, entry: PairingEntry) -> SignedPermutation:
    if entry.first[0] != 0 or entry.second[0] != 0:
        raise NotAPair("strata work with single-graph pairings (term 0)")
    return sigma_pair(g, entry.first[1], entry.second[1], entry.witness)


# ---------------------------------------------------------------------------
# chambers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChamberResult:
    in_image: bool
    witness: GraphIso | None = None
    orientation_sign: int | None = None


def chamber_classify(
    g: DirectedOrderedGraph, s: SignedPermutation, d: int = 3, strict: bool = True
) -> ChamberResult:
    """Is ``s`` the signed edge permutation of an automorphism?

    On a hit the orientation change is ``sgn(a, vertex)`` raised to ``d``.
    """
    if strict and g.has_repeated_edges():
        raise RepeatedEdgesStrictMode("graph has repeated edges; pass strict=False to override")
    if s.domain_size != g.n_edges:
        raise InputError(f"signed permutation on {s.domain_size} indices for {g.n_edges} edges")
    for a in aut_group(g):
        if psi_gamma(g, a) == s:
            pv = a.parities()[0]
            return ChamberResult(True, a, -1 if (pv * d) % 2 else 1)
    return ChamberResult(False)


# ---------------------------------------------------------------------------
# records and reports
# ---------------------------------------------------------------------------

@dataclass
class StratumRecord:
    subset: tuple[int, ...]
    gamma_A: DirectedOrderedGraph
    gamma_mod_A: DirectedOrderedGraph
    stratum_type: int
    free_vertices: int
    bivalent_vertex: int | None = None
    sigma_edges: tuple[int, int] | None = None
    sigma: SignedPermutation | None = None
    contracted_edge: int | None = None
    partner: tuple[int, ...] | None = None
    partner_edge: int | None = None
    witness: GraphIso | None = None
    twist: int | None = None
    checks: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict = {
            "A": list(self.subset),
            "type": self.stratum_type,
            "gamma_A": self.gamma_A.to_json(),
            "gamma_mod_A": self.gamma_mod_A.to_json(),
            "free_vertices": self.free_vertices,
        }
        if self.bivalent_vertex is not None:
            out["bivalent_vertex"] = self.bivalent_vertex
            out["sigma_edges"] = list(self.sigma_edges)
        if self.contracted_edge is not None:
            out["contracted_edge"] = self.contracted_edge
        if self.partner is not None:
            out["partner"] = list(self.partner)
            out["partner_edge"] = self.partner_edge
            out["witness"] = self.witness.to_json()
        if self.sigma is not None:
            out["sigma"] = self.sigma.to_json()
            out["twist"] = self.twist
        out["checks"] = dict(self.checks)
        return out


def stratum_record(g: DirectedOrderedGraph, A: Iterable[int]) -> StratumRecord:
    a = _subset(g, A)
    sub, quo = _split(g, a)
    kind = _classify(a, sub.graph)
    rec = StratumRecord(a, sub.graph, quo.graph, kind, len(_free_vertices(a, sub.graph)))
    if kind == 2:
        v_a, e1, e2 = _bivalent_data(g, a, sub)
        rec.bivalent_vertex = v_a
        rec.sigma_edges = (e1, e2)
        rec.sigma = sigma_A(g, a)
    elif kind == 4:
        rec.contracted_edge = sub.edge_origin[0]
    return rec


@dataclass
class DimensionRow:
    subset: tuple[int, ...]
    stratum_type: int
    vertices: int
    free_vertices: int
    edges: int
    fiber_dimension: int
    type3_inequality: bool | None

    def to_json(self) -> dict:
        return {
            "A": list(self.subset),
            "type": self.stratum_type,
            "vertices": self.vertices,
            "free_vertices": self.free_vertices,
            "edges": self.edges,
            "fiber_dimension": self.fiber_dimension,
            "type3_inequality": self.type3_inequality,
        }


@dataclass
class DimensionReport:
    d: int
    vertices: int
    edges: int
    degree: int
    total_dimension: int
    trivalent_identity: bool
    rows: list[DimensionRow]

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "vertices": self.vertices,
            "edges": self.edges,
            "degree": self.degree,
            "total_dimension": self.total_dimension,
            "trivalent_identity": self.trivalent_identity,
            "subsets": [r.to_json() for r in self.rows],
        }


def _require_trivalent(g: DirectedOrderedGraph) -> None:
    bad = [v for v, k in enumerate(g.valences(), 1) if k != 3]
    if bad:
        raise NotTrivalent(f"vertices {bad} are not trivalent")


def class_degree(g: DirectedOrderedGraph, d: int) -> int:
    return g.n_edges * (d - 1) - d * g.n_vertices


def type3_bound_holds(free_vertices: int, edges: int, d: int) -> bool:
    """``d V - d - 1 <= (2d/3) E - (d + 1)`` for the spanned graph."""
    return d * free_vertices - d - 1 <= Fraction(2 * d, 3) * edges - (d + 1)


def dimension_report(g: DirectedOrderedGraph, d: int) -> DimensionReport:
    """Class degree, configuration-space dimensions and the type-3 bound per subset.

    With infinity in ``A`` the fiber dimension and the bound count only the
    vertices of ``G_A`` other than the infinity vertex.
    """
    if d < 3:
        raise InputError(f"d must be >= 3, got {d}")
    _require_trivalent(g)
    rows = []
    for a in enumerate_subsets(g):
        sub, _ = _split(g, a)
        kind = _classify(a, sub.graph)
        free = len(_free_vertices(a, sub.graph))
        e = sub.graph.n_edges
        rows.append(
            DimensionRow(
                a,
                kind,
                sub.graph.n_vertices,
                free,
                e,
                d * free - d - 1,
                type3_bound_holds(free, e, d) if kind == 3 else None,
            )
        )
    return DimensionReport(
        d,
        g.n_vertices,
        g.n_edges,
        class_degree(g, d),
        d * g.n_vertices,
        2 * g.n_edges == 3 * g.n_vertices,
        rows,
    )


@dataclass
class AuditReport:
    graph: DirectedOrderedGraph
    parity: str
    d: int
    sgn_prime_mode: str
    records: list[StratumRecord]
    pairing: Pairing
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures

    def counts(self) -> dict[int, int]:
        out = {1: 0, 2: 0, 3: 0, 4: 0}
        for r in self.records:
            out[r.stratum_type] += 1
        return out

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "conventions": {
                "parity": self.parity,
                "d": self.d,
                "sgn_prime_mode": self.sgn_prime_mode,
                "infinity_label": INFINITY,
                "bivalent_vertex_choice": "lowest label",
            },
            "records": [r.to_json() for r in self.records],
            "summary": {
                "subsets": len(self.records),
                "types": {str(k): v for k, v in self.counts().items()},
                "degree": class_degree(self.graph, self.d),
                "passed": self.passed,
                "failures": self.failures,
            },
        }


def cancellation_audit(
    g: DirectedOrderedGraph,
    parity: str | None = None,
    d: int = 3,
    sgn_prime_mode: str = LITERAL,
    raise_on_failure: bool = True,
) -> AuditReport:
    """Classify every subset and check the gluing data of type 2 and type 4 strata."""
    if d < 3:
        raise InputError(f"d must be >= 3, got {d}")
    if parity is None:
        parity = ODD if d % 2 else EVEN
    _require_trivalent(g)
    if not check_closed(SignedGraphSum.single(g), parity).closed:
        raise NotClosed("graph is not closed under the differential")
    pairing = gamma_pairing(SignedGraphSum.single(g), parity)
    partners = pairing.partner_map()
    edge_to_subset = {}
    failures: list[str] = []
    records = []
    for a in enumerate_subsets(g):
        try:
            rec = stratum_record(g, a)
        except Unclassifiable as exc:
            failures.append(str(exc))
            continue
        records.append(rec)
        if INFINITY in a:
            rec.checks["infinity_type3"] = rec.stratum_type == 3
        if rec.stratum_type == 2:
            s = rec.sigma
            e1, e2 = rec.sigma_edges
            rec.checks["involution"] = s.compose(s).is_identity()
            rec.checks["fixes_complement"] = all(
                s(i) == (i, False) for i in range(1, g.n_edges + 1) if i not in (e1, e2)
            )
            rec.checks["odd_sign"] = s.sgn() == -1 or e1 == e2
            rec.twist = orientation_twist(s, d, sgn_prime_mode)
        elif rec.stratum_type == 3:
            rec.checks["type3_inequality"] = type3_bound_holds(rec.free_vertices, rec.gamma_A.n_edges, d)
        elif rec.stratum_type == 4:
            edge_to_subset[rec.contracted_edge] = a
        rec.checks["conservation"] = (
            rec.gamma_A.n_vertices + rec.gamma_mod_A.n_vertices == g.n_vertices + 1
            and rec.gamma_A.n_edges + rec.gamma_mod_A.n_edges == g.n_edges
        )
    for rec in records:
        if rec.stratum_type != 4:
            continue
        e1 = rec.contracted_edge
        if (0, e1) not in partners:
            failures.append(f"type-4 subset {rec.subset} (edge {e1}) has no pairing partner")
            continue
        (_, e2), witness = partners[(0, e1)]
        if e2 not in edge_to_subset:
            failures.append(f"edge {e1} is paired with edge {e2}, which is not a type-4 subset")
            continue
        rec.partner = edge_to_subset[e2]
        rec.partner_edge = e2
        rec.witness = witness
        rec.sigma = sigma_pair(g, e1, e2, witness)
        back = sigma_pair(g, e2, e1, witness.inverse())
        rec.checks["reverse_is_inverse"] = back == rec.sigma.inverse()
        h1, h2 = contract_edge(g, e1), contract_edge(g, e2)
        four1 = {v for v, k in enumerate(h1.valences(), 1) if k == 4}
        four2 = {v for v, k in enumerate(h2.valences(), 1) if k == 4}
        rec.checks["four_valent_to_four_valent"] = (
            four1 == {1} and four2 == {1} and witness.vertex_perm[0] == 1
        )
        rec.twist = orientation_twist(rec.sigma, d, sgn_prime_mode)
    for rec in records:
        for name, ok in rec.checks.items():
            if not ok:
                failures.append(f"subset {rec.subset}: check {name} failed")
    report = AuditReport(g, parity, d, sgn_prime_mode, records, pairing, failures)
    if failures and raise_on_failure:
        raise AuditFailure("; ".join(failures))
    return report
