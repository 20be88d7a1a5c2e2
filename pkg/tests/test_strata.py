import pytest

from gcx.canon import EVEN, ODD
from gcx.complex import SignedGraphSum, gamma_pairing
from gcx.enumeration import isomorphism_classes
from gcx.errors import (
    LabelOutOfRange,
    NotAPair,
    NotClosed,
    NotTrivalent,
    NotTypeTwo,
    RepeatedEdgesStrictMode,
    SubsetTooSmall,
    Unclassifiable,
)
from gcx.graph import DirectedOrderedGraph, GraphIso, aut_group, psi_gamma
from gcx.signed_perm import ALL_FLIPS, SignedPermutation
from gcx.strata import (
    INFINITY,
    cancellation_audit,
    chamber_classify,
    class_degree,
    classify,
    dimension_report,
    enumerate_subsets,
    orientation_twist,
    sigma_A,
    sigma_pair,
    stratum_record,
    subgraph_and_quotient,
)

TRIVALENT = [g for v in (2, 4, 6) for g in isomorphism_classes(v, 3 * v // 2, allow_loops=False)]


def test_subgraph_and_quotient_examples(theta_graph, k4):
    assert subgraph_and_quotient(theta_graph, [1, 2]) == (theta_graph, DirectedOrderedGraph(1, ()))
    assert subgraph_and_quotient(theta_graph, [INFINITY, 1]) == (theta_graph, DirectedOrderedGraph(1, ()))
    sub, quo = subgraph_and_quotient(k4, [1, 2])
    assert sub == DirectedOrderedGraph(2, ((1, 2),))
    assert quo.n_vertices == 3 and quo.n_edges == 5 and quo.valences()[0] == 4
    with pytest.raises(SubsetTooSmall):
        subgraph_and_quotient(k4, [1])
    with pytest.raises(LabelOutOfRange):
        subgraph_and_quotient(k4, [1, 7])


def test_classify_examples(theta_graph, k4, prism):
    assert classify(theta_graph, [1, 2]) == 3
    assert classify(k4, [1, 2]) == 4
    assert classify(prism, [1, 5]) == 1
    assert classify(k4, [1, 2, 3]) == 2
    assert classify(k4, [1, 2, 3, 4]) == 3


def test_subset_enumeration_size(k4):
    assert len(list(enumerate_subsets(k4))) == 2**5 - 5 - 1


def test_every_subset_classified_and_conserves_counts():
    for g in TRIVALENT:
        for a in enumerate_subsets(g):
            kind = classify(g, a)
            assert kind in (1, 2, 3, 4)
            if INFINITY in a:
                assert kind == 3
            sub, quo = subgraph_and_quotient(g, a)
            assert sub.n_vertices + quo.n_vertices == g.n_vertices + 1
            assert sub.n_edges + quo.n_edges == g.n_edges


def test_looped_graph_falls_through_classification():
    # a loop at 1 plus the pendant edge 1-3: univalent vertex, |A| = 2, edges present
    g = DirectedOrderedGraph(4, ((1, 1), (1, 3), (2, 3), (2, 4), (2, 4), (3, 4)))
    with pytest.raises(Unclassifiable):
        classify(g, [1, 3])


def test_sigma_a_examples():
    flip = DirectedOrderedGraph(3, ((1, 2), (2, 3), (1, 3)))
    assert sigma_A(flip, [1, 2, 3]) == SignedPermutation((3, 2, 1), frozenset({1, 3}))
    cyclic = DirectedOrderedGraph(3, ((1, 2), (2, 3), (3, 1)))
    assert sigma_A(cyclic, [1, 2, 3]) == SignedPermutation((3, 2, 1))


def test_sigma_a_k4_triangle(k4):
    s = sigma_A(k4, [1, 2, 3])
    # lowest bivalent vertex is 1; its triangle edges 1->2, 1->3 both start there
    assert s == SignedPermutation((2, 1, 3, 4, 5, 6), frozenset({1, 2}))
    with pytest.raises(NotTypeTwo):
        sigma_A(k4, [1, 2])


def test_sigma_a_properties():
    for g in TRIVALENT:
        for a in enumerate_subsets(g):
            if classify(g, a) != 2:
                continue
            s = sigma_A(g, a)
            rec = stratum_record(g, a)
            e1, e2 = rec.sigma_edges
            assert (s * s).is_identity()
            assert all(s(i) == (i, False) for i in range(1, g.n_edges + 1) if i not in (e1, e2))
            assert e1 == e2 or s.sgn() == -1


def test_sigma_pair_inverse_and_errors(k4, theta_graph):
    p = gamma_pairing(SignedGraphSum.single(k4), EVEN)
    for entry in p.vanishing:
        e = entry.first[1]
        s = sigma_pair(k4, e, e, entry.witness)
        assert s(e) == (e, False)
        assert sigma_pair(k4, e, e, entry.witness.inverse()) == s.inverse()
        if entry.witness.compose(entry.witness) == GraphIso.identity(_contracted(k4, e)):
            assert (s * s).is_identity()
    with pytest.raises(NotAPair):
        sigma_pair(k4, 1, 2, GraphIso((1, 2, 3), (1, 2, 3, 4, 5)))


def _contracted(g, e):
    from gcx.graph import contract_edge

    return contract_edge(g, e)


def test_chamber_classify(k4, theta_graph):
    assert chamber_classify(k4, SignedPermutation.identity(6)).in_image
    for a in aut_group(k4)[::5]:
        res = chamber_classify(k4, psi_gamma(k4, a))
        assert res.in_image and res.witness == a
    assert not chamber_classify(k4, SignedPermutation((1, 2, 3, 4, 5, 6), frozenset({1}))).in_image
    hits = sum(
        chamber_classify(k4, SignedPermutation(p.perm, p.flips)).in_image
        for p in {psi_gamma(k4, a) for a in aut_group(k4)}
    )
    assert hits == 24
    with pytest.raises(RepeatedEdgesStrictMode):
        chamber_classify(theta_graph, SignedPermutation.identity(3))
    assert chamber_classify(theta_graph, SignedPermutation.identity(3), strict=False).in_image


def test_orientation_twist_reexport():
    assert orientation_twist(SignedPermutation((1,), frozenset({1})), 3, ALL_FLIPS) == -1


def test_dimension_report(theta_graph, k4):
    assert dimension_report(theta_graph, 3).degree == 0
    assert dimension_report(theta_graph, 4).degree == 1
    rep = dimension_report(k4, 5)
    assert rep.degree == class_degree(k4, 5) == 6 * 4 - 5 * 4
    assert rep.trivalent_identity and rep.total_dimension == 20
    assert all(r.type3_inequality for r in rep.rows if r.stratum_type == 3)
    with pytest.raises(NotTrivalent):
        dimension_report(DirectedOrderedGraph(1, ((1, 1), (1, 1))), 3)


def test_type3_inequality_all_trivalent_up_to_eight_vertices():
    graphs = TRIVALENT + list(isomorphism_classes(8, 12, allow_loops=False))
    for g in graphs:
        for d in (3, 4, 5):
            assert all(r.type3_inequality for r in dimension_report(g, d).rows if r.stratum_type == 3)


def test_audits(theta_graph, k4):
    rep = cancellation_audit(theta_graph, ODD, 3)
    assert rep.passed and rep.counts() == {1: 0, 2: 0, 3: 4, 4: 0}
    rep = cancellation_audit(k4, EVEN, 4)
    assert rep.passed and rep.counts()[4] == 6
    assert rep.to_json()["summary"]["degree"] == 2
    with pytest.raises(NotClosed):
        cancellation_audit(k4, ODD, 3)
