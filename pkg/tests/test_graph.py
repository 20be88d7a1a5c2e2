import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from gcx.enumeration import isomorphism_classes
from gcx.errors import (
    EmptyGraph,
    InputError,
    NotAnAutomorphism,
    NotConnected,
    SelfLoopContraction,
    ValenceTooLow,
)
from gcx.graph import (
    DirectedOrderedGraph,
    GraphIso,
    aut_group,
    contract_edge,
    contract_vertices,
    edge_tuple_action_check,
    find_isomorphisms,
    induced_subgraph,
    is_isomorphism,
    psi_gamma,
    relabel,
    signed_aut_count,
    signs,
    validate_generator,
)


def scrambled(g, rng):
    """A random relabelling of ``g`` (vertex order, edge order, directions)."""
    vp = list(range(1, g.n_vertices + 1))
    ep = list(range(1, g.n_edges + 1))
    rng.shuffle(vp)
    rng.shuffle(ep)
    rev = {i for i in range(1, g.n_edges + 1) if rng.random() < 0.5}
    return relabel(g, vp, ep, rev)


SMALL = [g for v, e in [(1, 2), (2, 3), (2, 4), (3, 5), (4, 6), (3, 6)] for g in isomorphism_classes(v, e)]


def test_basic_accessors(theta_graph):
    assert theta_graph.valences() == [3, 3]
    assert theta_graph.has_repeated_edges()
    assert not theta_graph.has_loops()
    loop = DirectedOrderedGraph(1, ((1, 1), (1, 1)))
    assert loop.valence(1) == 4 and loop.is_loop(2)


def test_validation_errors():
    with pytest.raises(InputError):
        DirectedOrderedGraph(0, ())
    with pytest.raises(InputError):
        DirectedOrderedGraph(2, ((1, 3),))
    with pytest.raises(EmptyGraph):
        validate_generator(DirectedOrderedGraph(1, ()))
    with pytest.raises(NotConnected):
        validate_generator(DirectedOrderedGraph(2, ((1, 1), (1, 1), (2, 2), (2, 2))))
    with pytest.raises(ValenceTooLow) as exc:
        validate_generator(DirectedOrderedGraph(3, ((1, 2), (1, 2), (1, 2), (2, 3))))
    assert exc.value.vertex == 3


def test_json_round_trip(k4):
    assert DirectedOrderedGraph.from_json(k4.to_json()) == k4
    with pytest.raises(InputError):
        DirectedOrderedGraph.from_json({"vertices": 2})


def test_contract_edge_orders(k4):
    h = contract_edge(k4, 4)  # edge 2 -> 3
    assert h == DirectedOrderedGraph(3, ((2, 1), (2, 1), (2, 3), (1, 3), (1, 3)))
    with pytest.raises(SelfLoopContraction):
        contract_edge(DirectedOrderedGraph(1, ((1, 1), (1, 1))), 1)


def test_contract_edge_matches_oracle():
    rng = random.Random(3)
    for g in SMALL:
        g = scrambled(g, rng)
        for i in range(1, g.n_edges + 1):
            if g.is_loop(i):
                continue
            n, edges = oracles.contract(g.n_vertices, list(g.edges), i)
            assert contract_edge(g, i) == DirectedOrderedGraph(n, tuple(edges))


def test_subgraph_and_collapse(k4):
    sub = induced_subgraph(k4, [2, 4])
    assert sub.graph == DirectedOrderedGraph(2, ((1, 2),)) and sub.edge_origin == (5,)
    quo = contract_vertices(k4, [2, 4])
    assert quo.graph.edges == ((2, 1), (2, 3), (2, 1), (1, 3), (3, 1))
    assert quo.vertex_origin == (None, 1, 3)


def test_isomorphisms_agree_with_brute_force():
    rng = random.Random(11)
    for g in SMALL:
        h = scrambled(g, rng)
        mine = {(a.vertex_perm, a.edge_perm, a.reversed) for a in find_isomorphisms(g, h)}
        brute = set(oracles.all_isomorphisms(g.n_vertices, list(g.edges), h.n_vertices, list(h.edges)))
        assert mine == brute
        for a in mine:
            assert is_isomorphism(g, h, GraphIso(*a))


def test_non_isomorphic_pair_has_no_isomorphisms():
    a, b = isomorphism_classes(2, 4)[:2]
    assert find_isomorphisms(a, b) == []


def test_iso_group_laws(k4):
    auts = aut_group(k4)
    assert len(auts) == 24
    ident = GraphIso.identity(k4)
    for a in auts[:8]:
        assert a.compose(a.inverse()) == ident
        for b in auts[:8]:
            c = a.compose(b)
            assert is_isomorphism(k4, k4, c)
            pa, pb, pc = a.parities(), b.parities(), c.parities()
            assert pc[0] == (pa[0] + pb[0]) % 2 and pc[1] == (pa[1] + pb[1]) % 2


def test_signs_match_oracle():
    for g in SMALL:
        for a in aut_group(g):
            for d in (3, 4, 5):
                s = signs(a, d)
                assert s.d == oracles.sgn_d(a.vertex_perm, a.edge_perm, a.reversed, d)
    with pytest.raises(InputError):
        signs(GraphIso((1,), ()), 2)


def test_signed_aut_count_theta(theta_graph):
    assert len(aut_group(theta_graph)) == 12
    assert signed_aut_count(theta_graph, 3) == 12
    assert signed_aut_count(theta_graph, 4) == 0


def test_psi_gamma_injective_and_commuting():
    for g in SMALL:
        auts = aut_group(g)
        images = {psi_gamma(g, a) for a in auts}
        assert len(images) == len(auts)
        assert all(edge_tuple_action_check(g, a) for a in auts)


def test_psi_gamma_rejects_non_automorphism(theta_graph):
    with pytest.raises(NotAnAutomorphism):
        psi_gamma(theta_graph, GraphIso((1, 2), (1, 2, 3), frozenset({1})))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.randoms(use_true_random=False))
def test_relabel_is_isomorphic(g, rng):
    h = scrambled(g, rng)
    assert find_isomorphisms(g, h)
    assert sorted(h.valences()) == sorted(g.valences())
