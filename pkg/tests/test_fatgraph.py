import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatcoords import fatgraph
from fatcoords.fatgraph import (STOCK, FatGraph, GraphError, build_cover, dual, flip,
                                flip_sequence, is_loop, pentagon_pairs, pentagon_word, stock,
                                surface_type)

EXPECTED = {"torus1": (1, 1), "theta": (0, 3), "genus2": (2, 1), "sphere4": (0, 4),
            "sphere5": (0, 5)}


@pytest.mark.parametrize("name", sorted(STOCK))
def test_stock_surface_types(name):
    g = stock(name)
    assert g.is_trivalent()
    assert surface_type(g) == EXPECTED[name]
    genus, holes = EXPECTED[name]
    assert fatgraph.euler_characteristic(g) == 2 - 2 * genus - holes


def test_unknown_stock_name():
    with pytest.raises(GraphError):
        stock("klein")


@pytest.mark.parametrize("ee,s0,s1", [
    (["a", "b"], [0, 1], [0, 1]),          # s1 has fixed points
    (["a", "b"], [0, 0], [1, 0]),          # s0 not a permutation
    (["a", "b", "c"], [1, 2, 0], [1, 2, 0]),  # s1 not an involution
    (["a", "a"], [1, 0], [1, 0]),          # repeated names
])
def test_invalid_graphs_rejected(ee, s0, s1):
    with pytest.raises(GraphError):
        FatGraph(ee, s0, s1)


def test_json_round_trip():
    g = stock("sphere5")
    assert FatGraph.from_json(g.to_json()) == g
    with pytest.raises(GraphError):
        FatGraph.from_json({"ee": ["a"]})


def test_face_ends_follow_boundary():
    for name in STOCK:
        g = stock(name)
        for f in range(g.n_faces):
            ends = g.face_ends(f)
            for a, b in zip(ends, ends[1:] + ends[:1]):
                assert b == g.s1[g.s0inv[a]]


def test_loop_flip_rejected():
    g = stock("genus2")
    loops = [k for k in range(g.n_edges) if is_loop(g, k)]
    for k in loops:
        with pytest.raises(GraphError):
            flip(g, k)


def test_flip_keeps_indices_and_renames_diagonal():
    g = stock("torus1")
    h, corr = flip(g, "x")
    assert corr.is_identity()
    assert h.edge_names == ("x'", "y", "z")


def test_dual_swaps_vertices_and_faces():
    for name in STOCK:
        g = stock(name)
        d, _ = dual(g)
        assert (d.n_vertices, d.n_faces) == (g.n_faces, g.n_vertices)
        # same closed surface
        assert d.n_vertices - d.n_edges + d.n_faces == g.n_vertices - g.n_edges + g.n_faces


graph_names = st.sampled_from(sorted(STOCK))


@settings(max_examples=60, deadline=None)
@given(graph_names, st.lists(st.integers(0, 8), min_size=1, max_size=8))
def test_flips_preserve_surface(name, seq):
    g = stock(name)
    for raw in seq:
        k = raw % g.n_edges
        if is_loop(g, k):
            continue
        g, _ = flip(g, k)
        assert g.is_trivalent()
    assert surface_type(g) == EXPECTED[name]


@settings(max_examples=40, deadline=None)
@given(graph_names, st.integers(0, 8))
def test_flip_twice_is_isomorphic_with_identity_on_edges(name, raw):
    g = stock(name)
    k = raw % g.n_edges
    if is_loop(g, k):
        return
    h, corr = flip_sequence(g, [k, k])
    assert corr.is_identity()
    assert fatgraph.same_graph(g, h, corr)


@pytest.mark.parametrize("name", ["sphere4", "sphere5", "genus2"])
def test_pentagon_returns_to_graph_with_edges_swapped(name):
    g = stock(name)
    pairs = pentagon_pairs(g)
    assert pairs
    for k1, k2 in pairs:
        h, corr = flip_sequence(g, pentagon_word(k1, k2))
        swap = list(range(g.n_edges))
        swap[k1], swap[k2] = k2, k1
        assert fatgraph.find_isomorphism(g, h, swap) is not None


def test_pentagon_pairs_share_one_vertex():
    g = stock("sphere5")
    for k1, k2 in pentagon_pairs(g):
        assert fatgraph.shares_vertex(g, k1, k2)


def test_torus_has_no_pentagon():
    # both edges of any pair span the two vertices, so only two vertices are involved
    assert pentagon_pairs(stock("torus1")) == []


def test_double_cover_counts():
    g = stock("torus1")
    cov = build_cover(g, {"x": [1, 0]})
    h = cov.graph
    assert (h.n_vertices, h.n_edges) == (2 * g.n_vertices, 2 * g.n_edges)
    assert fatgraph.euler_characteristic(h) == 2 * fatgraph.euler_characteristic(g)
    assert surface_type(h) == (1, 2)
    assert sorted(cov.edge_proj) == sorted(list(range(3)) * 2)
    assert cov.pullback([1, 2, 3]) == [cov.edge_proj[k] + 1 for k in range(6)]


def test_disconnected_cover_has_no_surface_type():
    g = stock("torus1")
    cov = build_cover(g, {"x": [1, 0], "y": [1, 0], "z": [1, 0]})
    assert len(fatgraph.components(cov.graph)) == 2
    with pytest.raises(GraphError):
        surface_type(cov.graph)


def test_bad_cover_permutation():
    with pytest.raises(GraphError):
        build_cover(stock("theta"), {"x": [0, 0]})


def test_automorphisms_commute():
    g = stock("theta")
    auts = fatgraph.automorphisms(g)
    # orientation-preserving symmetries act freely on the six ends
    assert len(auts) == 6
    for a in auts:
        for i in range(g.n_ends):
            assert a[g.s0[i]] == g.s0[a[i]]
            assert a[g.s1[i]] == g.s1[a[i]]


def test_to_dot_mentions_every_edge():
    g = stock("theta")
    text = fatgraph.to_dot(g)
    assert text.startswith("graph") or text.startswith("digraph")
    for name in g.edge_names:
        assert name in text
