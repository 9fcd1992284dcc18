import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatcoords import lamination, teich
from fatcoords.fatgraph import STOCK, GraphError, flip_quad, is_loop, is_regular_face, stock
from fatcoords.fuchs import path_monodromy
from fatcoords.lamination import BoundedLamCoords
from fatcoords.teich import PennerCoords, ShearCoords

GOLDEN = json.loads((Path(__file__).parent / "golden" / "flip_vectors.json").read_text())
coord = st.floats(-3, 3, allow_nan=False)


def _closed_curve_traces(g, z, w):
    return sorted(path_monodromy(g, z, cur.ends).abs_trace()
                  for cur in lamination.reconstruct_bounded(BoundedLamCoords(g, w)).closed())


@pytest.mark.parametrize("name", sorted(STOCK))
def test_golden_flip_vectors(name):
    data = GOLDEN[name]
    g = stock(name)
    for case in data["flips"]:
        k = g.edge_index(case["edge"])
        c, corr = teich.flip_shear(ShearCoords(g, data["shear"]), k)
        assert [c.z[corr(i)] for i in range(g.n_edges)] == pytest.approx(case["shear"], abs=1e-14)
        p, _ = teich.flip_penner(PennerCoords(g, data["penner"]), k)
        assert [p.u[corr(i)] for i in range(g.n_edges)] == pytest.approx(case["penner"], abs=1e-14)
        b, _ = lamination.flip_bounded(BoundedLamCoords(g, data["lamination"]), k)
        assert [str(b.w[corr(i)]) for i in range(g.n_edges)] == case["bounded"]
        u, _ = lamination.flip_unbounded(lamination.UnboundedLamCoords(g, data["lamination"]), k)
        assert [str(u.w[corr(i)]) for i in range(g.n_edges)] == case["unbounded"]


@pytest.mark.parametrize("name", sorted(STOCK))
def test_golden_shear_vectors_preserve_traces(name):
    """Independent check of the frozen shear values: closed-curve traces agree."""
    data = GOLDEN[name]
    g = stock(name)
    probe = [2] * g.n_edges
    for case in data["flips"]:
        k = g.edge_index(case["edge"])
        c, corr = teich.flip_shear(ShearCoords(g, data["shear"]), k)
        frozen = corr.transport(case["shear"])
        b2, _ = lamination.flip_bounded(BoundedLamCoords(g, probe), k)
        before = _closed_curve_traces(g, data["shear"], probe)
        after = _closed_curve_traces(c.graph, frozen, b2.w)
        assert after == pytest.approx(before, rel=1e-10)


@pytest.mark.parametrize("name", sorted(STOCK))
def test_golden_penner_vectors_intertwine_ip(name):
    data = GOLDEN[name]
    g = stock(name)
    z0 = teich.ip_values(g, data["penner"])
    for case in data["flips"]:
        k = g.edge_index(case["edge"])
        _, corr = teich.flip_penner(PennerCoords(g, data["penner"]), k)
        h = corr.dst
        left = teich.ip_values(h, corr.transport(case["penner"]))
        right = corr.transport(teich.shear_flip_values(g, z0, k))
        assert left == pytest.approx(right, abs=1e-12)


def test_shear_flip_on_torus_by_hand():
    g = stock("torus1")
    e, f, a, b, c, d = flip_quad(g, "x")
    z = [0.5, 1.0, -1.0]
    out = teich.shear_flip_values(g, z, 0)
    assert out[0] == -0.5
    gain = math.log1p(math.exp(0.5))
    loss = math.log1p(math.exp(-0.5))
    # on the torus each neighbouring edge fills two sides
    assert sorted([g.edge_of[s] for s in (a, b, c, d)]) == [1, 1, 2, 2]
    expected = list(z)
    for s in (a, c):
        expected[g.edge_of[s]] += gain
    for s in (b, d):
        expected[g.edge_of[s]] -= loss
    expected[0] = -0.5
    assert out == pytest.approx(expected)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(STOCK)), st.integers(0, 8), st.lists(coord, min_size=9, max_size=9))
def test_flip_preserves_face_sums(name, raw, zs):
    g = stock(name)
    k = raw % g.n_edges
    if is_loop(g, k):
        return
    c = ShearCoords(g, zs[:g.n_edges])
    c2, _ = teich.flip_shear(c, k)
    assert sorted(teich.lH_shear(c2)) == pytest.approx(sorted(teich.lH_shear(c)), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(STOCK)), st.lists(coord, min_size=9, max_size=9))
def test_ip_kills_face_sums(name, us):
    """Shear coordinates coming from Penner coordinates have zero face sums."""
    g = stock(name)
    z = teich.ip_shear(PennerCoords(g, us[:g.n_edges]))
    assert teich.lH_shear(z) == pytest.approx([0.0] * g.n_faces, abs=1e-9)
    assert np.allclose(teich.ip_matrix(g) @ np.array(us[:g.n_edges]), z.z)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["theta", "sphere4", "sphere5"]), st.integers(0, 4),
       st.lists(coord, min_size=9, max_size=9))
def test_orientation_change(name, raw, zs):
    g = stock(name)
    f = raw % g.n_faces
    assert is_regular_face(g, f)
    c = ShearCoords(g, zs[:g.n_edges])
    c1 = teich.orientation_flip_shear(c, f)
    sums, sums1 = teich.lH_shear(c), teich.lH_shear(c1)
    assert sums1[f] == pytest.approx(-sums[f], abs=1e-9)
    for h in range(g.n_faces):
        if h != f:
            assert sums1[h] == pytest.approx(sums[h], abs=1e-9)
    c2 = teich.orientation_flip_shear(c1, f)
    assert c2.z == pytest.approx(c.z, abs=1e-9)
    probe = [2] * g.n_edges
    assert _closed_curve_traces(g, c1.z, probe) == pytest.approx(
        _closed_curve_traces(g, c.z, probe), rel=1e-9)


def test_orientation_change_needs_regular_face():
    g = stock("torus1")
    with pytest.raises(GraphError):
        teich.orientation_flip_shear(ShearCoords(g, [1, 2, 3]), 0)


def test_brackets():
    assert teich.bracket_log([0.0]) == pytest.approx(math.log(2))
    xs = [Fraction(1), Fraction(-2), Fraction(3)]
    # alternating partial sums -2, 0, -4, 2
    assert teich.bracket_tropical(xs) == Fraction(1)
    C = 200.0
    assert teich.bracket_log([C * float(x) for x in xs]) / C == pytest.approx(1, abs=0.01)


def test_area_map_scale():
    g = stock("theta")
    u = [0.3, -0.2, 1.1]
    a = teich.area_map(PennerCoords(g, u))
    shifted = teich.area_map(PennerCoords(g, [v + 1 for v in u]))
    # adding 1 to every u changes each corner exponent by -1
    assert shifted == pytest.approx([v - 0.5 for v in a])


def test_tied_tropical_terms_have_log_error():
    """On theta both Penner flip terms coincide, so the error is exactly log(2)/C."""
    g = stock("theta")
    u = [0.4, -1.3, 2.0]
    want = teich.tropical_penner_flip_values(g, u, 0)
    for C in (4, 8, 16, 32):
        got = teich.penner_flip_values(g, [C * x for x in u], 0)
        assert max(abs(x / C - y) for x, y in zip(got, want)) == pytest.approx(math.log(2) / C)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(STOCK)), st.integers(0, 8), st.lists(coord, min_size=9, max_size=9))
def test_tropical_flip_error_bound(name, raw, cs):
    g = stock(name)
    k = raw % g.n_edges
    if is_loop(g, k):
        return
    c = cs[:g.n_edges]
    for C in (4, 32):
        s = teich.shear_flip_values(g, [C * x for x in c], k)
        p = teich.penner_flip_values(g, [C * x for x in c], k)
        st_err = max(abs(x / C - y) for x, y in zip(s, teich.tropical_shear_flip_values(g, c, k)))
        pe_err = max(abs(x / C - y) for x, y in zip(p, teich.tropical_penner_flip_values(g, c, k)))
        # each side gets at most two log(1 + e^-t) corrections
        assert st_err <= 2 * math.log(2) / C + 1e-12
        assert pe_err <= math.log(2) / C + 1e-12


def test_penner_flip_ptolemy():
    g = stock("sphere4")
    u = [0.1, 0.7, -0.4, 1.2, 0.3, -0.9]
    e, f, a, b, c, d = flip_quad(g, 2)
    A, B, C, D = (math.exp(u[g.edge_of[s]]) for s in (a, b, c, d))
    new = teich.penner_flip_values(g, u, 2)
    assert math.exp(new[2]) * math.exp(u[2]) == pytest.approx(A * C + B * D)


def test_wrong_length_rejected():
    with pytest.raises(GraphError):
        ShearCoords(stock("theta"), [1, 2])
