import json
import math
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatcoords import markov

GOLDEN = json.loads((Path(__file__).parent / "golden" / "markov_tree_depth6.json").read_text())


def test_tree_matches_golden():
    assert markov.tree_rows(markov.markov_tree(6)) == GOLDEN["rows"]


def test_golden_rows_are_markov_numbers():
    known = set(markov.markov_numbers_up_to(10**8))
    assert all(x in known for row in GOLDEN["rows"] for x in row)


def test_figure_value_not_markov():
    """The printed 3276569 is not a Markov number; the tree has 3276509 there."""
    known = set(markov.markov_numbers_up_to(10**7))
    assert 3276509 in known and 3276569 not in known
    printed = [x for row in markov.figure_rows() for x in row]
    computed = [x for row in GOLDEN["rows"] for x in row]
    assert [(a, b) for a, b in zip(printed, computed) if a != b] == [(3276569, 3276509)]


def test_tree_triples_satisfy_equation():
    for node in markov.tree_nodes(markov.markov_tree(7)):
        assert markov.is_markov(node.triple())


def test_tree_labels_match_farey_index():
    for node in markov.tree_nodes(markov.markov_tree(6)):
        assert markov.markov_of_rational(node.rational) == node.label


def test_small_markov_numbers():
    assert markov.markov_numbers_up_to(1000) == [1, 2, 5, 13, 29, 34, 89, 169, 194, 233, 433, 610, 985]


@settings(max_examples=60, deadline=None)
@given(st.floats(-3, 3, allow_nan=False), st.floats(-3, 3, allow_nan=False),
       st.floats(-3, 3, allow_nan=False))
def test_residual_identity(x, y, z):
    r = markov.markov_residual(x, y, z)
    assert r == pytest.approx(markov.markov_residual_closed_form(x, y, z), abs=1e-9)


def test_moves():
    t = (1, 2, 5)
    assert markov.is_markov(markov.markov_move(t))
    for k in range(3):
        assert markov.vieta(markov.vieta(t, k), k) == t
    assert markov.rotate(markov.rotate(markov.rotate(t))) == t


def test_markov_symmetries():
    for q in range(1, 12):
        for p in range(0, q + 1):
            if math.gcd(p, q) != 1:
                continue
            m = markov.markov_of_rational((p, q))
            # the maps permuting 0, 1 and infinity
            assert markov.markov_of_rational((q - p, q)) == m
            if p:
                assert markov.markov_of_rational((q, p)) == m
            if p != q:
                assert markov.markov_of_rational((p, p - q)) == m


def test_psi():
    assert markov.psi("1/2") == pytest.approx(math.acosh(3.0) / 2)
    big = markov.psi((89, 144))
    assert big == pytest.approx(math.acosh(1.5 * markov.markov_of_rational((89, 144))) / 144,
                                rel=1e-12)
    with pytest.raises(ValueError):
        markov.psi("1/0")
    with pytest.raises(ValueError):
        markov.markov_of_rational("2/4")


def test_decorated_orbit_keeps_area():
    orbit = markov.decorated_orbit([1, 2, 3], ["flip", "rotate", "flip", "flip", "rotate"])
    areas = {markov.horocycle_area(t) for t in orbit}
    assert areas == {Fraction(7, 3)}
    with pytest.raises(ValueError):
        markov.decorated_orbit([1, 0, 1], [])
    with pytest.raises(ValueError):
        markov.decorated_orbit([1, 1, 1], ["jump"])


def test_decorated_markov_case():
    # at area 3 the decorated move is the Markov move
    t = (1, 1, 1)
    for _ in range(4):
        t = markov.decorated_move(t)
        assert markov.horocycle_area(t) == 3


def test_traces_at_origin_are_markov():
    from fatcoords.fatgraph import stock
    from fatcoords.teich import ShearCoords

    got = markov.torus_third_traces(ShearCoords(stock("torus1"), [0, 0, 0]))
    assert got == pytest.approx([1, 1, 1])


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=8))
def test_trace_flip_covariance(word):
    bad, rows = markov.trace_flip_mismatches(word)
    assert bad == 0


def test_tree_dot():
    text = markov.tree_to_dot(markov.markov_tree(3))
    assert text.startswith("graph markov {") and '"3/5"' in text


def test_negative_depth():
    with pytest.raises(ValueError):
        markov.markov_tree(-1)
