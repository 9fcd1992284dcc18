"""Quick invariant suite behind ``fatcoords selftest``."""

import json
import math
import random
from fractions import Fraction
from importlib import resources

import numpy as np

from . import fatgraph, lamination, markov, poisson, quantum, teich
from .fatgraph import STOCK, is_loop, pentagon_pairs, pentagon_word


def _flippable(g):
    return [k for k in range(g.n_edges) if not is_loop(g, k)]


def pentagon_deviation(rng):
    """Largest deviation of the five-flip word from swapping the two edges."""
    worst = 0.0
    for name in STOCK:
        g = fatgraph.stock(name)
        for k1, k2 in pentagon_pairs(g):
            z = [rng.uniform(-2, 2) for _ in range(g.n_edges)]
            c = teich.ShearCoords(g, z)
            for k in pentagon_word(k1, k2):
                c, _ = teich.flip_shear(c, k)
            want = list(z)
            want[k1], want[k2] = z[k2], z[k1]
            worst = max(worst, max(abs(a - b) for a, b in zip(c.z, want)))
    return worst


def involution_deviation(rng):
    """Flip twice on every stock graph in the four coordinate systems."""
    worst = 0.0
    exact = True
    for name in STOCK:
        g = fatgraph.stock(name)
        for k in _flippable(g):
            z = [rng.uniform(-3, 3) for _ in range(g.n_edges)]
            c = teich.ShearCoords(g, z)
            for _ in range(2):
                c, _ = teich.flip_shear(c, k)
            worst = max(worst, max(abs(a - b) for a, b in zip(c.z, z)))
            p = teich.PennerCoords(g, z)
            for _ in range(2):
                p, _ = teich.flip_penner(p, k)
            worst = max(worst, max(abs(a - b) for a, b in zip(p.u, z)))
            w = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(g.n_edges)]
            u = lamination.UnboundedLamCoords(g, w)
            for _ in range(2):
                u, _ = lamination.flip_unbounded(u, k)
            b = lamination.BoundedLamCoords(g, w)
            for _ in range(2):
                b, _ = lamination.flip_bounded(b, k)
            exact = exact and list(u.w) == w and list(b.w) == w
    return worst if exact else math.inf


def casimir_defect(inject=None):
    worst = 0
    for name in STOCK:
        g = fatgraph.stock(name)
        eps = poisson.wp_bivector(g).copy()
        if inject == "casimir":
            eps[0, 1] += 1
            eps[1, 0] -= 1
        worst = max(worst, poisson.casimir_defect(g, eps))
    return worst


def markov_golden():
    text = resources.files("fatcoords").joinpath("data/markov_tree.json").read_text()
    golden = json.loads(text)
    return markov.tree_rows(markov.markov_tree(golden["depth"])) == golden["rows"]


def phi_deviation(rng):
    worst = 0.0
    for hbar in (0.3, 1.0, 2.5):
        for _ in range(5):
            x = rng.uniform(-5, 5)
            worst = max(worst, abs(quantum.phi(x, hbar) - quantum.phi(-x, hbar) - x))
            worst = max(worst, abs(quantum.phi(x, hbar) - hbar * quantum.phi(x / hbar, 1 / hbar)))
    return worst


def ip_deviation(rng):
    """Shear flip after ip equals ip after the Penner flip."""
    worst = 0.0
    for name in STOCK:
        g = fatgraph.stock(name)
        for k in _flippable(g):
            p = teich.PennerCoords(g, [rng.uniform(-2, 2) for _ in range(g.n_edges)])
            left, _ = teich.flip_shear(teich.ip_shear(p), k)
            q, _ = teich.flip_penner(p, k)
            right = teich.ip_shear(q)
            worst = max(worst, float(np.abs(np.subtract(left.z, right.z)).max()))
    return worst


def roundtrip_ok(rng):
    g = fatgraph.stock("torus1")
    for _ in range(20):
        v = [rng.randint(0, 6) for _ in range(3)]
        b = lamination.BoundedLamCoords(g, v)
        if lamination.is_integral_bounded(b) and lamination.satisfies_triangle(b):
            if lamination.bounded_coords_of(lamination.reconstruct_bounded(b)) != b:
                return False
        u = lamination.UnboundedLamCoords(g, [rng.randint(-3, 3) for _ in range(3)])
        if lamination.unbounded_coords_of(lamination.reconstruct_unbounded(u)) != list(u.w):
            return False
    return True


def run_selftest(seed=0, inject=None):
    rng = random.Random(seed)
    items = []

    def add(name, value, ok):
        items.append({"name": name, "value": value, "pass": bool(ok)})

    dev = pentagon_deviation(rng)
    add("pentagon", dev, dev < 1e-10)
    dev = involution_deviation(rng)
    add("involutions", dev, dev < 1e-12)
    dev = casimir_defect(inject)
    add("casimirs", dev, dev == 0)
    add("markov_tree", None, markov_golden())
    dev = phi_deviation(rng)
    add("phi", dev, dev < 1e-7)
    dev = ip_deviation(rng)
    add("ip_intertwines_flips", dev, dev < 1e-10)
    add("lamination_roundtrip", None, roundtrip_ok(rng))
    return items
