"""Weil-Petersson Poisson structure in shear coordinates and its 2-form in Penner coordinates."""

import math

import numpy as np

from .fatgraph import GraphError, flip, flip_quad
from .fuchs import LaurentPoly


def _ee_matrix(g):
    if not g.is_trivalent():
        raise GraphError("the Poisson structure is defined for trivalent graphs")
    n = g.n_edges
    m = np.zeros((n, n), dtype=int)
    for i in range(g.n_ends):
        a, b = g.edge_of[i], g.edge_of[g.s0[i]]
        m[a, b] += 1
        m[b, a] -= 1
    return m


def wp_bivector(g):
    """Sum over directed edges of d/dz_a ^ d/dz_a(1); entry [a, b] is {z_a, z_b}."""
    return _ee_matrix(g)


def wp_form(g):
    """Sum over directed edges of du_a ^ du_a(1), as an antisymmetric matrix."""
    return _ee_matrix(g)


def face_vectors(g):
    """Face sums as integer vectors (edges counted with multiplicity)."""
    return np.array([g.face_multiplicity(f) for f in range(g.n_faces)], dtype=int)


def casimir_defect(g, eps=None):
    """Largest |eps . v| over face vectors v; zero means every face sum is central."""
    eps = wp_bivector(g) if eps is None else np.asarray(eps)
    return int(np.abs(face_vectors(g) @ eps).max()) if g.n_faces else 0


def bracket(g, f1, f2, eps=None):
    """Poisson bracket sum eps[a, b] df1/dz_a df2/dz_b.

    Arguments are either Laurent polynomials in t_a = exp(z_a / 2) (the result
    is again one) or linear functionals given as coefficient vectors (the
    result is a number).
    """
    eps = wp_bivector(g) if eps is None else np.asarray(eps)
    n = g.n_edges
    if isinstance(f1, LaurentPoly) and isinstance(f2, LaurentPoly):
        if f1.nvars != n or f2.nvars != n:
            raise GraphError("polynomials must have one variable per edge")
        out = LaurentPoly(n)
        d1 = [f1.diff(a) for a in range(n)]
        d2 = [f2.diff(b) for b in range(n)]
        for a in range(n):
            for b in range(n):
                if eps[a, b]:
                    # each diff carries a factor 2
                    out = out + (d1[a] * d2[b]) * _quarter(int(eps[a, b]))
        return out
    v1, v2 = np.asarray(f1, dtype=float), np.asarray(f2, dtype=float)
    if v1.shape != (n,) or v2.shape != (n,):
        raise GraphError("linear functionals need one coefficient per edge")
    return float(v1 @ eps @ v2)


def _quarter(k):
    from fractions import Fraction
    return Fraction(k, 4)


def bracket_numeric(g, f1, f2, z, h=1e-5, eps=None):
    """Bracket of two functions of the coordinates by central differences."""
    eps = wp_bivector(g) if eps is None else np.asarray(eps)
    z = np.asarray(z, dtype=float)

    def grad(f):
        out = np.zeros(len(z))
        for k in range(len(z)):
            dz = np.zeros(len(z))
            dz[k] = h
            out[k] = (f(z + dz) - f(z - dz)) / (2 * h)
        return out

    return float(grad(f1) @ eps @ grad(f2))


def _sigmoid(x):
    if x >= 0:
        return 1 / (1 + math.exp(-x))
    e = math.exp(x)
    return e / (1 + e)


def flip_jacobian(g, z, edge):
    """Jacobian of the shear flip, in the old graph's edge indices."""
    e, f, a, b, c, d = flip_quad(g, edge)
    k = g.edge_of[e]
    n = g.n_edges
    jac = np.eye(n)
    zk = z[k]
    # d/dz log(1 + e^z) = sigmoid(z), d/dz -log(1 + e^-z) = sigmoid(-z)
    for s in (a, c):
        jac[g.edge_of[s], k] += _sigmoid(zk)
    for s in (b, d):
        jac[g.edge_of[s], k] += _sigmoid(-zk)
    jac[k, k] = -1.0
    return jac


def flip_invariance_check(g, edge, points):
    """max |J eps J^T - eps'| over sample points, eps' read on the flipped graph."""
    h, corr = flip(g, edge)
    eps = wp_bivector(g)
    eps_new = wp_bivector(h)
    perm = [corr(i) for i in range(g.n_edges)]
    # express the new bivector in old indices
    eps_back = eps_new[np.ix_(perm, perm)]
    worst = 0.0
    for z in points:
        jac = flip_jacobian(g, z, edge)
        dev = np.abs(jac @ eps @ jac.T - eps_back).max()
        worst = max(worst, float(dev))
    return worst
