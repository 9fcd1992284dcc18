"""Fuchsian monodromy of shear coordinates along closed paths.

A closed path is a cyclic list of ends, each being the end at which the path
arrives at a vertex.  Between two consecutive ends the path turns at the
vertex: leaving through ``s0`` of the arrival end is a left turn and costs
the matrix ``I``; leaving through ``s0^-1`` is a right turn and costs ``I^-1``.
Each traversed edge contributes ``A(z)``.
"""

import math
from fractions import Fraction

import numpy as np

from .fatgraph import GraphError


class PathError(GraphError):
    pass


class MobiusElement:
    """Element of PSL(2, R) stored as a determinant-one matrix."""

    def __init__(self, m):
        m = np.asarray(m, dtype=float)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if det <= 0:
            raise ValueError("matrix must have positive determinant")
        self.m = m / math.sqrt(det)

    @classmethod
    def unimodular(cls, m):
        """Wrap a matrix already known to have determinant one."""
        out = cls.__new__(cls)
        out.m = np.asarray(m, dtype=float)
        return out

    def __matmul__(self, other):
        return MobiusElement.unimodular(self.m @ other.m)

    def inverse(self):
        a, b, c, d = self.m.ravel()
        return MobiusElement([[d, -b], [-c, a]])

    def trace(self):
        return float(self.m[0, 0] + self.m[1, 1])

    def abs_trace(self):
        return abs(self.trace())

    def equals(self, other, tol=1e-12):
        return (np.allclose(self.m, other.m, atol=tol)
                or np.allclose(self.m, -other.m, atol=tol))

    def __repr__(self):
        return f"MobiusElement({self.m.tolist()})"


def edge_matrix(z):
    h = math.exp(z / 2)
    return MobiusElement([[0.0, h], [-1.0 / h, 0.0]])


def turn_matrix():
    return MobiusElement([[1.0, 1.0], [-1.0, 0.0]])


IDENTITY = MobiusElement(np.eye(2))


class CurvePath:
    """Closed reduced path on a fat graph given by its arrival ends."""

    def __init__(self, g, ends):
        ends = tuple(g.end_index(e) for e in ends)
        self.graph = g
        self.ends = ends
        self.turns = tuple(turn(g, ends[i], ends[(i + 1) % len(ends)])
                           for i in range(len(ends)))

    def __len__(self):
        return len(self.ends)

    def names(self):
        return [self.graph.ee[i] for i in self.ends]

    def edges(self):
        return [self.graph.edge_of[i] for i in self.ends]

    def rotated(self, k):
        k %= max(len(self.ends), 1)
        return CurvePath(self.graph, self.ends[k:] + self.ends[:k])

    def reversed(self):
        g = self.graph
        return CurvePath(g, [g.s1[i] for i in reversed(self.ends)])

    def edge_counts(self):
        counts = [0] * self.graph.n_edges
        for i in self.ends:
            counts[self.graph.edge_of[i]] += 1
        return counts

    def __repr__(self):
        return f"CurvePath({self.names()})"


def turn(g, arrive, nxt):
    """+1 for a left turn, -1 for a right turn between consecutive ends."""
    out = g.s1[nxt]
    if len(g.vertices[g.vertex_of[arrive]]) != 3:
        raise PathError("paths are supported on trivalent vertices only")
    if out == g.s0[arrive]:
        return 1
    if out == g.s0inv[arrive]:
        return -1
    if out == arrive:
        raise PathError("path backtracks along an edge")
    raise PathError(f"ends {g.ee[arrive]!r} and {g.ee[nxt]!r} are not consecutive")


def face_path(g, face):
    """Boundary of a face, turning left at every vertex."""
    return CurvePath(g, list(reversed(g.faces[face])))


def path_monodromy(g, z, path):
    """Product of edge and turn matrices along a closed path."""
    if not isinstance(path, CurvePath):
        path = CurvePath(g, path)
    if not path.ends:
        return IDENTITY
    turn_l = turn_matrix()
    turn_r = turn_l.inverse()
    m = np.eye(2)
    for i, t in zip(path.ends, path.turns):
        m = m @ edge_matrix(z[g.edge_of[i]]).m @ (turn_l.m if t > 0 else turn_r.m)
    # every factor has determinant one; renormalizing would lose precision
    return MobiusElement.unimodular(m)


def geodesic_length(m):
    """Length of the closed geodesic of a hyperbolic or parabolic element."""
    t = m.abs_trace() if isinstance(m, MobiusElement) else abs(float(m))
    if t < 2:
        if t > 2 - 1e-12:
            return 0.0
        raise ValueError(f"elliptic element (|trace| = {t})")
    return 2 * math.acosh(t / 2)


def boundary_monodromy(g, z, face):
    return path_monodromy(g, z, face_path(g, face))


# -- symbolic traces ---------------------------------------------------------------


class LaurentPoly:
    """Laurent polynomial in t_k = exp(z_k / 2) with exact coefficients.

    Terms map exponent tuples (powers of each t_k, i.e. doubled exponents of
    exp(z_k)) to coefficients.  Traces have integer coefficients; Poisson
    brackets of traces may have rational ones.
    """

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        acc = {}
        for mono, c in (terms or {}).items():
            if c:
                acc[tuple(mono)] = acc.get(tuple(mono), 0) + Fraction(c)
        self.terms = {k: (int(v) if v.denominator == 1 else v)
                      for k, v in acc.items() if v}

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, k, power=1):
        mono = [0] * nvars
        mono[k] = power
        return cls(nvars, {tuple(mono): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return LaurentPoly(self.nvars, out)

    def __neg__(self):
        return LaurentPoly(self.nvars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly(self.nvars, {k: v * other for k, v in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                out[mono] = out.get(mono, 0) + c1 * c2
        return LaurentPoly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __call__(self, z):
        """Evaluate at real coordinates z (so t_k = exp(z_k / 2))."""
        return sum(float(c) * math.exp(sum(e * zk for e, zk in zip(mono, z)) / 2)
                   for mono, c in self.terms.items())

    def diff(self, k):
        """Derivative in z_k, returned with a factor 2 (exponents are doubled).

        d/dz_k of t^m is (m/2) t^m; callers divide by 2 where needed.
        """
        return LaurentPoly(self.nvars, {m: c * m[k] for m, c in self.terms.items()})

    def support(self):
        return {k for mono in self.terms for k, e in enumerate(mono) if e}

    def __repr__(self):
        parts = []
        for mono, c in sorted(self.terms.items()):
            fac = "*".join(f"t{k}^{e}" for k, e in enumerate(mono) if e)
            parts.append(f"{c}" + (f"*{fac}" if fac else ""))
        return " + ".join(parts) or "0"


def trace_polynomial(g, path):
    """Symbolic |trace| of the monodromy of a path using each edge at most once."""
    if not isinstance(path, CurvePath):
        path = CurvePath(g, path)
    edges = path.edges()
    if len(set(edges)) != len(edges):
        raise PathError("trace polynomials need a path visiting each edge once")
    return trace_laurent(g, path)


def trace_laurent(g, path):
    """Symbolic trace of any closed path, sign-normalized (no positivity claim)."""
    if not isinstance(path, CurvePath):
        path = CurvePath(g, path)
    edges = path.edges()
    n = g.n_edges
    one, zero = LaurentPoly.const(n, 1), LaurentPoly(n)
    m = [[one, zero], [zero, one]]

    def mul(p, q):
        return [[p[0][0] * q[0][0] + p[0][1] * q[1][0], p[0][0] * q[0][1] + p[0][1] * q[1][1]],
                [p[1][0] * q[0][0] + p[1][1] * q[1][0], p[1][0] * q[0][1] + p[1][1] * q[1][1]]]

    left = [[one, one], [-one, zero]]
    right = [[zero, -one], [one, one]]
    for k, t in zip(edges, path.turns):
        a = [[zero, LaurentPoly.var(n, k)], [-LaurentPoly.var(n, k, -1), zero]]
        m = mul(mul(m, a), left if t > 0 else right)
    tr = m[0][0] + m[1][1]
    if tr.terms and sum(tr.terms.values()) < 0:
        tr = -tr
    return tr


def tropical_path_length(g, z, path):
    """Large-C limit of the geodesic length at C*z divided by C, exactly.

    Edge-then-turn step matrices are, up to sign, nonnegative:
    A(z) I = -[[h, 0], [1/h, 1/h]] and A(z) I^-1 = [[h, h], [0, 1/h]] with
    h = e^{z/2}.  So the trace has no cancellations and its growth rate is
    the max-plus trace of the exponent matrices; the length is twice that.
    """
    if not isinstance(path, CurvePath):
        path = CurvePath(g, path)
    neg = None
    m = [[0, neg], [neg, 0]]
    for k, t in zip(path.edges(), path.turns):
        h = Fraction(z[k]) / 2
        step = [[h, neg], [-h, -h]] if t > 0 else [[h, h], [neg, -h]]
        m = [[_maxplus(m[i][0], step[0][j], m[i][1], step[1][j]) for j in range(2)]
             for i in range(2)]
    diag = [v for v in (m[0][0], m[1][1]) if v is not None]
    return 2 * max(diag)


def _maxplus(a, b, c, d):
    vals = [x + y for x, y in ((a, b), (c, d)) if x is not None and y is not None]
    return max(vals) if vals else None


def tropical_length(poly, z):
    """Large-C limit of the geodesic length at C*z divided by C: max of m . z.

    Exponents are doubled, so the trace grows like exp(C max(m . z) / 2) and
    the length like C max(m . z).  Exact on rationals when coefficients are
    positive.
    """
    return max(sum(a * b for a, b in zip(m, z)) for m in poly.terms)
