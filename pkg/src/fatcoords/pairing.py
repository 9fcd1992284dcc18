"""Length and intersection pairings between laminations and hyperbolic structures."""

import math
from fractions import Fraction

from .fatgraph import GraphError
from .fuchs import geodesic_length, path_monodromy, tropical_path_length
from .lamination import (BoundedLamCoords, UnboundedLamCoords, flip_unbounded,
                         reconstruct_bounded_rational)
from .teich import PennerCoords, ShearCoords, flip_penner, lH_shear


def _check_same_graph(a, b):
    if a.graph != b.graph:
        raise GraphError("arguments live on different graphs")


def length_TL(c, f):
    """Weighted length of the geodesic representatives of a bounded lamination.

    Hole loops contribute their weight (possibly negative) times the length
    of the hole, the absolute face sum.
    """
    _check_same_graph(c, f)
    g = c.graph
    system = reconstruct_bounded_rational(f)
    holes = None
    total = 0.0
    for cur in system.curves:
        if cur.kind == "hole":
            holes = holes or lH_shear(c)
            total += float(cur.weight) * abs(holes[cur.face])
        else:
            total += float(cur.weight) * geodesic_length(path_monodromy(g, c.z, cur.ends))
    return total


def _require_nonnegative(z):
    if any(v < 0 for v in z.w):
        raise GraphError("the formula needs nonnegative unbounded coordinates")


def length_LT(z, u):
    """Sum of z_a u_a for nonnegative unbounded coordinates z."""
    _check_same_graph(z, u)
    _require_nonnegative(z)
    return float(sum(float(a) * b for a, b in zip(z.w, u.u)))


def intersection_LL(z, v, allow_negative=False):
    """Intersection index of an unbounded and a bounded lamination.

    For nonnegative z this is sum z_a v_a.  With ``allow_negative`` other z
    are handled through the asymptotic formula instead: each curve of v
    contributes its weight times the max-plus growth rate of its trace at z,
    and each hole loop its weight times the absolute face sum.  The two agree
    whenever z >= 0.
    """
    _check_same_graph(z, v)
    if all(a >= 0 for a in z.w):
        return sum((a * b for a, b in zip(z.w, v.w)), Fraction(0))
    if not allow_negative:
        _require_nonnegative(z)
    return tropical_intersection(z, v)


def tropical_intersection(z, v):
    g = z.graph
    total = Fraction(0)
    sums = None
    for cur in reconstruct_bounded_rational(v).curves:
        if cur.kind == "hole":
            if sums is None:
                sums = [sum((z.w[g.edge_of[i]] for i in orb), Fraction(0)) for orb in g.faces]
            total += cur.weight * abs(sums[cur.face])
        else:
            total += cur.weight * tropical_path_length(g, z.w, cur.ends)
    return total


def convexity_check(c, f1, f2):
    """Lengths of f1, f2 and of the lamination with summed coordinates.

    The length function is convex: l(f1) + l(f2) >= l(f1 + f2); the margin is
    the difference.
    """
    _check_same_graph(f1, f2)
    l1 = length_TL(c, f1)
    l2 = length_TL(c, f2)
    l12 = length_TL(c, BoundedLamCoords(f1.graph, [a + b for a, b in zip(f1.w, f2.w)]))
    return {"l1": l1, "l2": l2, "l12": l12, "margin": l1 + l2 - l12}


def asymptotic_check(kind, a, b, grid=(4, 8, 16, 32)):
    """Table of (C, value(C)/C, limit, |difference|) over the grid.

    ``kind`` "TL": a are shear coordinates read as an unbounded lamination,
    b a bounded lamination; value is length_TL(C a, b).
    ``kind`` "LT": a is an unbounded lamination, b Penner coordinates read as
    a bounded lamination; value is length_LT(a, C b).
    The limit is the intersection index in both cases.
    """
    rows = []
    if kind == "TL":
        z = UnboundedLamCoords(a.graph, [Fraction(x).limit_denominator(10**9) for x in a.z])
        limit = float(intersection_LL(z, b, allow_negative=True))
        for C in grid:
            val = length_TL(ShearCoords(a.graph, [C * x for x in a.z]), b) / C
            rows.append((C, val, limit, abs(val - limit)))
    elif kind == "LT":
        v = BoundedLamCoords(b.graph, [Fraction(x).limit_denominator(10**9) for x in b.u])
        limit = float(intersection_LL(a, v))
        for C in grid:
            val = length_LT(a, PennerCoords(b.graph, [C * x for x in b.u])) / C
            rows.append((C, val, limit, abs(val - limit)))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return rows


def shrinks(rows, threshold=0):
    """Errors are non-increasing from row ``threshold`` on."""
    errs = [r[3] for r in rows[threshold:]]
    return all(b <= a + 1e-15 for a, b in zip(errs, errs[1:]))


def flip_both_LT(z, u, edge):
    """Transport both arguments of the decorated length through one flip."""
    z2, _ = flip_unbounded(z, edge)
    u2, _ = flip_penner(u, edge)
    return z2, u2


# -- the punctured torus -------------------------------------------------------------


def torus_curve_coords(r):
    """Coordinates (n1, n2, n3) of the simple curve of slope p/q on the torus graph.

    One of the numbers is the sum of the other two; the slope is -n2/n1 when
    n3 = n1 + n2 and n2/n1 otherwise.
    """
    if isinstance(r, tuple):
        p, q = r
    else:
        fr = Fraction(r)
        p, q = fr.numerator, fr.denominator
    if q < 0:
        p, q = -p, -q
    if math.gcd(p, q) != 1:
        raise ValueError("slope must be in lowest terms")
    if q == 0:
        return (0, 1, 1)
    if p < 0:
        return (q, -p, q - p)
    return (q, p, abs(q - p))


def torus_slope(n):
    """Inverse of torus_curve_coords."""
    n1, n2, n3 = n
    if n3 == n1 + n2:
        return (-n2, n1)
    if n1 == n2 + n3 or n2 == n3 + n1:
        return (n2, n1)
    raise ValueError("one coordinate must be the sum of the other two")
