"""Markov triples from the punctured torus.

Third-traces of the three simple curves crossing two edges of the torus graph
satisfy the Markov equation up to a term vanishing at punctures; flips act on
them by Vieta moves.  Rationals index the faces of the Farey tree.
"""

import math
from fractions import Fraction

from .fatgraph import stock
from .fuchs import path_monodromy
from .lamination import BoundedLamCoords, reconstruct_bounded


def _third_trace(a, b):
    try:
        return (math.exp((a + b) / 2) + math.exp((a - b) / 2) + math.exp((-a - b) / 2)) / 3
    except OverflowError:
        raise ValueError("coordinates too large for double precision") from None


def markov_traces(x, y, z):
    """(X, Y, Z): third-traces of the curves crossing (y, z), (z, x) and (x, y)."""
    return _third_trace(y, z), _third_trace(z, x), _third_trace(x, y)


def markov_residual(x, y, z):
    """X^2 + Y^2 + Z^2 - 3XYZ, which equals -(e^{s/2} - e^{-s/2})^2 / 9 for s = x+y+z."""
    X, Y, Z = markov_traces(x, y, z)
    return X * X + Y * Y + Z * Z - 3 * X * Y * Z


def markov_residual_closed_form(x, y, z):
    s = x + y + z
    return -((math.exp(s / 2) - math.exp(-s / 2)) ** 2) / 9


def is_markov(t):
    x, y, z = t
    return x * x + y * y + z * z == 3 * x * y * z


def markov_move(t):
    """(Z, X, Y) -> (Y, 3YZ - X, Z)."""
    z, x, y = t
    return (y, 3 * y * z - x, z)


def rotate(t):
    a, b, c = t
    return (b, c, a)


def vieta(t, k):
    """Replace entry k by the other root of the Markov equation."""
    t = list(t)
    i, j = [m for m in range(3) if m != k]
    t[k] = 3 * t[i] * t[j] - t[k]
    return tuple(t)


# -- the tree ------------------------------------------------------------------------


class TreeNode:
    """A face of the Farey tree: the new Markov number at a mediant.

    ``left`` and ``right`` are the numbers on the neighbouring faces ``lo``
    and ``hi`` whose mediant is ``rational``.
    """

    def __init__(self, label, rational, left, right, lo, hi, depth):
        self.label = label
        self.rational = rational
        self.left = left
        self.right = right
        self.lo = lo
        self.hi = hi
        self.depth = depth
        self.children = []

    def triple(self):
        return (self.left, self.right, self.label)

    def to_json(self):
        return {"label": self.label, "rational": _ratstr(self.rational),
                "triple": [self.left, self.right, self.label],
                "children": [c.to_json() for c in self.children]}


def _ratstr(r):
    p, q = r
    return f"{p}/{q}"


def _mediant(a, b):
    return (a[0] + b[0], a[1] + b[1])


def markov_tree(depth):
    """Markov tree down to ``depth`` in the layout of the classical figure.

    Depth 0 is the triple (1, 1, 1) on the faces 0, 1, infinity (label 1 on
    infinity); depth 1 the face 1/2 with label 2.  From depth 2 the tree is
    binary: the face at the mediant of ``lo`` and ``hi`` has children at the
    mediants of (lo, m) and (m, hi), drawn left and right.  At depth 2 both
    candidates give the triple (1, 2, 5); the right one (2/3) is kept.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    root = TreeNode(1, (1, 0), 1, 1, (0, 1), (1, 1), 0)
    if depth == 0:
        return root
    half = TreeNode(2, (1, 2), 1, 1, (0, 1), (1, 1), 1)
    root.children = [half]
    if depth == 1:
        return root
    # interval (1/2, 1): left face 2, right face 1, opposite face 0 with value 1
    first = TreeNode(5, (2, 3), 2, 1, (1, 2), (1, 1), 2)
    half.children = [first]
    stack = [first]
    while stack:
        node = stack.pop()
        if node.depth >= depth:
            continue
        m = node.rational
        # left child sits between lo and m; the face opposite it is hi
        lc = TreeNode(3 * node.left * node.label - node.right, _mediant(node.lo, m),
                      node.left, node.label, node.lo, m, node.depth + 1)
        rc = TreeNode(3 * node.label * node.right - node.left, _mediant(m, node.hi),
                      node.label, node.right, m, node.hi, node.depth + 1)
        node.children = [lc, rc]
        stack.extend([lc, rc])
    return root


def tree_rows(root):
    """Labels level by level, left to right."""
    rows = []
    level = [root]
    while level:
        rows.append([n.label for n in level])
        level = [c for n in level for c in n.children]
    return rows


def tree_nodes(root):
    out = [root]
    for c in root.children:
        out.extend(tree_nodes(c))
    return out


def tree_to_dot(root):
    lines = ["graph markov {"]
    for n in tree_nodes(root):
        lines.append(f'  "{_ratstr(n.rational)}" [label="{n.label}"];')
        for c in n.children:
            lines.append(f'  "{_ratstr(n.rational)}" -- "{_ratstr(c.rational)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- rational indexing ---------------------------------------------------------------------


def _parse_rational(r):
    if isinstance(r, tuple):
        p, q = r
    elif isinstance(r, str) and r.strip() in ("inf", "1/0", "oo"):
        return (1, 0)
    else:
        if isinstance(r, str) and "/" in r:
            p, q = (int(s) for s in r.split("/"))
        else:
            f = Fraction(r)
            p, q = f.numerator, f.denominator
    if q < 0:
        p, q = -p, -q
    if math.gcd(p, q) != 1:
        raise ValueError(f"{p}/{q} is not in lowest terms")
    if q == 0:
        return (1, 0)
    return (p, q)


def _less(a, b):
    """a < b for rationals as (p, q) with q >= 0 (q = 0 means +-infinity)."""
    return a[0] * b[1] < b[0] * a[1]


def markov_of_rational(r):
    """Markov number on the Farey face p/q, with M(0) = M(1) = M(inf) = 1.

    Walks down the Farey tessellation from the triangle (0, 1, inf); each
    new face gets 3 M(left) M(right) - M(opposite).
    """
    x = _parse_rational(r)
    if x in ((0, 1), (1, 1), (1, 0)):
        return 1
    if x[1] and _less((0, 1), x) and _less(x, (1, 1)):
        lo, hi, opp = (0, 1), (1, 1), (1, 0)
    elif x[1] and _less((1, 1), x):
        lo, hi, opp = (1, 1), (1, 0), (0, 1)
    else:
        lo, hi, opp = (-1, 0), (0, 1), (1, 1)
    ml, mh, mo = 1, 1, 1
    while True:
        m = _mediant(lo, hi)
        mm = 3 * ml * mh - mo
        if m == x:
            return mm
        if _less(x, m):
            hi, opp, mh, mo = m, hi, mm, mh
        else:
            lo, opp, ml, mo = m, lo, mm, ml


def psi(r):
    """(1/q) arccosh(3 M(p/q) / 2)."""
    p, q = _parse_rational(r)
    if q == 0:
        raise ValueError("psi is defined on finite rationals")
    m = markov_of_rational((p, q))
    if m < 10**12:
        return math.acosh(1.5 * m) / q
    # arccosh(y) = log(2y) + log((1 + sqrt(1 - 1/y^2)) / 2); the last term is tiny
    y = 1.5 * float(m) if m < 10**300 else math.inf
    tail = math.log((1 + math.sqrt(1 - 1 / (y * y))) / 2) if y != math.inf else 0.0
    return (math.log(3) + math.log(m) + tail) / q


# -- decorated version -------------------------------------------------------------------


def horocycle_area(t):
    u, v, w = t
    return (u * u + v * v + w * w) / (u * v * w)


def decorated_move(t):
    """(U, V, W) -> (W, (U^2 + W^2) / V, U)."""
    u, v, w = t
    return (w, (u * u + w * w) / v, u)


def decorated_orbit(start, moves):
    """Triples visited by a word of "flip" and "rotate" moves."""
    t = tuple(Fraction(v) if isinstance(v, (int, Fraction)) else float(v) for v in start)
    if any(v <= 0 for v in t):
        raise ValueError("decorated coordinates must be positive")
    out = [t]
    for mv in moves:
        if mv == "flip":
            t = decorated_move(t)
        elif mv == "rotate":
            t = rotate(t)
        else:
            raise ValueError(f"unknown move {mv!r}")
        out.append(t)
    return out


# -- traces of transported curves ------------------------------------------------------------


def avoiding_curve(g, k):
    """Curve crossing every edge of a torus graph except edge k, once each."""
    w = [1] * g.n_edges
    w[k] = 0
    (cur,) = reconstruct_bounded(BoundedLamCoords(g, w)).curves
    return cur.ends


def torus_third_traces(c):
    """Third-traces of the curves avoiding each edge, in edge order."""
    g = c.graph
    if g.n_edges != 3:
        raise ValueError("needs a one-holed torus graph")
    return [path_monodromy(g, c.z, avoiding_curve(g, k)).abs_trace() / 3 for k in range(3)]


def flip_orbit(word, start=(1, 1, 1)):
    """Exact triples indexed by edge after flipping the edges in ``word``."""
    t = tuple(start)
    out = [t]
    for k in word:
        t = vieta(t, k)
        out.append(t)
    return out


def trace_flip_mismatches(word, z0=(0.0, 0.0, 0.0)):
    """Flip the torus graph along ``word`` and compare rounded traces with the exact orbit."""
    from .teich import ShearCoords, flip_shear

    c = ShearCoords(stock("torus1"), z0)
    orbit = flip_orbit(word)
    bad = 0
    rows = []
    for step, k in enumerate([None] + list(word)):
        if k is not None:
            c, _ = flip_shear(c, k)
        got = torus_third_traces(c)
        rounded = [round(v) for v in got]
        rows.append((rounded, list(orbit[step])))
        if rounded != list(orbit[step]):
            bad += 1
    return bad, rows


def figure_rows():
    """The numbers printed in the classical tree figure, row by row."""
    import json
    from importlib import resources

    text = resources.files("fatcoords").joinpath("data/markov_figure.json").read_text()
    return json.loads(text)["rows"]


def markov_numbers_up_to(bound):
    """All Markov numbers <= bound, by exhaustive Vieta descent from (1, 1, 1).

    Every Markov triple other than (1,1,1) and (1,1,2) has a unique parent with
    a smaller maximum, so walking up the tree and pruning at ``bound`` finds
    them all.
    """
    seen = set()
    out = set()
    stack = [(1, 1, 1)]
    while stack:
        t = stack.pop()
        key = tuple(sorted(t))
        if key in seen or max(t) > bound:
            continue
        seen.add(key)
        out.update(t)
        for k in range(3):
            stack.append(vieta(t, k))
    return sorted(out)
