"""Measured laminations in graph coordinates.

Bounded laminations are systems of closed curves (hole loops may carry
negative weight); the coordinate of an edge is the total weight crossing it.
Unbounded laminations may also contain arcs spiralling into holes; the
coordinate of an edge counts the arcs crossing it diagonally, with a sign.
All arithmetic here is exact (``fractions.Fraction``).
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .fatgraph import GraphError, flip, flip_quad, neighbor
from .fuchs import CurvePath, turn
from .teich import bracket_tropical, orientation_change_values


def _frac(v):
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


class LaminationError(ValueError):
    pass


class BoundedLamCoords:
    def __init__(self, graph, w):
        w = tuple(_frac(v) for v in w)
        if len(w) != graph.n_edges:
            raise GraphError(f"expected {graph.n_edges} coordinates, got {len(w)}")
        self.graph = graph
        self.w = w

    def __getitem__(self, edge):
        return self.w[self.graph.edge_index(edge)]

    def __eq__(self, other):
        return type(other) is type(self) and self.graph == other.graph and self.w == other.w

    def scaled(self, lam):
        return type(self)(self.graph, [lam * v for v in self.w])

    def __repr__(self):
        return f"BoundedLamCoords({[str(v) for v in self.w]})"


class UnboundedLamCoords:
    """Coordinates plus an orientation (+1 or -1) for every hole.

    The orientation of a hole the lamination does not reach is kept but has
    no effect.  By default it is the sign of the face sum (+1 if zero).
    """

    def __init__(self, graph, w, orientation=None):
        w = tuple(_frac(v) for v in w)
        if len(w) != graph.n_edges:
            raise GraphError(f"expected {graph.n_edges} coordinates, got {len(w)}")
        self.graph = graph
        self.w = w
        if orientation is None:
            orientation = [1 if s >= 0 else -1 for s in _face_sums(graph, w)]
        orientation = tuple(int(o) for o in orientation)
        if len(orientation) != graph.n_faces or any(o not in (1, -1) for o in orientation):
            raise GraphError("orientation must be +1 or -1 for every face")
        self.orientation = orientation

    def __getitem__(self, edge):
        return self.w[self.graph.edge_index(edge)]

    def __eq__(self, other):
        return (type(other) is type(self) and self.graph == other.graph
                and self.w == other.w and self.orientation == other.orientation)

    def scaled(self, lam):
        return UnboundedLamCoords(self.graph, [lam * v for v in self.w], self.orientation)

    def __repr__(self):
        return f"UnboundedLamCoords({[str(v) for v in self.w]}, {self.orientation})"


def _face_sums(g, w):
    return [sum((w[g.edge_of[i]] for i in orb), Fraction(0)) for orb in g.faces]


# -- flips -------------------------------------------------------------------------


def flip_bounded_values(g, w, edge):
    e, f, a, b, c, d = flip_quad(g, edge)
    k = g.edge_of[e]
    A, B, C, D = (w[g.edge_of[s]] for s in (a, b, c, d))
    out = list(w)
    out[k] = max(A + C, B + D) - w[k]
    return out


def flip_bounded(c, edge):
    """Flip an edge; the new diagonal gets max(A+C, B+D) - Z."""
    g = c.graph
    h, corr = flip(g, edge)
    return BoundedLamCoords(h, corr.transport(flip_bounded_values(g, c.w, edge))), corr


def flip_unbounded_values(g, w, edge):
    e, f, a, b, c, d = flip_quad(g, edge)
    k = g.edge_of[e]
    z = w[k]
    out = list(w)
    for s in (a, c):
        out[g.edge_of[s]] += max(z, 0)
    for s in (b, d):
        out[g.edge_of[s]] += min(z, 0)
    out[k] = -z
    return out


def flip_unbounded(c, edge):
    """Flip an edge: diagonal to -z, sides a, c gain max(z, 0), b, d gain min(z, 0).

    Sides are directed: when one edge fills two sides it gets both
    increments.  Faces keep their indices under a flip only up to relabelling,
    so orientations are carried by matching face boundaries.
    """
    g = c.graph
    h, corr = flip(g, edge)
    vals = corr.transport(flip_unbounded_values(g, c.w, edge))
    return UnboundedLamCoords(h, vals, _carry_orientation(g, h, c.orientation)), corr


def _carry_orientation(g, h, orientation):
    """Faces of a flipped graph correspond to the old ones through a shared end."""
    out = [1] * h.n_faces
    for fi, orb in enumerate(g.faces):
        # an end whose s2-image is unchanged by the flip identifies the face
        for i in orb:
            if g.s2[i] == h.s2[i]:
                out[h.face_of[i]] = orientation[fi]
                break
    return out


# -- integrality and normalization ----------------------------------------------------


def _vertex_triples(g, w):
    return [[w[g.edge_of[i]] for i in orb] for orb in g.vertices]


def is_integral_bounded(c):
    """Integer coordinates with even sum at every vertex."""
    if any(v.denominator != 1 for v in c.w):
        return False
    return all(sum(t) % 2 == 0 for t in _vertex_triples(c.graph, c.w))


def is_integral_unbounded(c):
    return all(v.denominator == 1 for v in c.w)


def satisfies_triangle(c):
    for t in _vertex_triples(c.graph, c.w):
        if len(t) != 3:
            raise GraphError("triangle condition needs a trivalent graph")
        x, y, z = t
        if not (abs(x - y) <= z <= x + y):
            return False
    return True


def normalize_bounded(c):
    """Smallest scale ``a`` then smallest shift ``b`` making ``a*c + b`` valid.

    Valid means integral, even at every vertex and satisfying the triangle
    inequalities.  The shift is realised by loops of weight ``b/2`` around
    every hole.
    """
    g = c.graph
    if not g.is_trivalent():
        raise GraphError("normalization needs a trivalent graph")
    a0 = lcm(*(v.denominator for v in c.w)) if c.w else 1
    for a in (a0, 2 * a0):
        w = [int(a * v) for v in c.w]
        parities = {sum(t) % 2 for t in _vertex_triples(g, w)}
        if len(parities) > 1:
            continue
        need = 0
        for x, y, z in _vertex_triples(g, w):
            for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
                need = max(need, r - p - q, abs(p - q) - r)
        b = need
        # every vertex sum shifts by 3b, so b must match the common parity
        if parities and (b - parities.pop()) % 2:
            b += 1
        return BoundedLamCoords(g, [v + b for v in w]), a, b
    raise AssertionError("doubling the scale always fixes parity")


# -- curve systems ----------------------------------------------------------------------


@dataclass
class Curve:
    """One component of a curve system.

    ``kind`` is ``"closed"``, ``"hole"`` or ``"arc"``.  Closed curves store a
    cyclic list of arrival ends; hole loops store the face; arcs store a
    finite stretch of arrival ends whose first and last few steps already
    spiral into ``faces[0]`` and ``faces[1]``.
    """
    kind: str
    weight: Fraction
    ends: tuple = ()
    face: int = -1
    faces: tuple = ()

    def path(self, g):
        return CurvePath(g, self.ends)


@dataclass
class CurveSystem:
    graph: object
    curves: list = field(default_factory=list)

    def __len__(self):
        return len(self.curves)

    def closed(self):
        return [c for c in self.curves if c.kind == "closed"]

    def arcs(self):
        return [c for c in self.curves if c.kind == "arc"]

    def holes(self):
        return [c for c in self.curves if c.kind == "hole"]


def _peripheral_face(g, ends):
    """Face bounded by a closed path that turns the same way everywhere."""
    turns = {turn(g, ends[i], ends[(i + 1) % len(ends)]) for i in range(len(ends))}
    if turns == {1}:
        return g.face_of[ends[0]]
    if turns == {-1}:
        return g.face_of[g.s1[ends[0]]]
    return None


def _canonical_cycle(ends):
    """Rotation-invariant key of a cyclic end list."""
    n = len(ends)
    return min(tuple(ends[k:] + ends[:k]) for k in range(n))


def reconstruct_bounded(c):
    """Curves realising valid integral bounded coordinates.

    ``z`` strands are drawn on every edge and joined at each vertex without
    crossings; the strand count in the corner between ends ``e`` and
    ``s0 e`` is ``(z_e + z_s0e - z_s0^-1e) / 2``.
    """
    g = c.graph
    if not is_integral_bounded(c) or not satisfies_triangle(c):
        raise LaminationError("coordinates must be integral, even at vertices and "
                              "satisfy the triangle inequalities")
    w = [int(v) for v in c.w]

    def corner(e):
        return (w[g.edge_of[e]] + w[g.edge_of[g.s0[e]]] - w[g.edge_of[g.s0inv[e]]]) // 2

    def step(e, j):
        # position j on end e counts from the side facing s0^-1 e
        z = w[g.edge_of[e]]
        n1 = corner(e)
        if j >= z - n1:
            k = z - 1 - j
            f = g.s0[e]
        else:
            k = j
            f = g.s0inv[e]
            k = w[g.edge_of[f]] - 1 - k
        # k is the position on the outgoing end f; crossing the edge mirrors it
        return g.s1[f], w[g.edge_of[f]] - 1 - k

    seen = set()
    found = {}
    for start in range(g.n_ends):
        for j in range(w[g.edge_of[start]]):
            if (start, j) in seen:
                continue
            ends = []
            state = (start, j)
            while state not in seen:
                seen.add(state)
                # the mirrored state on the same strand is the same strand
                e, p = state
                seen.add((g.s1[e], w[g.edge_of[e]] - 1 - p))
                ends.append(e)
                state = step(*state)
            if state != (start, j):
                raise AssertionError("strand tracing did not close up")
            key = _canonical_cycle(ends)
            found[key] = found.get(key, 0) + 1
    system = CurveSystem(g)
    holes = {}
    for key, mult in sorted(found.items()):
        face = _peripheral_face(g, list(key))
        if face is not None:
            holes[face] = holes.get(face, 0) + mult
        else:
            system.curves.append(Curve("closed", Fraction(mult), key))
    for face, mult in sorted(holes.items()):
        system.curves.append(Curve("hole", Fraction(mult), face=face))
    return system


def reconstruct_bounded_rational(c):
    """Curve system for arbitrary rational bounded coordinates.

    Normalizes, reconstructs, rescales weights by ``1/a`` and removes the
    added hole loops of weight ``b/2``.
    """
    g = c.graph
    norm, a, b = normalize_bounded(c)
    base = reconstruct_bounded(norm)
    system = CurveSystem(g)
    holes = {f: Fraction(-b, 2) for f in range(g.n_faces)}
    for cur in base.curves:
        if cur.kind == "hole":
            holes[cur.face] += cur.weight
        else:
            system.curves.append(Curve(cur.kind, cur.weight / a, cur.ends))
    for f in sorted(holes):
        if holes[f]:
            system.curves.append(Curve("hole", holes[f] / a, face=f))
    return system


def bounded_coords_of(system):
    """Total weight of the curves crossing each edge."""
    g = system.graph
    out = [Fraction(0)] * g.n_edges
    for cur in system.curves:
        if cur.kind == "hole":
            for k, m in enumerate(g.face_multiplicity(cur.face)):
                out[k] += m * cur.weight
        elif cur.kind == "closed":
            for e in cur.ends:
                out[g.edge_of[e]] += cur.weight
        else:
            raise LaminationError("arcs have no bounded coordinates")
    return BoundedLamCoords(g, out)


# -- unbounded reconstruction --------------------------------------------------------------


def _unbounded_step(g, w, e, j):
    """Next state of a strand in the infinite bundles.

    Positions ``j >= 0`` on end ``e`` join ``s0 e``; negative ones join
    ``s0^-1 e``.  Crossing edge ``f`` shifts the position by ``z_f``.
    """
    f = g.s0[e] if j >= 0 else g.s0inv[e]
    return g.s1[f], j + w[g.edge_of[f]]


def _spirals(g, w, e, j):
    """True if from state (e, j) the strand circles one face forever."""
    sign = j >= 0
    state = (e, j)
    for _ in range(len(g.faces[g.face_of[e]]) + len(g.faces[g.face_of[g.s1[e]]])):
        state = _unbounded_step(g, w, *state)
        if (state[1] >= 0) != sign:
            return False
        if state[0] == e:
            # one full turn: moving away from the split point means forever
            return (state[1] > j) if sign else (state[1] < j)
    return False


def _trace_until_spiral(g, w, state, extra=2):
    """Forward arrival ends from a state, stopping a few steps into the spiral."""
    ends = []
    tail = None
    while True:
        ends.append(state)
        if tail is None and _spirals(g, w, *state):
            tail = extra
        if tail is not None:
            if tail == 0:
                return ends
            tail -= 1
        state = _unbounded_step(g, w, *state)


def handed_pieces(g, w):
    """States (end, position) at which a diagonally crossing strand arrives."""
    out = []
    for k, (i, j) in enumerate(g.edges):
        z = w[k]
        # crossing from end j to end i: arrive at i; diagonal iff the sign flips
        for p in range(-abs(z) - 1, abs(z) + 1):
            arr = p + z
            if (p >= 0) != (arr >= 0):
                out.append((i, arr))
    return out


def reconstruct_unbounded(c):
    """Closed curves and spiralling arcs realising integral unbounded coordinates.

    Every edge carries a Z-indexed bundle of strands split at both ends;
    only the strands crossing some edge diagonally form components, the rest
    are peripheral and dropped.
    """
    g = c.graph
    if any(v.denominator != 1 for v in c.w):
        raise LaminationError("unbounded reconstruction needs integer coordinates")
    w = [int(v) for v in c.w]
    pieces = handed_pieces(g, w)
    done = set()
    system = CurveSystem(g)
    for piece in pieces:
        if piece in done:
            continue
        # forward from the arrival state
        fwd = [piece]
        state = _unbounded_step(g, w, *piece)
        closed = False
        while True:
            if state == piece:
                closed = True
                break
            if _spirals(g, w, *state):
                break
            fwd.append(state)
            state = _unbounded_step(g, w, *state)
        if closed:
            for s in fwd:
                done.add(s)
                done.add(_mirror(g, w, *s))
            ends = tuple(s[0] for s in fwd)
            system.curves.append(Curve("closed", Fraction(1), _canonical_cycle(list(ends))))
            continue
        back = _trace_until_spiral(g, w, _mirror(g, w, *piece))
        front = _trace_until_spiral(g, w, piece)
        states = [_mirror(g, w, *s) for s in reversed(back[1:])] + front
        for s in states:
            done.add(s)
            done.add(_mirror(g, w, *s))
        ends = [s[0] for s in states]
        start_face = _spiral_face(g, w, back[-1])
        end_face = _spiral_face(g, w, front[-1])
        system.curves.append(Curve("arc", Fraction(1), tuple(ends),
                                   faces=(start_face, end_face)))
    # identical closed curves are merged by weight
    merged = {}
    arcs = []
    for cur in system.curves:
        if cur.kind == "closed":
            merged[cur.ends] = merged.get(cur.ends, 0) + cur.weight
        else:
            arcs.append(cur)
    system.curves = [Curve("closed", wt, ends) for ends, wt in sorted(merged.items())] + arcs
    return system


def _mirror(g, w, e, j):
    """The same strand point seen from the other end of the edge of ``e``.

    Arriving at ``e`` at position ``j`` means having left ``s1 e``; the
    reversed strand arrives at ``s1 e``.
    """
    return g.s1[e], -j - 1 + w[g.edge_of[e]]


def _spiral_face(g, w, state):
    e, j = state
    return g.face_of[e] if j >= 0 else g.face_of[g.s1[e]]


def unbounded_coords_of(system):
    """Signed count of diagonal crossings, read off the turn sequences."""
    g = system.graph
    out = [Fraction(0)] * g.n_edges
    for cur in system.curves:
        ends = list(cur.ends)
        if cur.kind == "closed":
            n = len(ends)
            turns = [turn(g, ends[i], ends[(i + 1) % n]) for i in range(n)]
            for i in range(n):
                t_in, t_out = turns[i - 1], turns[i]
                out[g.edge_of[ends[i]]] += cur.weight * _handedness(t_in, t_out)
        elif cur.kind == "arc":
            turns = [turn(g, ends[i], ends[i + 1]) for i in range(len(ends) - 1)]
            for i in range(1, len(turns)):
                out[g.edge_of[ends[i]]] += cur.weight * _handedness(turns[i - 1], turns[i])
        elif cur.kind == "hole":
            pass
    return out


def _handedness(t_in, t_out):
    # right turn into the edge then left turn out of it counts positive
    if (t_in, t_out) == (-1, 1):
        return 1
    if (t_in, t_out) == (1, -1):
        return -1
    return 0


# -- coordinate maps ---------------------------------------------------------------------


def map_a(c):
    """Per face: half the max over its corners of -u_a + u_a(1) - u_a(4)."""
    g = c.graph
    out = []
    for f in range(g.n_faces):
        vals = [-c.w[g.edge_of[i]] + c.w[g.edge_of[g.s0[i]]] - c.w[g.edge_of[g.s0inv[i]]]
                for i in g.face_ends(f)]
        out.append(max(vals) / 2)
    return out


def map_lH(c):
    return _face_sums(c.graph, c.w)


def map_lh(c):
    return [abs(v) for v in map_lH(c)]


def map_ip(c):
    """The linear map z_a = u_a(1) + u_a(3) - u_a(2) - u_a(4)."""
    g = c.graph
    out = []
    for i, _ in g.edges:
        out.append(c.w[g.edge_of[neighbor(g, i, 1)]] + c.w[g.edge_of[neighbor(g, i, 3)]]
                   - c.w[g.edge_of[neighbor(g, i, 2)]] - c.w[g.edge_of[neighbor(g, i, 4)]])
    return UnboundedLamCoords(g, out)


def orientation_flip_tropical(c, face):
    """Reverse the orientation of one regular hole (max-plus bracket)."""
    g = c.graph
    vals = orientation_change_values(g, c.w, face, bracket_tropical)
    orient = list(c.orientation)
    orient[face] = -orient[face]
    return UnboundedLamCoords(g, vals, orient)


# -- positivity search ---------------------------------------------------------------------


def normalize_positive(c, max_steps=6):
    """Breadth-first search for flips and hole reversals making all z >= 0.

    Returns the coordinates reached and the script as a list of
    ``("flip", edge_name)`` / ``("orient", face_index)`` moves.
    """
    from .fatgraph import is_loop, is_regular_face

    if all(v >= 0 for v in c.w):
        return c, []
    queue = deque([(c, [])])
    seen = {(c.graph.s0, c.w)}
    while queue:
        cur, script = queue.popleft()
        if len(script) >= max_steps:
            continue
        g = cur.graph
        moves = []
        for k in range(g.n_edges):
            if not is_loop(g, k):
                moves.append(("flip", k))
        for f in range(g.n_faces):
            if is_regular_face(g, f):
                moves.append(("orient", f))
        for kind, arg in moves:
            try:
                if kind == "flip":
                    nxt, _ = flip_unbounded(cur, arg)
                    step = ("flip", g.edge_names[arg])
                else:
                    nxt = orientation_flip_tropical(cur, arg)
                    step = ("orient", arg)
            except GraphError:
                continue
            key = (nxt.graph.s0, nxt.w)
            if key in seen:
                continue
            seen.add(key)
            if all(v >= 0 for v in nxt.w):
                return nxt, script + [step]
            queue.append((nxt, script + [step]))
    raise LaminationError(f"no nonnegative coordinates within {max_steps} moves")
