"""Shear coordinates (holed surfaces) and Penner coordinates (decorated surfaces)."""

import math

import numpy as np

from .fatgraph import GraphError, flip, flip_quad, is_regular_face, neighbor


def _logsumexp(xs):
    m = max(xs)
    return m + math.log(sum(math.exp(x - m) for x in xs))


def log1pexp(x):
    """log(1 + e^x) without overflow."""
    if x > 0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


class ShearCoords:
    """Real numbers on the edges of a graph; hole orientations are the signs
    of the face sums (zero sum means a puncture)."""

    def __init__(self, graph, z):
        z = tuple(float(v) for v in z)
        if len(z) != graph.n_edges:
            raise GraphError(f"expected {graph.n_edges} coordinates, got {len(z)}")
        self.graph = graph
        self.z = z

    def __getitem__(self, edge):
        return self.z[self.graph.edge_index(edge)]

    def as_array(self):
        return np.array(self.z)

    def orientations(self):
        return [int(np.sign(s)) for s in lH_shear(self)]

    def __repr__(self):
        return f"ShearCoords({dict(zip(self.graph.edge_names, self.z))})"


class PennerCoords:
    """Signed horocycle-truncated lengths on the edges of a graph."""

    def __init__(self, graph, u):
        u = tuple(float(v) for v in u)
        if len(u) != graph.n_edges:
            raise GraphError(f"expected {graph.n_edges} coordinates, got {len(u)}")
        self.graph = graph
        self.u = u

    def __getitem__(self, edge):
        return self.u[self.graph.edge_index(edge)]

    def as_array(self):
        return np.array(self.u)

    def __repr__(self):
        return f"PennerCoords({dict(zip(self.graph.edge_names, self.u))})"


def shear_flip_values(g, z, edge):
    """New values after a flip, on the same edge indices."""
    e, f, a, b, c, d = flip_quad(g, edge)
    k = g.edge_of[e]
    zk = z[k]
    up, down = log1pexp(zk), log1pexp(-zk)
    out = list(z)
    for side in (a, c):
        out[g.edge_of[side]] += up
    for side in (b, d):
        out[g.edge_of[side]] -= down
    out[k] = -zk
    return out


def flip_shear(c, edge):
    """Flip an edge; returns new coordinates and the edge correspondence."""
    g = c.graph
    h, corr = flip(g, edge)
    return ShearCoords(h, corr.transport(shear_flip_values(g, c.z, edge))), corr


def penner_flip_values(g, u, edge):
    e, f, a, b, c, d = flip_quad(g, edge)
    k = g.edge_of[e]
    A, B, C, D = (u[g.edge_of[s]] for s in (a, b, c, d))
    out = list(u)
    out[k] = _logsumexp([A + C, B + D]) - u[k]
    return out


def flip_penner(c, edge):
    g = c.graph
    h, corr = flip(g, edge)
    return PennerCoords(h, corr.transport(penner_flip_values(g, c.u, edge))), corr


def bracket_log(xs):
    """log of the sum over j = 0..n of exp((x_1+..+x_j - x_{j+1}-..-x_n)/2)."""
    xs = [float(x) for x in xs]
    if not xs:
        raise ValueError("bracket needs at least one argument")
    total = sum(xs)
    exps = [-total / 2]
    acc = -total / 2
    for x in xs:
        acc += x
        exps.append(acc)
    return _logsumexp(exps)


def bracket_tropical(xs):
    """Half the maximum of the alternating partial sums; exact on Fractions."""
    xs = list(xs)
    if not xs:
        raise ValueError("bracket needs at least one argument")
    total = sum(xs)
    acc = -total
    best = acc
    for x in xs:
        acc += 2 * x
        best = max(best, acc)
    return best / 2


def orientation_change_values(g, z, face, bracket):
    """Coordinates after reversing the orientation of a regular hole.

    ``bracket`` is ``bracket_log`` for shear coordinates or
    ``bracket_tropical`` for laminations.  Face edges ``a_0..a_n`` are read
    along the counterclockwise boundary of the face.
    """
    if not is_regular_face(g, face):
        raise GraphError("orientation change is implemented for regular faces only")
    ends = g.face_ends(face)
    n1 = len(ends)
    w = [z[g.edge_of[i]] for i in ends]
    out = list(z)
    # face edges
    for k in range(n1):
        r = [w[(k + j) % n1] for j in range(n1)]
        val = (-(r[1] + r[-1]) / 2 - bracket(r[2:] + r[:1]) + bracket(r[:-1]))
        out[g.edge_of[ends[k]]] = val
    # edges sticking out of the face at its corners
    for k in range(n1):
        corner_end = ends[k]
        outer = g.s0[corner_end]
        kk = g.edge_of[outer]
        if kk in {g.edge_of[i] for i in ends}:
            raise GraphError("orientation change is implemented for regular faces only")
        r = [w[(k + 1 + j) % n1] for j in range(n1)]
        out[kk] = out[kk] + (r[0] + r[-1]) / 2 + bracket(r[1:]) - bracket(r[:-1])
    return out


def orientation_flip_shear(c, face):
    g = c.graph
    return ShearCoords(g, orientation_change_values(g, c.z, face, bracket_log))


def ip_values(g, u):
    """z_a = u_a(1) + u_a(3) - u_a(2) - u_a(4), read on either end of the edge."""
    out = []
    for i, _ in g.edges:
        out.append(u[g.edge_of[neighbor(g, i, 1)]] + u[g.edge_of[neighbor(g, i, 3)]]
                   - u[g.edge_of[neighbor(g, i, 2)]] - u[g.edge_of[neighbor(g, i, 4)]])
    return out


def ip_matrix(g):
    """Matrix of the linear map from Penner to shear coordinates."""
    m = np.zeros((g.n_edges, g.n_edges), dtype=int)
    for k, (i, _) in enumerate(g.edges):
        for j, s in ((1, 1), (3, 1), (2, -1), (4, -1)):
            m[k, g.edge_of[neighbor(g, i, j)]] += s
    return m


def ip_shear(c):
    return ShearCoords(c.graph, ip_values(c.graph, c.u))


def corner_exponents(g, u, face):
    """-u_a + u_a(1) - u_a(4) for every counterclockwise end a of the face."""
    return [-u[g.edge_of[i]] + u[g.edge_of[g.s0[i]]] - u[g.edge_of[g.s0inv[i]]]
            for i in g.face_ends(face)]


def area_map(c):
    """Half the log of the horocycle length around each puncture."""
    g = c.graph
    return [0.5 * _logsumexp(corner_exponents(g, c.u, f)) for f in range(g.n_faces)]


def lH_shear(c):
    g = c.graph
    return [sum(c.z[g.edge_of[i]] for i in orb) for orb in g.faces]


def lh_shear(c):
    return [abs(s) for s in lH_shear(c)]


def tropical_shear_flip_values(g, z, edge):
    """The large-coordinate limit of the shear flip (max instead of log)."""
    e, f, a, b, c, d = flip_quad(g, edge)
    k = g.edge_of[e]
    zk = z[k]
    out = list(z)
    for side in (a, c):
        out[g.edge_of[side]] += max(zk, 0)
    for side in (b, d):
        out[g.edge_of[side]] += min(zk, 0)
    out[k] = -zk
    return out


def tropical_penner_flip_values(g, u, edge):
    e, f, a, b, c, d = flip_quad(g, edge)
    k = g.edge_of[e]
    A, B, C, D = (u[g.edge_of[s]] for s in (a, b, c, d))
    out = list(u)
    out[k] = max(A + C, B + D) - u[k]
    return out
