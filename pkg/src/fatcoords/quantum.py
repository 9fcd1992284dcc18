"""The quantum flip function phi and exact bookkeeping for the quantized algebra.

Operators are never represented.  Generators are symbols; maps between
presentations are affine in the generators plus finitely many phi-terms
``coef * phi(scale * generator, hbar)``.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .fatgraph import GraphError, flip, flip_quad
from .poisson import face_vectors, wp_bivector


def _contour(hbar):
    """Height of the integration line and a safe trapezoid step.

    The integrand has poles at i*k and i*k/hbar.  The line Im p = delta sits
    halfway between 0 and the first pole above it, so the integrand is
    analytic in a strip of half-width delta around the line and the
    trapezoid error is about exp(-2*pi*(delta/2)/step).
    """
    delta = min(1.0, 1.0 / hbar) / 2
    step = delta / 12
    return delta, step


def phi(x, hbar, tol=1e-10):
    """-(pi hbar / 2) * integral of exp(-ipx) / (sinh(pi p) sinh(pi hbar p)) dp.

    The contour is the line Im p = delta passing above the double pole at the
    origin.  Along it the integrand decays like exp(-pi max(1, hbar) |p|)
    times exp(delta x), which fixes the truncation.
    """
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    x = float(x)
    delta, step = _contour(hbar)
    rate = math.pi * max(1.0, hbar)
    growth = delta * abs(x)
    if growth > 600:
        raise ValueError(f"phi({x}) overflows at this hbar")
    reach = (math.log(1 / tol) + growth + 10) / rate + 1
    n = int(math.ceil(reach / step))
    t = np.arange(-n, n + 1) * step
    p = t + 1j * delta
    vals = np.exp(-1j * p * x) / (np.sinh(np.pi * p) * np.sinh(np.pi * hbar * p))
    integral = vals.sum() * step
    return float((-math.pi * hbar / 2 * integral).real)


def phi_classical(x):
    """The hbar -> 0 limit, log(1 + e^x)."""
    if x > 0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


@dataclass
class QuantumPresentation:
    """Generators Z_a with [Z_a, Z_b] = 2 pi i hbar eps[a, b] and central face sums."""
    graph: object
    hbar: float
    eps: np.ndarray
    centers: np.ndarray

    def commutator(self, a, b):
        """Coefficient of i in [Z_a, Z_b]."""
        return 2 * math.pi * self.hbar * int(self.eps[a, b])


def presentation(g, hbar):
    if hbar < 0:
        raise ValueError("hbar must be nonnegative")
    eps = wp_bivector(g)
    return QuantumPresentation(g, float(hbar), eps, face_vectors(g))


@dataclass(frozen=True)
class PhiTerm:
    """coef * phi(scale * Y_gen, hbar)."""
    coef: Fraction
    scale: Fraction
    gen: int
    hbar: Fraction

    def normalized(self):
        """Rewrite with hbar <= 1 using phi(x, h) = h phi(x / h, 1 / h)."""
        if self.hbar > 1:
            h = self.hbar
            return PhiTerm(self.coef * h, self.scale / h, self.gen, 1 / h)
        return self

    def key(self):
        t = self.normalized()
        return (t.scale, t.gen, t.hbar)


@dataclass
class AffineGeneratorMap:
    """Outputs X_i = sum_j linear[i][j] Y_j + sum of phi-terms in the Y's.

    ``src`` and ``dst`` are the presentations of the Y's and the X's.
    """
    src: QuantumPresentation
    dst: QuantumPresentation
    linear: list
    phis: list = field(default_factory=list)

    def evaluate(self, y, phi_fn=None):
        """Numeric values of the outputs at commuting sample values of the inputs."""
        out = []
        for i, row in enumerate(self.linear):
            v = sum(float(c) * y[j] for j, c in enumerate(row))
            for t in self.phis[i]:
                arg = float(t.scale) * y[t.gen]
                v += float(t.coef) * (phi_fn(arg, float(t.hbar)) if phi_fn
                                      else phi(arg, float(t.hbar)))
            out.append(v)
        return out

    def canonical(self):
        """Linear part and merged phi-terms, each term written with hbar <= 1."""
        lin = [[Fraction(c) for c in row] for row in self.linear]
        terms = []
        for row in self.phis:
            acc = {}
            for t in row:
                n = t.normalized()
                acc[t.key()] = acc.get(t.key(), 0) + n.coef
            terms.append({k: c for k, c in acc.items() if c})
        return lin, terms

    def equals(self, other):
        return self.canonical() == other.canonical()

    def compose(self, inner):
        """self after inner: outputs of self in terms of the inputs of inner.

        Supported when the generators appearing inside phi-arguments of self
        are linear in inner's inputs with a single term.
        """
        n_out = len(self.linear)
        lin = [[Fraction(0)] * len(inner.linear[0]) for _ in range(n_out)]
        phis = [[] for _ in range(n_out)]
        for i in range(n_out):
            for j, c in enumerate(self.linear[i]):
                if not c:
                    continue
                for k, d in enumerate(inner.linear[j]):
                    lin[i][k] += Fraction(c) * Fraction(d)
                for t in inner.phis[j]:
                    phis[i].append(PhiTerm(Fraction(c) * t.coef, t.scale, t.gen, t.hbar))
            for t in self.phis[i]:
                row = inner.linear[t.gen]
                nz = [(k, d) for k, d in enumerate(row) if d]
                if inner.phis[t.gen] or len(nz) != 1:
                    raise NotImplementedError("phi of a non-monomial argument")
                k, d = nz[0]
                phis[i].append(PhiTerm(t.coef, t.scale * Fraction(d), k, t.hbar))
        return AffineGeneratorMap(inner.src, self.dst, lin, phis)

    def chamber_linearization(self, y):
        """Replace phi(x) by its asymptote max(x, 0) on the chamber of ``y``."""
        m = np.array([[float(c) for c in row] for row in self.linear])
        for i, row in enumerate(self.phis):
            for t in row:
                arg = float(t.scale) * y[t.gen]
                if arg > 0:
                    m[i, t.gen] += float(t.coef * t.scale)
        return m


def _hbar_frac(h):
    return Fraction(h).limit_denominator(10**12)


def duality_map(p):
    """Generators of the hbar-algebra in terms of the 1/hbar-algebra: Z = hbar Z'.

    This scaling respects the commutation relations, since
    hbar^2 * 2 pi (1/hbar) = 2 pi hbar.
    """
    if p.hbar <= 0:
        raise ValueError("duality needs hbar > 0")
    h = _hbar_frac(p.hbar)
    dual = presentation(p.graph, float(1 / h))
    n = p.graph.n_edges
    lin = [[h if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    return AffineGeneratorMap(dual, p, lin, [[] for _ in range(n)])


def quantum_flip(p, edge):
    """New generators in terms of old ones after flipping ``edge``.

    Sides a, c gain phi(Z), sides b, d lose phi(-Z), the diagonal becomes -Z;
    sides are the same directed-edge sides as in the classical shear flip.
    Returns the map and the edge correspondence.
    """
    g = p.graph
    e, f, a, b, c, d = flip_quad(g, edge)
    k = g.edge_of[e]
    h, corr = flip(g, edge)
    n = g.n_edges
    hb = _hbar_frac(p.hbar)
    old_lin = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    old_phis = [[] for _ in range(n)]
    for s in (a, c):
        old_phis[g.edge_of[s]].append(PhiTerm(Fraction(1), Fraction(1), k, hb))
    for s in (b, d):
        old_phis[g.edge_of[s]].append(PhiTerm(Fraction(-1), Fraction(-1), k, hb))
    old_lin[k][k] = Fraction(-1)
    # reindex outputs to the new graph's edges
    lin = [None] * n
    phis = [None] * n
    for i in range(n):
        lin[corr(i)] = old_lin[i]
        phis[corr(i)] = old_phis[i]
    return AffineGeneratorMap(p, presentation(h, p.hbar), lin, phis), corr


def center_image(fmap, center):
    """Pull a central element of the target back through a quantum flip.

    Returns its expression as an integer vector in the source generators;
    phi-terms must cancel using phi(x) - phi(-x) = x or an error is raised.
    """
    n_src = len(fmap.linear[0])
    vec = [Fraction(0)] * n_src
    pending = {}
    for i, w in enumerate(center):
        if not w:
            continue
        for j, c in enumerate(fmap.linear[i]):
            vec[j] += w * c
        for t in fmap.phis[i]:
            key = (t.gen, t.hbar, abs(t.scale))
            pos, neg = pending.get(key, (0, 0))
            if t.scale > 0:
                pos += w * t.coef
            else:
                neg += w * t.coef
            pending[key] = (pos, neg)
    for (gen, _, scale), (pos, neg) in pending.items():
        # pos phi(sx) + neg phi(-sx) is linear only if pos = -neg
        if pos != -neg:
            raise GraphError("phi-terms do not cancel on this element")
        vec[gen] += pos * scale
    return vec


def centers_preserved(p, edge):
    """Every new face sum pulls back to an old face sum, exactly."""
    fmap, _ = quantum_flip(p, edge)
    old = {tuple(int(v) for v in row) for row in p.centers}
    for row in fmap.dst.centers:
        vec = center_image(fmap, row)
        if any(v.denominator != 1 for v in vec) or tuple(int(v) for v in vec) not in old:
            return False
    return True
