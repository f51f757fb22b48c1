"""L^q-spectra and multifractal spectra assembled from components.

A component is either *closed*: the L^q-spectrum of the self-similar
measure carried by one block of maps, log(sum p**q) / log r; or an
*envelope*: rigorous bounds for a class whose local dimensions are only
bracketed, with d_min in [dmin_lo, dmin_hi] and d_max in [dmax_lo, dmax_hi].
The spectrum of the whole measure is the minimum over components.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp, softmax

from .dimensions import cycle_matrix
from .errors import NoCrossing
from .transitions import spectral_radius

DEFAULT_Q = (-4.0, 4.0, 1 / 256)


@dataclass(frozen=True)
class SpectrumComponent:
    label: str
    kind: str  # closed | envelope
    ratio: float
    weights: tuple = ()
    dmin: tuple = ()
    dmax: tuple = ()

    @classmethod
    def closed(cls, label: str, weights: Sequence, ratio) -> "SpectrumComponent":
        return cls(label, "closed", float(ratio), tuple(float(w) for w in weights))

    @classmethod
    def envelope(cls, label: str, inner: tuple, outer: tuple, ratio) -> "SpectrumComponent":
        """From attained-dimension bracket ``inner`` inside ``outer``."""
        return cls(label, "envelope", float(ratio), (),
                   (float(outer[0]), float(inner[0])), (float(inner[1]), float(outer[1])))

    @property
    def block_size(self) -> int:
        return len(self.weights)

    def tau(self, q):
        """Closed-form value; only for closed components."""
        if self.kind != "closed":
            raise ValueError(f"component {self.label} has no closed form")
        q = np.asarray(q, dtype=float)
        logs = np.log(self.weights)
        vals = logsumexp(np.multiply.outer(q, logs), axis=-1)
        return vals / math.log(self.ratio)

    def bounds(self, q) -> tuple:
        """(lower, upper) bounds on the component's spectrum at q."""
        q = np.asarray(q, dtype=float)
        if self.kind == "closed":
            t = self.tau(q)
            return t, t
        (a_lo, a_hi), (b_lo, b_hi) = self.dmin, self.dmax
        pos = q >= 0
        upper = np.where(pos, np.minimum(b_hi * q - 1, a_hi * q), np.minimum(a_lo * q - 1, b_lo * q))
        lower = np.where(pos, a_lo * q - 1, b_hi * q - 1)
        return lower, upper


def tau_component(weights: Sequence, ratio, q):
    """log(sum_j p_j**q) / log r."""
    return SpectrumComponent.closed("", weights, ratio).tau(q)


def tau_essential_envelope(inner: tuple, outer: tuple, q) -> tuple:
    """(lower, upper) for a class with local dimensions bracketed by
    ``inner`` (attained) and ``outer`` (containing all)."""
    return SpectrumComponent.envelope("", inner, outer, 0.5).bounds(q)


# -- the whole measure ---------------------------------------------------------------

@dataclass
class SpectrumCurve:
    q: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    active: list
    ambiguous: np.ndarray
    components: list

    def active_sequence(self, qmin: float = -math.inf, qmax: float = math.inf) -> list:
        seq = []
        for q, a in zip(self.q, self.active):
            if qmin <= q <= qmax and (not seq or seq[-1] != a):
                seq.append(a)
        return seq

    def rows(self) -> list:
        return [(float(q), float(lo), float(hi), a)
                for q, lo, hi, a in zip(self.q, self.lower, self.upper, self.active)]


def tau_mu(components: Sequence[SpectrumComponent], q) -> SpectrumCurve:
    """Minimum over components.  The active component is the one with the
    smallest upper bound (ties go to the first listed); a point is flagged
    ambiguous when another component's lower bound dips below that."""
    q = np.atleast_1d(np.asarray(q, dtype=float))
    lows, ups = zip(*(c.bounds(q) for c in components))
    lows, ups = np.vstack(lows), np.vstack(ups)
    idx = np.argmin(ups, axis=0)
    cols = np.arange(len(q))
    best_up = ups[idx, cols]
    masked = lows.copy()
    masked[idx, cols] = np.inf
    ambiguous = masked.min(axis=0) < best_up - 1e-12 if len(components) > 1 else np.zeros(len(q), bool)
    return SpectrumCurve(q, lows.min(axis=0), best_up,
                         [components[i].label for i in idx], ambiguous, list(components))


@dataclass(frozen=True)
class Crossing:
    """Change of active component between ``left`` (smaller q) and
    ``right``.  Exact crossings between closed forms carry ``q``; crossings
    involving an envelope carry only the bracket."""

    left: str
    right: str
    bracket: tuple
    q: Optional[float] = None

    def format(self) -> str:
        where = f"q={self.q:.12g}" if self.q is not None else "q=?"
        return (f"{self.left}->{self.right}  {where}  "
                f"bracket=[{self.bracket[0]:.12g},{self.bracket[1]:.12g}]")


def _roots(f, a: float, b: float, tol: float) -> list:
    """Sign changes of f on a fine grid over [a, b], each refined."""
    grid = np.linspace(a, b, 257)
    vals = np.array([f(x) for x in grid])
    out = []
    for x0, x1, v0, v1 in zip(grid, grid[1:], vals, vals[1:]):
        if v0 == 0:
            out.append(x0)
        elif v0 * v1 < 0:
            out.append(brentq(f, x0, x1, xtol=tol))
    if vals[-1] == 0:
        out.append(grid[-1])
    return out


def _gap(a: SpectrumComponent, b: SpectrumComponent):
    """Positive where the bound intervals of a and b are disjoint."""
    def g(q):
        (al, au), (bl, bu) = a.bounds(q), b.bounds(q)
        return float(max(al - bu, bl - au))
    return g


def _edge(g, inside: float, outside: float, tol: float) -> float:
    return brentq(g, inside, outside, xtol=tol) if g(outside) > 0 else outside


def _overlap_bracket(a, b, seed: float, lo: float, hi: float, step: float, tol: float) -> tuple:
    """Maximal interval around ``seed`` on which the bounds of a and b overlap."""
    g = _gap(a, b)
    left = seed
    while left > lo and g(max(lo, left - step)) <= 0:
        left = max(lo, left - step)
    left = _edge(g, left, max(lo, left - step), tol) if left > lo else lo
    right = seed
    while right < hi and g(min(hi, right + step)) <= 0:
        right = min(hi, right + step)
    right = _edge(g, right, min(hi, right + step), tol) if right < hi else hi
    return left, right


def crossing(a: SpectrumComponent, b: SpectrumComponent, lo: float, hi: float,
             tol: float = 1e-10, step: float = DEFAULT_Q[2]) -> Crossing:
    """Where the spectra of ``a`` and ``b`` meet inside [lo, hi].

    Two closed forms meet at an exact root.  Otherwise the crossing is only
    known to lie where the two bound intervals overlap; the first such
    stretch is returned as a bracket.
    """
    if a.kind == b.kind == "closed":
        if sorted(a.weights) == sorted(b.weights) and a.ratio == b.ratio:
            raise NoCrossing(f"{a.label} and {b.label} are identical")
        roots = _roots(lambda q: float(a.tau(q) - b.tau(q)), lo, hi, tol)
        if not roots:
            raise NoCrossing(f"{a.label} and {b.label} do not cross in [{lo}, {hi}]")
        q = roots[0]
        return Crossing(a.label, b.label, (max(lo, q - tol), min(hi, q + tol)), q)
    g = _gap(a, b)
    grid = np.linspace(lo, hi, max(3, int(math.ceil((hi - lo) / (step / 16))) + 1))
    seeds = [x for x in grid if g(x) <= 0]
    if not seeds:
        raise NoCrossing(f"{a.label} and {b.label} do not cross in [{lo}, {hi}]")
    return Crossing(a.label, b.label, _overlap_bracket(a, b, seeds[0], lo, hi, step / 16, tol))


def crossings(curve: SpectrumCurve, tol: float = 1e-10) -> list:
    """One crossing per change of active component along the grid."""
    by_label = {c.label: c for c in curve.components}
    out = []
    q = curve.q
    for i in range(1, len(q)):
        a, b = by_label[curve.active[i - 1]], by_label[curve.active[i]]
        if a.label == b.label:
            continue
        if a.kind == b.kind == "closed":
            out.append(crossing(a, b, q[i - 1], q[i], tol))
            continue
        step = (q[i] - q[i - 1]) / 16
        g = _gap(a, b)
        cell = np.linspace(q[i - 1], q[i], 17)
        seeds = [x for x in cell if g(x) <= 0]
        if seeds:
            br = _overlap_bracket(a, b, seeds[0], q[0], q[-1], step, tol)
        else:
            # the switch happens inside a cell where the bounds never overlap
            # on the sample points; report the cell itself
            br = (float(q[i - 1]), float(q[i]))
        out.append(Crossing(a.label, b.label, br))
    return out


def q_grid(qmin: float = DEFAULT_Q[0], qmax: float = DEFAULT_Q[1], step: float = DEFAULT_Q[2],
           refine: Sequence[float] = (), factor: int = 16) -> np.ndarray:
    """Uniform grid, plus a finer grid of step/factor one step around each
    point in ``refine``."""
    if qmax < qmin or step <= 0:
        raise ValueError("need qmin <= qmax and a positive step")
    n = int(round((qmax - qmin) / step))
    grid = [qmin + i * step for i in range(n + 1)]
    for c in refine:
        lo, hi = max(qmin, c - step), min(qmax, c + step)
        m = int(round((hi - lo) / (step / factor)))
        grid += list(np.linspace(lo, hi, m + 1))
    return np.unique(np.round(np.array(grid), 12))


def spectrum(components: Sequence[SpectrumComponent], qmin: float = DEFAULT_Q[0],
             qmax: float = DEFAULT_Q[1], step: float = DEFAULT_Q[2]) -> tuple:
    """(curve, crossings) on the default grid refined around crossings."""
    coarse = tau_mu(components, q_grid(qmin, qmax, step))
    cs = crossings(coarse)
    centres = [c.q if c.q is not None else sum(c.bracket) / 2 for c in cs]
    fine = tau_mu(components, q_grid(qmin, qmax, step, centres))
    return fine, cs


# -- Legendre transforms -----------------------------------------------------------

@dataclass(frozen=True)
class FPiece:
    """Part of a multifractal spectrum.  ``kind`` is ``arc`` (sampled
    Legendre transform), ``point`` or ``annotation`` (only max f known)."""

    label: str
    kind: str
    alpha: np.ndarray
    f: np.ndarray

    @property
    def alpha_range(self) -> tuple:
        return float(self.alpha.min()), float(self.alpha.max())


def legendre(component: SpectrumComponent, q) -> tuple:
    """(alpha, f) with alpha = tau'(q) and f = q alpha - tau(q)."""
    q = np.atleast_1d(np.asarray(q, dtype=float))
    logs = np.log(component.weights)
    w = softmax(np.multiply.outer(q, logs), axis=-1)
    alpha = (w @ logs) / math.log(component.ratio)
    return alpha, q * alpha - component.tau(q)


def f_piece(component: SpectrumComponent, q=None) -> FPiece:
    if component.kind == "envelope":
        lo, hi = component.dmin[0], component.dmax[1]
        return FPiece(component.label, "annotation", np.array([lo, hi]), np.array([1.0, 1.0]))
    if q is None:
        q = np.linspace(-40, 40, 801)
    if len(set(component.weights)) == 1:
        alpha, f = legendre(component, [0.0])
        return FPiece(component.label, "point", alpha, f)
    alpha, f = legendre(component, q)
    order = np.argsort(alpha)
    return FPiece(component.label, "arc", alpha[order], f[order])


def _concave_arc(p: FPiece, tol: float = 1e-9) -> bool:
    if p.kind != "arc" or len(p.alpha) < 3:
        return True
    a, f = p.alpha, p.f
    slopes = np.diff(f) / np.maximum(np.diff(a), 1e-300)
    keep = np.diff(a) > 1e-12
    return bool(np.all(np.diff(slopes[keep]) <= tol * max(1.0, np.abs(slopes[keep]).max())))


@dataclass
class MultifractalCurve:
    pieces: list = field(default_factory=list)

    @property
    def concave(self) -> bool:
        """False when the support splits into several disjoint pieces or
        some arc fails concavity."""
        spans = sorted(p.alpha_range for p in self.pieces)
        for (a0, a1), (b0, b1) in zip(spans, spans[1:]):
            if b0 > a1 + 1e-12:
                return False
        return all(_concave_arc(p) for p in self.pieces)

    def rows(self) -> list:
        return [(p.label, float(a), float(f)) for p in self.pieces for a, f in zip(p.alpha, p.f)]


def assemble_f(components: Sequence[SpectrumComponent], q=None) -> MultifractalCurve:
    """Union of the components' spectra; envelope classes are annotated at
    height 1 over their outer bracket."""
    return MultifractalCurve([f_piece(c, q) for c in components])


# -- components of a measure ---------------------------------------------------

def components_from_construction(spec, dimset) -> list:
    """K_0, K_1, ... from the construction blocks, then the essential class."""
    r = spec.ratio
    out = [SpectrumComponent.closed(f"K{i}", ps, r) for i, ps in enumerate(spec.block_probs)]
    e = dimset.essential
    out.append(SpectrumComponent.envelope("E", e.inner, e.outer, r))
    return out


def components_from_classes(graph, dimset) -> list:
    """One component per maximal loop class: closed when the class is a
    single vertex whose self-maps are 1x1, an envelope otherwise."""
    r = graph.omega.ifs.ratio
    out = []
    by_id = {c.class_id: c for c in dimset.components}
    for comp in graph.loop_classes():
        edges = graph.edges_within(comp)
        label = "E" if comp.essential else f"C{comp.id}"
        if len(comp.members) == 1 and all(M.shape == (1, 1) for *_, M in edges):
            out.append(SpectrumComponent.closed(label, [M[0, 0] for *_, M in edges], r))
        elif len(comp.members) == 1 and len(edges) == 1:
            # a single periodic point: tau(q) = q * dim
            vid, pos, _, _ = edges[0]
            rho = spectral_radius(cycle_matrix(graph.omega, [(vid, pos)]))
            out.append(SpectrumComponent.closed(label, [rho], r))
        else:
            dc = by_id[comp.id]
            out.append(SpectrumComponent.envelope(label, dc.inner, dc.outer, r))
    return out
