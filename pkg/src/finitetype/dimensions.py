"""Local dimensions: periodic points, loop-class brackets, attainable sets.

Products of transition matrices along paths inside a loop class are
computed in integer form: with D the common denominator of the
probabilities, every primitive matrix is W / D for an integer matrix W, and
a length-n product is (W_1 ... W_n) / D**n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import networkx as nx
import numpy as np

from .classes import ClassGraph, Component
from .errors import BudgetExceeded, OverlapError
from .ifs import format_fraction
from .net import Omega, SymbolicPath, periodic_paths
from .transitions import TransitionMatrix, product, spectral_radius, spectral_radius_exact

DEFAULT_BUDGET = 2_000_000
# default word lengths are the largest keeping (out-degree)**L under these
_OUTER_PATHS = 70_000
_CYCLE_PATHS = 5_000
_INT64_SAFE = 2 ** 62


def log_value(x) -> float:
    """Natural log, exact-input friendly (huge numerators/denominators)."""
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    if isinstance(x, (int, np.integer)):
        return math.log(int(x))
    return math.log(x)


def dim_from_mass(mass, n: int, ratio: Fraction) -> float:
    """log(mass) / (n log r)."""
    return log_value(mass) / (n * log_value(ratio))


# -- periodic points -----------------------------------------------------------

def cycle_matrix(omega: Omega, cycle: list) -> TransitionMatrix:
    """Exact product around a cycle given as (vertex, child position) pairs."""
    mats = []
    for i, (vid, pos) in enumerate(cycle):
        cid, ch = omega.edges[vid][pos]
        nxt = cycle[(i + 1) % len(cycle)][0]
        if cid != nxt:
            raise ValueError(f"edge {vid}->{cid} does not continue the cycle at {nxt}")
        mats.append(ch.matrix)
    return product(mats)


def periodic_dim(omega: Omega, cycle, tol: float = 1e-12) -> float:
    """Local dimension at a periodic point: log sp(T(cycle)) / (len * log r).

    ``cycle`` is a periodic :class:`SymbolicPath` or a list of (vertex,
    child position) pairs closing up on itself.
    """
    if isinstance(cycle, SymbolicPath):
        cycle = cycle.cycle_edges()
    T = cycle_matrix(omega, cycle)
    exact = spectral_radius_exact(T)
    rho = exact if exact is not None else spectral_radius(T, tol)
    return log_value(rho) / (len(cycle) * log_value(omega.ifs.ratio))


def periodic_dim_expr(omega: Omega, cycle) -> Optional[str]:
    """``log(a/b)/log(r)``-style expression when the spectral radius is exact."""
    if isinstance(cycle, SymbolicPath):
        cycle = cycle.cycle_edges()
    rho = spectral_radius_exact(cycle_matrix(omega, cycle))
    if rho is None:
        return None
    beta = len(cycle)
    num = f"log({format_fraction(rho)})"
    den = f"log({format_fraction(omega.ifs.ratio)})"
    return f"{num}/{den}" if beta == 1 else f"{num}/({beta}*{den})"


def local_dim(omega: Omega, x, max_depth: Optional[int] = None) -> float:
    """Local dimension at an eventually periodic point x (e.g. rational x
    when 1/r is an integer); boundary points use the smaller of the two
    representations, which agree in theory."""
    return min(periodic_dim(omega, p) for p in periodic_paths(omega, x, max_depth))


# -- path products inside a class ------------------------------------------------

@dataclass
class _ClassEdges:
    D: int
    edges: list  # (u, v, integer matrix)
    members: tuple
    dtype: object = object


def _class_edges(graph: ClassGraph, comp: Component) -> _ClassEdges:
    ifs = graph.omega.ifs
    D = math.lcm(*(p.denominator for p in ifs.probs))
    edges = [(u, v, M.integer_entries(D)) for u, _, v, M in graph.edges_within(comp)]
    return _ClassEdges(D, edges, comp.members)


def _walk_count(ce: _ClassEdges, L: int) -> int:
    idx = {v: i for i, v in enumerate(ce.members)}
    A = [[0] * len(idx) for _ in idx]
    for u, v, _ in ce.edges:
        A[idx[u]][idx[v]] += 1
    vec = [1] * len(idx)
    for _ in range(L):
        vec = [sum(vec[i] * A[i][j] for i in range(len(idx))) for j in range(len(idx))]
    return sum(vec)


def _dtype_for(ce: _ClassEdges, L: int):
    growth = max(max(W.sum(axis=1).max(), W.sum(axis=0).max()) for _, _, W in ce.edges)
    size = max(max(W.shape) for _, _, W in ce.edges)
    return np.int64 if int(growth) ** L * size < _INT64_SAFE else object


def _products(ce: _ClassEdges, L: int, closed: bool = False):
    """Yield (length, start, end, stacked products) for all class paths.

    With ``closed`` only paths returning to their start are yielded, for
    every length 1..L; otherwise only length-L paths are yielded.
    """
    dtype = _dtype_for(ce, L)
    mats = [(u, v, W.astype(dtype)) for u, v, W in ce.edges]
    for s in ce.members:
        m = next(W.shape[0] for u, _, W in mats if u == s)
        frontier = {s: np.eye(m, dtype=dtype)[None]}
        for step in range(1, L + 1):
            new = {}
            for u, v, W in mats:
                if u in frontier:
                    new.setdefault(v, []).append(frontier[u] @ W)
            frontier = {v: np.concatenate(blocks) for v, blocks in new.items()}
            if closed and s in frontier:
                yield step, s, s, frontier[s]
        if not closed:
            for v, prods in frontier.items():
                yield L, s, v, prods


def default_lengths(graph: ClassGraph, comp: Component) -> tuple:
    """(L, Lc) keeping the number of enumerated paths modest."""
    deg = max(1, max(sum(1 for u, _, _, _ in graph.edges_within(comp) if u == v)
                     for v in comp.members))
    if deg == 1:
        return 8, 6
    L = max(1, min(8, int(math.log(_OUTER_PATHS) / math.log(deg))))
    Lc = max(1, min(6, int(math.log(_CYCLE_PATHS) / math.log(deg))))
    return L, Lc


def cycle_dims(graph: ClassGraph, comp: Component, max_len: int,
               budget: int = DEFAULT_BUDGET, tol: float = 1e-12) -> tuple:
    """[min, max] of periodic dimensions over all cycles of length <= max_len.

    Parallel edges (siblings with equal reduced vectors) are distinct
    cycles.  Both endpoints are attained local dimensions.
    """
    ce = _class_edges(graph, comp)
    if _walk_count(ce, max_len) > budget:
        raise BudgetExceeded(f"more than {budget} paths of length {max_len}")
    log_r = log_value(graph.omega.ifs.ratio)
    log_D = math.log(ce.D)
    lo, hi = math.inf, -math.inf
    for n, _, _, prods in _products(ce, max_len, closed=True):
        for P in prods:
            if P.shape == (1, 1):
                log_rho = log_value(int(P[0, 0]))
            else:
                log_rho = math.log(spectral_radius(np.asarray(P, dtype=float), tol))
            d = (log_rho - n * log_D) / (n * log_r)
            lo, hi = min(lo, d), max(hi, d)
    if lo > hi:
        raise ValueError(f"class {comp.id} has no cycle of length <= {max_len}")
    return lo, hi


@dataclass(frozen=True)
class NormStats:
    """Extremes over all length-L class paths of four path functionals, in
    integer units (divide by D**L for the true values)."""

    L: int
    D: int
    max_row_norm: int
    max_col_norm: int
    min_row_sum: int
    min_col_sum: int


def norm_stats(graph: ClassGraph, comp: Component, L: int,
               budget: int = DEFAULT_BUDGET) -> NormStats:
    ce = _class_edges(graph, comp)
    if _walk_count(ce, L) > budget:
        raise BudgetExceeded(f"more than {budget} paths of length {L}")
    mr = mc = 0
    nr = nc = None
    for _, _, _, prods in _products(ce, L):
        rows = prods.sum(axis=2)
        cols = prods.sum(axis=1)
        mr = max(mr, int(rows.max()))
        mc = max(mc, int(cols.max()))
        r0, c0 = int(rows.min()), int(cols.min())
        nr = r0 if nr is None else min(nr, r0)
        nc = c0 if nc is None else min(nc, c0)
    return NormStats(L, ce.D, mr, mc, nr, nc)


def outer_interval(graph: ClassGraph, comp: Component, L: int,
                   budget: int = DEFAULT_BUDGET) -> tuple:
    """Bracket containing every local dimension attained in the class.

    Lower end from the max-row and max-column induced norms (both
    submultiplicative), upper end from the minimum row and column sums (both
    supermultiplicative); the better of each pair is kept.
    """
    s = norm_stats(graph, comp, L, budget)
    scale = L * log_value(graph.omega.ifs.ratio)
    log_DL = L * math.log(s.D)

    def dim(v):
        return (log_value(v) - log_DL) / scale

    lower = max(dim(s.max_row_norm), dim(s.max_col_norm))
    upper = min(dim(s.min_row_sum), dim(s.min_col_sum))
    return lower, upper


# -- attainable set -------------------------------------------------------------

@dataclass(frozen=True)
class DimensionComponent:
    class_id: int
    kind: str  # exact-point | exact-interval | bracketed-interval
    inner: tuple
    outer: tuple
    expr: Optional[str] = None
    essential: bool = False

    def format(self) -> str:
        line = (f"class={self.class_id} kind={self.kind} "
                f"inner=[{self.inner[0]:.9f},{self.inner[1]:.9f}] "
                f"outer=[{self.outer[0]:.9f},{self.outer[1]:.9f}]")
        if self.expr:
            line += f" expr={self.expr}"
        return line


@dataclass(frozen=True)
class Piece:
    """Merged components whose inner intervals overlap."""

    inner: tuple
    outer: tuple
    class_ids: tuple


@dataclass
class DimensionSet:
    components: list
    L: dict = field(default_factory=dict)
    Lc: dict = field(default_factory=dict)
    merge_tol: float = 1e-12

    @property
    def essential(self) -> DimensionComponent:
        return next(c for c in self.components if c.essential)

    def pieces(self) -> list:
        comps = sorted(self.components, key=lambda c: c.inner)
        out = []
        for c in comps:
            if out and c.inner[0] <= out[-1].inner[1] + self.merge_tol:
                p = out[-1]
                out[-1] = Piece((p.inner[0], max(p.inner[1], c.inner[1])),
                                (min(p.outer[0], c.outer[0]), max(p.outer[1], c.outer[1])),
                                p.class_ids + (c.class_id,))
            else:
                out.append(Piece(c.inner, c.outer, (c.class_id,)))
        return out

    @property
    def disjoint(self) -> bool:
        """True when the outer hulls of the pieces are pairwise disjoint,
        which certifies that the pieces really are separate."""
        ps = self.pieces()
        return all(a.outer[1] < b.outer[0] for a, b in zip(ps, ps[1:]))

    @property
    def status(self) -> str:
        return "disjoint" if self.disjoint else "undetermined"

    def format(self) -> str:
        return "\n".join(c.format() for c in self.components) + "\n"


def _scalar_class(graph: ClassGraph, comp: Component):
    edges = graph.edges_within(comp)
    if all(M.shape == (1, 1) for *_, M in edges):
        return edges
    return None


def _scalar_extremes(graph: ClassGraph, comp: Component, edges) -> tuple:
    """Exact [min, max] cycle means of log p / log r for a class whose
    matrices are all 1x1; extremes are attained on simple cycles."""
    r = graph.omega.ifs.ratio
    best = {}
    for u, _, v, M in edges:
        p = M[0, 0]
        lo, hi = best.get((u, v), (p, p))
        best[(u, v)] = (min(lo, p), max(hi, p))
    g = nx.DiGraph()
    g.add_edges_from(best)
    lo_d, hi_d = math.inf, -math.inf
    lo_e = hi_e = None
    for cyc in nx.simple_cycles(g):
        pairs = list(zip(cyc, cyc[1:] + cyc[:1]))
        big = math.prod((best[e][1] for e in pairs), start=Fraction(1))
        small = math.prod((best[e][0] for e in pairs), start=Fraction(1))
        n = len(pairs)
        d_big, d_small = dim_from_mass(big, n, r), dim_from_mass(small, n, r)
        if d_big < lo_d:
            lo_d, lo_e = d_big, (big, n)
        if d_small > hi_d:
            hi_d, hi_e = d_small, (small, n)
    return (lo_d, lo_e), (hi_d, hi_e)


def _expr(mass: Fraction, n: int, r: Fraction) -> str:
    den = f"log({format_fraction(r)})"
    return f"log({format_fraction(mass)})/" + (den if n == 1 else f"({n}*{den})")


def class_component(graph: ClassGraph, comp: Component, L: Optional[int] = None,
                    Lc: Optional[int] = None, budget: int = DEFAULT_BUDGET) -> DimensionComponent:
    r = graph.omega.ifs.ratio
    edges = graph.edges_within(comp)
    scalar = _scalar_class(graph, comp)
    if scalar is not None:
        (lo, lo_e), (hi, hi_e) = _scalar_extremes(graph, comp, scalar)
        if abs(hi - lo) <= 1e-15 or lo_e == hi_e:
            return DimensionComponent(comp.id, "exact-point", (lo, lo), (lo, lo),
                                      _expr(*lo_e, r), comp.essential)
        expr = f"[{_expr(*lo_e, r)}, {_expr(*hi_e, r)}]"
        return DimensionComponent(comp.id, "exact-interval", (lo, hi), (lo, hi), expr, comp.essential)
    if len(comp.members) == 1 and len(edges) == 1:
        vid, pos, _, _ = edges[0]
        d = periodic_dim(graph.omega, [(vid, pos)])
        return DimensionComponent(comp.id, "exact-point", (d, d), (d, d),
                                  periodic_dim_expr(graph.omega, [(vid, pos)]), comp.essential)
    dL, dLc = default_lengths(graph, comp)
    L = L or dL
    Lc = Lc or dLc
    inner = cycle_dims(graph, comp, Lc, budget)
    outer = outer_interval(graph, comp, L, budget)
    # inner endpoints are attained, so this only absorbs float rounding when
    # both brackets meet at the same exact value
    outer = (min(outer[0], inner[0]), max(outer[1], inner[1]))
    return DimensionComponent(comp.id, "bracketed-interval", inner, outer, None, comp.essential)


def attainable_set(graph: ClassGraph, L: Optional[int] = None, Lc: Optional[int] = None,
                   budget: int = DEFAULT_BUDGET) -> DimensionSet:
    """One component per maximal loop class."""
    comps = []
    Ls, Lcs = {}, {}
    for comp in graph.loop_classes():
        dc = class_component(graph, comp, L, Lc, budget)
        if dc.kind == "bracketed-interval":
            dL, dLc = default_lengths(graph, comp)
            Ls[comp.id], Lcs[comp.id] = L or dL, Lc or dLc
        comps.append(dc)
    return DimensionSet(comps, Ls, Lcs)


def loop_attractor_dim(digits, ratio) -> float:
    """Hausdorff dimension log(#B)/log(1/r) of the attractor of a block of
    maps x -> r x + d that satisfies the open set condition on (0, 1)."""
    ratio = Fraction(ratio)
    ds = sorted(Fraction(d) for d in digits)
    for a, b in zip(ds, ds[1:]):
        if b < a + ratio:
            raise OverlapError(f"images starting at {a} and {b} overlap")
    if len(ds) == 1:
        return 0.0
    return math.log(len(ds)) / -log_value(ratio)
