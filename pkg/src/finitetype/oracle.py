"""Brute-force approximations of the self-similar measure.

The level-n refinement puts mass p_sigma at S_sigma(0) for every word of
length n.  Positions are kept as integers: with r = a/b and digits c_j / M,
a level-n position is an integer multiple of 1 / (M b**n), and a level-n
image S_sigma([0, 1]) has length a**n M in those units.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, InsufficientMass
from .ifs import WeightedIFS

DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True)
class _Scales:
    a: int
    b: int
    M: int
    D: int
    c: tuple  # digits times M
    w: tuple  # probabilities times D


def _scales(ifs: WeightedIFS) -> _Scales:
    r = ifs.ratio
    M = math.lcm(*(d.denominator for d in ifs.digits))
    D = math.lcm(*(p.denominator for p in ifs.probs))
    return _Scales(r.numerator, r.denominator, M, D,
                   tuple(int(d * M) for d in ifs.digits), tuple(int(p * D) for p in ifs.probs))


@dataclass(frozen=True)
class DiscreteMeasure:
    """Atoms of the level-n refinement, positions S_sigma(0) merged.

    ``positions`` are integers in units 1 / pos_unit, ``weights`` integers
    in units 1 / weight_unit.
    """

    level: int
    positions: tuple
    weights: tuple
    pos_unit: int
    weight_unit: int

    def atoms(self) -> list:
        return [(Fraction(p, self.pos_unit), Fraction(w, self.weight_unit))
                for p, w in zip(self.positions, self.weights)]

    def __len__(self):
        return len(self.positions)

    @property
    def total(self) -> Fraction:
        return Fraction(sum(self.weights), self.weight_unit)

    def __eq__(self, other):
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        return self.level == other.level and self.atoms() == other.atoms()

    def __hash__(self):
        return hash((self.level, tuple(self.atoms())))


def _merge(pairs) -> tuple:
    acc = {}
    for p, w in pairs:
        acc[p] = acc.get(p, 0) + w
    keys = sorted(acc)
    return tuple(keys), tuple(acc[k] for k in keys)


def refine(ifs: WeightedIFS, n: int, budget: int = DEFAULT_BUDGET) -> DiscreteMeasure:
    """Level-n atoms, built by appending letters: S_{sigma j}(0) =
    S_sigma(0) + r**len(sigma) d_j."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    s = _scales(ifs)
    pos, wts = (0,), (1,)
    for k in range(n):
        if len(pos) * len(s.c) > budget:
            raise BudgetExceeded(f"refinement beyond level {k} exceeds budget {budget}")
        ak = s.a ** k * s.b
        pos, wts = _merge((p * s.b + cj * ak, w * wj)
                          for p, w in zip(pos, wts) for cj, wj in zip(s.c, s.w))
    return DiscreteMeasure(n, pos, wts, s.M * s.b ** n, s.D ** n)


def pushforward(ifs: WeightedIFS, mu: DiscreteMeasure) -> DiscreteMeasure:
    """sum_j p_j (S_j)_* mu, i.e. one more step applied on the outside."""
    s = _scales(ifs)
    n = mu.level
    if mu.pos_unit != s.M * s.b ** n or mu.weight_unit != s.D ** n:
        raise ValueError("measure was not refined from this system")
    bn = s.b ** (n + 1)
    pos, wts = _merge((s.a * p + cj * bn, w * wj)
                      for cj, wj in zip(s.c, s.w) for p, w in zip(mu.positions, mu.weights))
    return DiscreteMeasure(n + 1, pos, wts, s.M * bn, s.D ** (n + 1))


def window_mass(ifs: WeightedIFS, lo, hi, n: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Level-n mass of atoms in [lo - r**n, hi].

    Atoms stand for the mass of S_sigma([0, 1]), so widening by one atom
    diameter on the left makes this an upper bound for mu([lo, hi]).
    Words whose image misses the window are pruned at every level.
    """
    s = _scales(ifs)
    lo, hi = Fraction(lo), Fraction(hi)
    left = lo - ifs.ratio ** n
    pos, wts = (0,), (1,)
    for k in range(n + 1):
        unit = s.M * s.b ** k
        lo_k, hi_k = left * unit, hi * unit
        span = s.a ** k * s.M  # image length at level k
        keep = [(p, w) for p, w in zip(pos, wts) if p + span >= lo_k and p <= hi_k]
        if k == n:
            return Fraction(sum(w for p, w in keep if p >= lo_k), s.D ** n)
        if len(keep) * len(s.c) > budget:
            raise BudgetExceeded(f"window refinement beyond level {k} exceeds budget {budget}")
        ak = s.a ** k * s.b
        pos, wts = _merge((p * s.b + cj * ak, w * wj)
                          for p, w in keep for cj, wj in zip(s.c, s.w))
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class Estimate:
    """Least-squares slope and its standard error."""

    value: float
    spread: float
    xs: tuple
    ys: tuple


def _fit(xs, ys) -> Estimate:
    xs, ys = np.asarray(xs, float), np.asarray(ys, float)
    if len(xs) < 2:
        raise ValueError("need at least two depths")
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    if len(xs) > 2:
        se = math.sqrt(resid @ resid / (len(xs) - 2) / ((xs - xs.mean()) @ (xs - xs.mean())))
    else:
        se = 0.0
    return Estimate(float(slope), se, tuple(xs), tuple(ys))


def default_depths(ifs: WeightedIFS) -> tuple:
    """(radius exponents, atom level) for :func:`empirical_local_dim`.

    The atom level sits three steps below the smallest radius so that the
    atom diameter is negligible against every window.
    """
    if ifs.alphabet_size <= 16:
        return range(5, 10), 12
    return range(3, 6), 6


def empirical_local_dim(ifs: WeightedIFS, x, depths: Optional[Sequence[int]] = None,
                        n: Optional[int] = None, budget: int = DEFAULT_BUDGET) -> Estimate:
    """Slope of log mu_n([x - r**m, x + r**m]) against log r**m over m in
    ``depths``."""
    dd, dn = default_depths(ifs)
    depths = list(depths if depths is not None else dd)
    if n is None:
        n = dn if max(depths) < dn else max(depths) + 3
    x = Fraction(x)
    r = ifs.ratio
    xs, ys = [], []
    for m in depths:
        rad = r ** m
        mass = window_mass(ifs, x - rad, x + rad, n, budget)
        if mass == 0:
            raise InsufficientMass(f"no mass near x = {x} at radius r^{m}")
        xs.append(m * math.log(r))
        ys.append(math.log(mass.numerator) - math.log(mass.denominator))
    return _fit(xs, ys)


# -- L^q spectrum ------------------------------------------------------------------

def _atoms_numpy(ifs: WeightedIFS, n: int, budget: int):
    """Level-n atoms as (integer positions, float weights) arrays."""
    s = _scales(ifs)
    c = np.array(s.c, dtype=np.int64)
    p = np.array([float(x) for x in ifs.probs])
    pos = np.zeros(1, dtype=np.int64)
    w = np.ones(1)
    if s.M * s.b ** n >= 2 ** 62:
        raise BudgetExceeded(f"positions at level {n} overflow 64-bit integers")
    for k in range(n):
        if len(pos) * len(c) > budget:
            raise BudgetExceeded(f"refinement beyond level {k} exceeds budget {budget}")
        new_pos = (pos[:, None] * s.b + c[None, :] * (s.a ** k * s.b)).ravel()
        new_w = (w[:, None] * p[None, :]).ravel()
        pos, inv = np.unique(new_pos, return_inverse=True)
        w = np.bincount(inv.ravel(), weights=new_w)
    return pos, w


def _net_endpoints(ifs: WeightedIFS, m: int, budget: int) -> np.ndarray:
    """Level-m net interval endpoints in units 1 / (M b**m)."""
    s = _scales(ifs)
    pos, _ = _atoms_numpy(ifs, m, budget)
    return np.unique(np.concatenate([pos, pos + s.a ** m * s.M]))


def lq_sum(ifs: WeightedIFS, q: float, m: int, n: int, budget: int = DEFAULT_BUDGET) -> float:
    """log sum over level-m net intervals of mu_n(interval)**q."""
    s = _scales(ifs)
    pos, w = _atoms_numpy(ifs, n, budget)
    ends = _net_endpoints(ifs, m, budget) * s.b ** (n - m)
    idx = np.searchsorted(ends, pos, side="right") - 1
    mass = np.bincount(idx, weights=w, minlength=len(ends))
    mass = mass[mass > 0]
    logs = q * np.log(mass)
    top = logs.max()
    return float(top + np.log(np.exp(logs - top).sum()))


def default_lq_depths(ifs: WeightedIFS) -> tuple:
    """(depths, atom level) for :func:`empirical_lq`."""
    if ifs.alphabet_size <= 16:
        return range(3, 8), 9
    return range(1, 4), 4


def empirical_lq(ifs: WeightedIFS, q: float, depths: Optional[Sequence[int]] = None,
                 n: Optional[int] = None, budget: int = DEFAULT_BUDGET) -> Estimate:
    """Slope of log sum mu_n(Delta)**q over level-m net intervals Delta
    against log r**m."""
    dd, dn = default_lq_depths(ifs)
    depths = list(depths if depths is not None else dd)
    n = n if n is not None else max(dn, max(depths))
    log_r = math.log(ifs.ratio)
    xs = [m * log_r for m in depths]
    ys = [lq_sum(ifs, q, m, n, budget) for m in depths]
    return _fit(xs, ys)
