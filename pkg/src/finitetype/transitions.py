"""Primitive transition matrices, exact path products, norms, spectral radii."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import DimensionMismatch, NonConvergence, StructureViolation


@dataclass(frozen=True)
class TransitionMatrix:
    """Nonnegative matrix with exact rational entries, stored row-major."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        if not rows or len({len(row) for row in rows}) != 1 or not rows[0]:
            raise DimensionMismatch("matrix rows must be non-empty and of equal length")
        object.__setattr__(self, "entries", rows)

    @property
    def shape(self):
        return len(self.entries), len(self.entries[0])

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __matmul__(self, other: "TransitionMatrix") -> "TransitionMatrix":
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries))
        return TransitionMatrix(tuple(
            tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols)
            for row in self.entries))

    def __pow__(self, n: int) -> "TransitionMatrix":
        return product([self] * n)

    def scale(self, c) -> "TransitionMatrix":
        return TransitionMatrix(tuple(tuple(c * x for x in row) for row in self.entries))

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])

    def integer_entries(self, denominator: int) -> np.ndarray:
        """Entries times ``denominator`` as an integer array (must be exact)."""
        out = np.zeros(self.shape, dtype=object)
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                y = x * denominator
                if y.denominator != 1:
                    raise ValueError(f"{x} * {denominator} is not an integer")
                out[i, j] = int(y)
        return out

    def is_triangular(self) -> bool:
        n, m = self.shape
        if n != m:
            return False
        e = self.entries
        upper = all(e[i][j] == 0 for i in range(n) for j in range(i))
        lower = all(e[i][j] == 0 for i in range(n) for j in range(i + 1, n))
        return upper or lower

    def format(self, common=None) -> str:
        """Grid of ``a/b`` strings, optionally factoring out 1/common."""
        if common is not None:
            body = [[str(x * common) if (x * common).denominator != 1 else str(int(x * common))
                     for x in row] for row in self.entries]
            prefix = f"(1/{common}) "
        else:
            body = [[str(x) for x in row] for row in self.entries]
            prefix = ""
        width = max(len(c) for row in body for c in row)
        lines = ["[" + " ".join(c.rjust(width) for c in row) + "]" for row in body]
        return prefix + ("\n" + " " * len(prefix)).join(lines)


def primitive(ifs, parent_neighbours: Sequence[Fraction], child_offset: Fraction,
              child_neighbours: Sequence[Fraction]) -> TransitionMatrix:
    """T(parent, child) in the parent's normalized coordinates.

    Entry (j, k) is p_l when -c_j + d_l == u - r * a_k, where c are the
    parent neighbours, a the child neighbours and u the child's left end.
    """
    r = ifs.ratio
    where = {d: l for l, d in enumerate(ifs.digits)}
    rows = []
    for c in parent_neighbours:
        row = []
        for a in child_neighbours:
            l = where.get(child_offset - r * a + c)
            row.append(ifs.probs[l] if l is not None else Fraction(0))
        rows.append(row)
    T = TransitionMatrix(rows)
    check_structure(T)
    return T


def check_structure(T: TransitionMatrix) -> None:
    e = T.entries
    for i, row in enumerate(e):
        if not any(row):
            raise StructureViolation(f"row {i} of transition matrix is zero")
    for j, col in enumerate(zip(*e)):
        if not any(col):
            raise StructureViolation(f"column {j} of transition matrix is zero")


def product(matrices: Sequence[TransitionMatrix]) -> TransitionMatrix:
    """Exact left-to-right product T_1 T_2 ... T_n."""
    matrices = list(matrices)
    if not matrices:
        raise DimensionMismatch("empty product has no defined shape")
    for a, b in zip(matrices, matrices[1:]):
        if a.shape[1] != b.shape[0]:
            raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return reduce(lambda a, b: a @ b, matrices)


def _rows(M):
    if isinstance(M, TransitionMatrix):
        return M.entries
    return [list(row) for row in M]


def entry_sum_norm(M):
    return sum((x for row in _rows(M) for x in row), Fraction(0))


def min_row_sum(M):
    return min(sum(row, Fraction(0)) for row in _rows(M))


def max_row_sum(M):
    return max(sum(row, Fraction(0)) for row in _rows(M))


def min_col_sum(M):
    return min(sum(col, Fraction(0)) for col in zip(*_rows(M)))


def max_col_sum(M):
    return max(sum(col, Fraction(0)) for col in zip(*_rows(M)))


# -- spectral radius -----------------------------------------------------------

def spectral_radius_exact(M):
    """Exact Perron root for 1x1 and triangular matrices, else ``None``."""
    if not isinstance(M, TransitionMatrix):
        M = TransitionMatrix(M)
    n, m = M.shape
    if n != m:
        raise DimensionMismatch(f"spectral radius of non-square {M.shape} matrix")
    if n == 1 or M.is_triangular():
        return max(M.entries[i][i] for i in range(n))
    return None


def perron_bounds(A: np.ndarray, tol: float = 1e-12, max_iter: int = 100_000):
    """Collatz-Wielandt enclosure [lo, hi] of the Perron root of an
    irreducible nonnegative matrix, tightened until hi - lo <= tol * hi.

    Iterates with A + I, which is primitive whenever A is irreducible, so
    periodic matrices converge too.
    """
    n = A.shape[0]
    x = np.ones(n)
    lo, hi = 0.0, np.inf
    for it in range(1, max_iter + 1):
        y = A @ x
        ratios = y / x
        lo, hi = max(lo, ratios.min()), min(hi, ratios.max())
        if hi - lo <= tol * hi:
            return lo, hi
        x = y + x
        x /= x.max()
        if not np.all(x > 0):
            break
    raise NonConvergence(tol, max_iter)


def spectral_radius(M, tol: float = 1e-12, max_iter: int = 100_000) -> float:
    """Largest eigenvalue modulus of a square nonnegative matrix.

    Exact for 1x1 and triangular input, closed form for 2x2, otherwise a
    certified power iteration on each irreducible diagonal block; ``tol``
    bounds the relative width of the enclosure.
    """
    if isinstance(M, TransitionMatrix) or not isinstance(M, np.ndarray):
        exact = spectral_radius_exact(M)
        if exact is not None:
            return float(exact)
        A = M.to_float() if isinstance(M, TransitionMatrix) else np.array(M, dtype=float)
    else:
        A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"spectral radius of non-square {A.shape} matrix")
    if np.any(A < 0):
        raise ValueError("matrix has negative entries")
    s = A.max()
    if s == 0:
        return 0.0
    A = A / s
    if A.shape[0] == 1:
        return float(A[0, 0] * s)
    if A.shape[0] == 2:
        a, b, c, d = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
        return float(((a + d) / 2 + np.sqrt(((a - d) / 2) ** 2 + b * c)) * s)
    ncomp, labels = connected_components(A > 0, directed=True, connection="strong")
    rho = 0.0
    for comp in range(ncomp):
        idx = np.flatnonzero(labels == comp)
        if len(idx) == 1:
            rho = max(rho, A[idx[0], idx[0]])
            continue
        lo, hi = perron_bounds(A[np.ix_(idx, idx)], tol, max_iter)
        rho = max(rho, (lo + hi) / 2)
    return float(rho * s)
