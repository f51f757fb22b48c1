"""Weighted equicontractive iterated function systems on [0, 1].

Every quantity here is an exact :class:`fractions.Fraction`; floating point
only enters downstream, in logarithms and spectral radii.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence

import yaml

from .errors import (
    HullViolation,
    IFSValidationError,
    ProbabilitySum,
    StandardAssumptionViolation,
    SupportGap,
)


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"a/b"`` strings; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class AffineMap:
    """x -> scale * x + offset."""

    scale: Fraction
    offset: Fraction

    def __call__(self, x):
        return self.scale * x + self.offset

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        # (self @ other)(x) == self(other(x))
        return AffineMap(self.scale * other.scale, self.scale * other.offset + self.offset)


@dataclass(frozen=True)
class WeightedIFS:
    """Maps S_j(x) = ratio * x + digits[j] with probabilities probs[j].

    Construction only normalizes types; call :func:`validate` (or
    :meth:`checked`) before feeding an instance to the analysis code.
    """

    ratio: Fraction
    digits: tuple
    probs: tuple

    def __post_init__(self):
        object.__setattr__(self, "ratio", as_fraction(self.ratio))
        object.__setattr__(self, "digits", tuple(as_fraction(d) for d in self.digits))
        object.__setattr__(self, "probs", tuple(as_fraction(p) for p in self.probs))
        if len(self.digits) != len(self.probs):
            raise ValueError(f"{len(self.digits)} digits but {len(self.probs)} probabilities")
        if len(self.digits) < 2:
            raise ValueError("an IFS needs at least two maps")
        if not 0 < self.ratio < 1:
            raise ValueError(f"contraction ratio must lie in (0, 1), got {self.ratio}")

    @property
    def alphabet_size(self) -> int:
        return len(self.digits)

    @property
    def k(self) -> int:
        return len(self.digits) - 1

    @property
    def min_prob(self) -> Fraction:
        return min(self.probs)

    def map(self, j: int) -> AffineMap:
        return AffineMap(self.ratio, self.digits[j])

    def checked(self) -> "WeightedIFS":
        return validate(self)

    @classmethod
    def from_indices(cls, R: int, indices: Sequence[int], probs: Sequence) -> "WeightedIFS":
        """Maps x/R + j/R**2 for j in ``indices``."""
        R = int(R)
        return cls(Fraction(1, R), [Fraction(j, R * R) for j in indices], probs)


def violations(ifs: WeightedIFS) -> list:
    """Every violated invariant of ``ifs``, in a stable order."""
    found = []
    d, p, r = ifs.digits, ifs.probs, ifs.ratio
    for j in range(1, len(d)):
        if d[j] <= d[j - 1]:
            found.append(HullViolation(j, f"digits not strictly increasing ({d[j - 1]} >= {d[j]})"))
    if d[0] != 0:
        found.append(HullViolation(0, f"first digit must be 0, got {d[0]}"))
    if d[-1] != 1 - r:
        found.append(HullViolation(ifs.k, f"last digit must be 1 - r = {1 - r}, got {d[-1]}"))
    for j in range(1, len(d)):
        if d[j] - d[j - 1] > r:
            found.append(SupportGap(j, f"gap {d[j] - d[j - 1]} between digits {j - 1} and {j} exceeds r = {r}"))
    for j, pj in enumerate(p):
        if pj <= 0:
            found.append(ProbabilitySum(j, f"probability {pj} is not positive"))
    total = sum(p)
    if total != 1:
        found.append(ProbabilitySum("all", f"probabilities sum to {total}, not 1"))
    pmin = min(p)
    for j in (0, ifs.k):
        if p[j] != pmin:
            found.append(StandardAssumptionViolation(j, f"p_{j} = {p[j]} but min p = {pmin}"))
    return found


def validate(ifs: WeightedIFS) -> WeightedIFS:
    """Return ``ifs`` unchanged if every invariant holds.

    A single violation is raised as its own class; several are bundled into
    an :class:`IFSValidationError` listing all of them.
    """
    found = violations(ifs)
    if len(found) == 1:
        raise found[0]
    if found:
        raise IFSValidationError(found)
    return ifs


def check_word(ifs: WeightedIFS, word: Iterable[int]) -> tuple:
    word = tuple(int(w) for w in word)
    for w in word:
        if not 0 <= w < ifs.alphabet_size:
            raise ValueError(f"letter {w} outside alphabet of size {ifs.alphabet_size}")
    return word


def compose(ifs: WeightedIFS, word: Iterable[int]) -> tuple:
    """The map S_w = S_{w_1} o ... o S_{w_n} and its weight p_w."""
    word = check_word(ifs, word)
    offset = Fraction(0)
    scale = Fraction(1)
    for letter in word:
        offset += scale * ifs.digits[letter]
        scale *= ifs.ratio
    weight = prod((ifs.probs[w] for w in word), start=Fraction(1))
    return AffineMap(scale, offset), weight


def image_union_gaps(ifs: WeightedIFS) -> list:
    """Uncovered open gaps of the union of S_j([0, 1]) inside [0, 1]."""
    images = sorted((d, d + ifs.ratio) for d in ifs.digits)
    gaps = []
    reach = Fraction(0)
    for lo, hi in images:
        if lo > reach:
            gaps.append((reach, lo))
        reach = max(reach, hi)
    if reach < 1:
        gaps.append((reach, Fraction(1)))
    return gaps


# -- config files ------------------------------------------------------------

def ifs_from_config(cfg: dict) -> WeightedIFS:
    """Build an IFS from a parsed config mapping.

    Keys: ``R`` (integer) or ``ratio`` ("a/b"); ``digits`` as rationals, or
    as integers meaning j/R**2 when ``R`` is given; ``probs`` as rationals.
    """
    if "probs" not in cfg or "digits" not in cfg:
        raise ValueError("config needs 'digits' and 'probs'")
    if "R" in cfg:
        R = int(cfg["R"])
        ratio = Fraction(1, R)
        digits = [Fraction(d, R * R) if isinstance(d, int) else as_fraction(d) for d in cfg["digits"]]
    elif "ratio" in cfg:
        ratio = as_fraction(cfg["ratio"])
        digits = [as_fraction(d) for d in cfg["digits"]]
    else:
        raise ValueError("config needs 'R' or 'ratio'")
    return WeightedIFS(ratio, digits, [as_fraction(p) for p in cfg["probs"]])


def ifs_to_config(ifs: WeightedIFS) -> dict:
    cfg = {}
    R = 1 / ifs.ratio
    if R.denominator == 1 and all((d * R * R).denominator == 1 for d in ifs.digits):
        cfg["R"] = int(R)
        cfg["digits"] = [int(d * R * R) for d in ifs.digits]
    else:
        cfg["ratio"] = format_fraction(ifs.ratio)
        cfg["digits"] = [format_fraction(d) for d in ifs.digits]
    cfg["probs"] = [format_fraction(p) for p in ifs.probs]
    return cfg


def load_config(path) -> dict:
    with open(path) as fh:
        cfg = yaml.safe_load(fh)
    if not isinstance(cfg, dict):
        raise ValueError(f"{path}: expected a mapping at top level")
    return cfg


def dump_config(cfg: dict, path=None) -> str:
    text = yaml.safe_dump(cfg, sort_keys=False, default_flow_style=None, width=100)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text

