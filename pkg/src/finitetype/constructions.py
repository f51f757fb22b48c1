"""Generators for measures with prescribed isolated local-dimension pieces.

Both constructions use maps x/R + j/R**2, j = 0..R(R-1).  A few "block"
maps B_i generate small attractors K_i (points or Cantor sets); every other
map whose open image misses all K_i goes into the shared family A with a
common probability p*.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .classes import build
from .dimensions import attainable_set, loop_attractor_dim
from .errors import (
    CongruenceError,
    Infeasible,
    ParityError,
    ProbabilityError,
    RequirementViolation,
)
from .ifs import WeightedIFS, as_fraction, image_union_gaps, validate
from .net import DEFAULT_CAP, closure


@dataclass(frozen=True)
class BlockAttractor:
    """Attractor of maps x -> r x + d for d in ``digits``."""

    ratio: Fraction
    digits: tuple

    @property
    def hull(self) -> tuple:
        r = self.ratio
        return min(self.digits) / (1 - r), max(self.digits) / (1 - r)

    def meets(self, lo, hi, open_interval: bool = True) -> bool:
        """Whether the interval (lo, hi), or [lo, hi], meets the attractor.

        Exact: hull endpoints belong to the attractor, and a hull that
        straddles neither end of the interval is split into its images.
        """
        lo, hi = Fraction(lo), Fraction(hi)

        def inside(x):
            return lo < x < hi if open_interval else lo <= x <= hi

        h0, h1 = self.hull
        # pieces S_w(hull) as (scale, offset) of the word map S_w
        stack = [(Fraction(1), Fraction(0))]
        while stack:
            s, o = stack.pop()
            c, d = s * h0 + o, s * h1 + o
            if (hi <= c or lo >= d) if open_interval else (hi < c or lo > d):
                continue
            if inside(c) or inside(d):
                return True
            # the interval sits strictly inside (c, d) and misses both ends
            stack.extend((s * self.ratio, s * t + o) for t in self.digits)
        return False

    def dimension(self) -> float:
        return loop_attractor_dim(self.digits, self.ratio)


@dataclass
class ConstructionSpec:
    """Index partition and probabilities of a construction.

    ``blocks[i]`` holds the map indices of B_i (one or two of them) and
    ``block_probs[i]`` their probabilities in the same order.
    """

    kind: str
    R: int
    blocks: list
    block_probs: list
    a_indices: list
    p_star: Fraction

    @property
    def ratio(self) -> Fraction:
        return Fraction(1, self.R)

    def attractors(self) -> list:
        R2 = self.R * self.R
        return [BlockAttractor(self.ratio, tuple(Fraction(j, R2) for j in b)) for b in self.blocks]

    def indices(self) -> list:
        return sorted(self.a_indices + [j for b in self.blocks for j in b])

    def probabilities(self) -> dict:
        probs = {j: self.p_star for j in self.a_indices}
        for b, ps in zip(self.blocks, self.block_probs):
            probs.update(zip(b, ps))
        return probs

    def to_ifs(self) -> WeightedIFS:
        probs = self.probabilities()
        idx = self.indices()
        return WeightedIFS.from_indices(self.R, idx, [probs[j] for j in idx])

    def to_config(self) -> dict:
        from .ifs import format_fraction, ifs_to_config
        cfg = ifs_to_config(self.to_ifs())
        cfg["construction"] = {
            "kind": self.kind,
            "R": self.R,
            "blocks": [list(b) for b in self.blocks],
            "block_probs": [[format_fraction(p) for p in ps] for ps in self.block_probs],
            "a_indices": list(self.a_indices),
            "p_star": format_fraction(self.p_star),
        }
        return cfg

    @classmethod
    def from_config(cls, cfg: dict) -> "ConstructionSpec":
        c = cfg["construction"]
        return cls(c["kind"], int(c["R"]), [tuple(b) for b in c["blocks"]],
                   [tuple(as_fraction(p) for p in ps) for ps in c["block_probs"]],
                   list(c["a_indices"]), as_fraction(c["p_star"]))


def a_indices(R: int, blocks: Sequence[Sequence[int]]) -> list:
    """Indices j whose open image (j/R**2, j/R**2 + 1/R) misses every K_i,
    excluding the block maps themselves."""
    r = Fraction(1, R)
    R2 = R * R
    atts = [BlockAttractor(r, tuple(Fraction(j, R2) for j in b)) for b in blocks]
    used = {j for b in blocks for j in b}
    out = []
    for j in range(R * (R - 1) + 1):
        if j in used:
            continue
        lo = Fraction(j, R2)
        if not any(K.meets(lo, lo + r) for K in atts):
            out.append(j)
    return out


def _finish(kind, R, blocks, block_probs, p_star) -> ConstructionSpec:
    A = a_indices(R, blocks)
    block_probs = [tuple(as_fraction(p) for p in ps) for ps in block_probs]
    for b, ps in zip(blocks, block_probs):
        if len(ps) != len(b):
            raise ProbabilityError(f"block {b} needs {len(b)} probabilities, got {len(ps)}")
        if any(p <= 0 for p in ps):
            raise ProbabilityError(f"block probabilities must be positive, got {ps}")
    rest = 1 - sum(p for ps in block_probs for p in ps)
    if p_star is None:
        if not A:
            raise ProbabilityError("no shared maps to absorb the remaining mass")
        p_star = rest / len(A)
    else:
        p_star = as_fraction(p_star)
        if p_star * len(A) != rest:
            raise ProbabilityError(f"p* = {p_star} does not make the probabilities sum to 1")
    if p_star <= 0:
        raise ProbabilityError(f"block probabilities leave p* = {p_star} <= 0")
    first, last = block_probs[0][0], block_probs[-1][0]
    pmin = min([p_star] + [p for ps in block_probs for p in ps])
    if not first == last == pmin:
        raise ProbabilityError(
            f"end maps need equal, minimal probability; got {first}, {last}, min {pmin}")
    return ConstructionSpec(kind, R, [tuple(b) for b in blocks], block_probs, A, p_star)


def _scalars(block_probs) -> list:
    return [tuple(ps) if isinstance(ps, (tuple, list)) else (ps,) for ps in block_probs]


def multipoint_blocks(R: int) -> list:
    if R < 4 or R % 2:
        raise ParityError(f"multipoint construction needs an even R >= 4, got {R}")
    return [(2 * i * (R - 1),) for i in range(R // 2 + 1)]


def multiinterval_blocks(R: int) -> list:
    if R % 6 != 2:
        raise CongruenceError(f"multi-interval construction needs R = 2 mod 6, got {R}")
    if R < 14:
        raise CongruenceError(f"multi-interval construction needs R >= 14, got {R}")
    inner = [((6 * i - 4) * (R - 1), 6 * i * (R - 1)) for i in range(1, (R - 2) // 6 + 1)]
    return [(0,)] + inner + [(R * (R - 1),)]


def multipoint(R: int, block_probs: Sequence, p_star=None) -> tuple:
    """Isolated points 2i/R, i = 0..R/2, each with its own local dimension.

    ``block_probs`` lists p_{t_i} for t_i = 2i(R-1).  Returns (ifs, spec).
    """
    blocks = multipoint_blocks(R)
    probs = _scalars(block_probs)
    if len(probs) != len(blocks):
        raise ProbabilityError(f"expected {len(blocks)} block probabilities, got {len(probs)}")
    spec = _finish("multipoint", R, blocks, probs, p_star)
    return validate(spec.to_ifs()), spec


def multiinterval(R: int, block_probs: Sequence, p_star=None) -> tuple:
    """Cantor sets K_i on [(6i-4)/R, 6i/R] plus the end points 0 and 1.

    ``block_probs`` lists p_0, then (p_{t_i}, p_{s_i}) pairs, then
    p_{R(R-1)}.  Returns (ifs, spec).
    """
    blocks = multiinterval_blocks(R)
    probs = _scalars(block_probs)
    if len(probs) != len(blocks):
        raise ProbabilityError(f"expected {len(blocks)} block entries, got {len(probs)}")
    spec = _finish("multiinterval", R, blocks, probs, p_star)
    return validate(spec.to_ifs()), spec


# -- requirement checks ---------------------------------------------------------

@dataclass
class RequirementReport:
    """Outcome per requirement: 1 full support, 2 block sizes, 4 separation
    of map images from the K_i, 5 points outside every K_i are essential."""

    results: dict = field(default_factory=dict)

    def record(self, req: int, ok: bool, witness=None):
        self.results[req] = (ok, witness)

    @property
    def ok(self) -> bool:
        return all(ok for ok, _ in self.results.values())

    def failures(self) -> list:
        return [(req, w) for req, (ok, w) in sorted(self.results.items()) if not ok]


def _walk_classes(graph, atts, depth):
    """Net intervals down to ``depth`` levels, not entering the essential
    class; yields (component, [lo, hi]) for those in loop classes."""
    r = graph.omega.ifs.ratio
    stack = [(0, Fraction(0), Fraction(1), 0)]
    while stack:
        vid, a, scale, level = stack.pop()
        comp = graph.component_containing(vid)
        if comp.essential:
            continue
        if comp.loop:
            yield comp, (a, a + graph.omega.vectors[vid].length * scale)
        if level == depth:
            continue
        for cid, ch in graph.omega.edges[vid]:
            stack.append((cid, a + ch.offset * scale, scale * r, level + 1))


def _check_essential(graph, spec, depth):
    """Witness interval lying in a non-essential loop class but missing
    every K_i, or None."""
    atts = spec.attractors()
    for _, (lo, hi) in _walk_classes(graph, atts, depth):
        if not any(K.meets(lo, hi, open_interval=False) for K in atts):
            return (lo, hi)
    return None


def blocks_of_classes(graph, spec: ConstructionSpec, depth: int = 6) -> dict:
    """Map each non-essential maximal loop class to the blocks i whose K_i
    meets every net interval of that class seen within ``depth`` levels."""
    atts = spec.attractors()
    out = {}
    for comp, (lo, hi) in _walk_classes(graph, atts, depth):
        met = {i for i, K in enumerate(atts) if K.meets(lo, hi, open_interval=False)}
        out[comp.id] = out.get(comp.id, met) & met
    return {cid: sorted(ks) for cid, ks in sorted(out.items())}


def verify_requirements(ifs: WeightedIFS, spec: ConstructionSpec, depth: int = 6,
                        cap: int = DEFAULT_CAP, strict: bool = True) -> RequirementReport:
    """Check requirements 1, 2, 4 and 5; with ``strict`` the first failure
    raises :class:`RequirementViolation`."""
    report = RequirementReport()
    R2 = spec.R * spec.R
    r = spec.ratio

    def fail(req, witness):
        report.record(req, False, witness)
        if strict:
            raise RequirementViolation(req, witness)

    gaps = image_union_gaps(ifs)
    if gaps:
        fail(1, gaps[0])
    else:
        report.record(1, True)

    bad = [b for b in spec.blocks if len(b) not in (1, 2)]
    if bad:
        fail(2, bad[0])
    else:
        report.record(2, True)

    atts = spec.attractors()
    witness = None
    owners = [(j, None) for j in spec.a_indices] + [(j, i) for i, b in enumerate(spec.blocks) for j in b]
    for j, own in owners:
        lo = Fraction(j, R2)
        for i, K in enumerate(atts):
            if i != own and K.meets(lo, lo + r):
                witness = (j, i)
                break
        if witness:
            break
    if witness:
        fail(4, witness)
    else:
        report.record(4, True)

    w = _check_essential(build(closure(ifs, cap)), spec, depth)
    if w is not None:
        fail(5, w)
    else:
        report.record(5, True)
    return report


# -- probability selection -------------------------------------------------------

@dataclass
class Selection:
    ifs: WeightedIFS
    spec: ConstructionSpec
    dimset: object
    disjoint: bool


def _schedule(kind, R, targets, base):
    blocks = multipoint_blocks(R) if kind == "multipoint" else multiinterval_blocks(R)
    n_inner = len(blocks) - 2
    if targets is None:
        targets = list(range(n_inner))
    if len(targets) != n_inner:
        raise ValueError(f"expected {n_inner} targets for the interior blocks, got {len(targets)}")
    ranks = sorted(set(targets))
    depth = {t: k for k, t in enumerate(ranks)}
    half = Fraction(1, 2)
    width = 1 if kind == "multipoint" else 2
    probs = []
    for t in targets:
        k = depth[t] * width
        probs.append(tuple(base * half ** (k + m) for m in range(width)))
    end = base * half ** (len(ranks) * width)
    return blocks, [(end,)] + probs + [(end,)]


def select_probabilities(kind: str, R: int, targets: Optional[Sequence[int]] = None,
                         L: Optional[int] = None, Lc: Optional[int] = None,
                         max_rounds: int = 6) -> Selection:
    """Choose block probabilities below 1/#maps on a halving schedule.

    ``targets`` ranks the interior blocks (equal ranks give equal
    probabilities); end blocks always get the smallest, equal value.  The
    schedule is shifted down until the attainable set certifies that every
    interior block and the end points form separate pieces.
    """
    if kind not in ("multipoint", "multiinterval"):
        raise ValueError(f"unknown construction kind {kind!r}")
    blocks = multipoint_blocks(R) if kind == "multipoint" else multiinterval_blocks(R)
    n_maps = len(a_indices(R, blocks)) + sum(len(b) for b in blocks)
    base = Fraction(1, 2 * n_maps)
    n_inner = len(blocks) - 2
    distinct = targets is None or len(set(targets)) == n_inner
    for _ in range(max_rounds):
        _, probs = _schedule(kind, R, targets, base)
        build_fn = multipoint if kind == "multipoint" else multiinterval
        ifs, spec = build_fn(R, probs)
        dimset = attainable_set(build(closure(ifs)), L, Lc)
        want = n_inner + 2 if distinct else None
        pieces = dimset.pieces()
        if dimset.disjoint and (want is None or len(pieces) == want):
            return Selection(ifs, spec, dimset, distinct)
        if not distinct and dimset.disjoint:
            return Selection(ifs, spec, dimset, False)
        base /= 4
    raise Infeasible(f"no certified separation after {max_rounds} rounds at the configured L")
