"""Net intervals, characteristic vectors and the finite-type closure.

A net interval is handled in normalized coordinates: the interval itself is
[0, length] and the neighbour ``a`` stands for the map image
[-a, 1 - a] of a word of the same generation.
"""
from __future__ import annotations

import bisect
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import BudgetExceeded, CapExceeded, DepthExceeded
from .ifs import WeightedIFS, format_fraction
from .transitions import TransitionMatrix, primitive

DEFAULT_CAP = 10_000


@dataclass(frozen=True, order=True)
class CharacteristicVector:
    length: Fraction
    neighbours: tuple
    sibling: int = 1

    def __post_init__(self):
        object.__setattr__(self, "length", Fraction(self.length))
        object.__setattr__(self, "neighbours", tuple(Fraction(a) for a in self.neighbours))

    @property
    def reduced(self) -> tuple:
        return self.length, self.neighbours

    def reduce(self) -> "CharacteristicVector":
        return CharacteristicVector(self.length, self.neighbours, 1)

    def __str__(self):
        nb = ", ".join(format_fraction(a) for a in self.neighbours)
        return f"({format_fraction(self.length)}, ({nb}), {self.sibling})"


def root() -> CharacteristicVector:
    """Characteristic vector of [0, 1]."""
    return CharacteristicVector(Fraction(1), (Fraction(0),), 1)


@dataclass(frozen=True)
class Child:
    """One child of a net interval: vector, transition matrix, and the
    child's left end in the parent's normalized coordinates."""

    vector: CharacteristicVector
    matrix: TransitionMatrix
    offset: Fraction


def children(ifs: WeightedIFS, v: CharacteristicVector) -> list:
    """Children of a (reduced) characteristic vector, left to right."""
    r = ifs.ratio
    length, nbrs = v.length, v.neighbours
    cands = []
    for a in nbrs:
        for d in ifs.digits:
            e = d - a
            if e < length and e + r > 0:
                cands.append(e)
    cands = sorted(set(cands))
    cuts = {Fraction(0), length}
    for e in cands:
        for t in (e, e + r):
            if 0 < t < length:
                cuts.add(t)
    cuts = sorted(cuts)
    out = []
    seen = Counter()
    lo = 0
    for u, w in zip(cuts, cuts[1:]):
        # candidates are sorted by e; those covering [u, w] have e <= u
        while lo < len(cands) and cands[lo] + r < w:
            lo += 1
        hi = bisect.bisect_right(cands, u)
        new_nbrs = tuple(sorted((u - e) / r for e in cands[lo:hi] if e + r >= w))
        key = ((w - u) / r, new_nbrs)
        seen[key] += 1
        cv = CharacteristicVector(key[0], new_nbrs, seen[key])
        out.append(Child(cv, primitive(ifs, nbrs, u, new_nbrs), u))
    return out


@dataclass
class Omega:
    """Closure of the characteristic-vector graph from the root.

    ``vectors[i]`` is the reduced vector with id ``i`` (BFS order, root 0);
    ``edges[i]`` lists (child id, Child) for its children left to right.
    """

    ifs: WeightedIFS
    vectors: list
    edges: list
    index: dict = field(repr=False)

    def __len__(self):
        return len(self.vectors)

    def id_of(self, v) -> int:
        key = v.reduced if isinstance(v, CharacteristicVector) else tuple(v)
        return self.index[key]

    def child_ids(self, vid: int) -> list:
        return [cid for cid, _ in self.edges[vid]]

    def edge_list(self) -> list:
        """Canonically sorted (parent, child position, child id, matrix)."""
        return [(vid, pos, cid, ch.matrix)
                for vid, row in enumerate(self.edges)
                for pos, (cid, ch) in enumerate(row)]

    def format(self) -> str:
        lines = []
        for vid, v in enumerate(self.vectors):
            nb = ", ".join(format_fraction(a) for a in v.neighbours)
            kids = ",".join(str(c + 1) for c in self.child_ids(vid))
            lines.append(f"{vid + 1}  ell={format_fraction(v.length)}  V=({nb})  children=[{kids}]")
        return "\n".join(lines) + "\n"


def closure(ifs: WeightedIFS, cap: int = DEFAULT_CAP) -> Omega:
    """Breadth-first closure of ``children`` from the root."""
    start = root()
    vectors = [start]
    index = {start.reduced: 0}
    edges = [None]
    queue = deque([0])
    while queue:
        vid = queue.popleft()
        row = []
        for ch in children(ifs, vectors[vid]):
            key = ch.vector.reduced
            if key not in index:
                if len(vectors) >= cap:
                    raise CapExceeded(cap)
                index[key] = len(vectors)
                vectors.append(ch.vector.reduce())
                edges.append(None)
                queue.append(index[key])
            row.append((index[key], ch))
        edges[vid] = tuple(row)
    return Omega(ifs, vectors, edges, index)


# -- direct enumeration --------------------------------------------------------

@dataclass(frozen=True)
class NetInterval:
    level: int
    a: Fraction
    b: Fraction
    vector: CharacteristicVector
    vector_id: Optional[int] = None


def word_offsets(ifs: WeightedIFS, n: int, budget: int = 2_000_000) -> list:
    """Sorted distinct values of S_sigma(0) over all words of length n."""
    pts = {Fraction(0)}
    scale = Fraction(1)
    for _ in range(n):
        if len(pts) * ifs.alphabet_size > budget:
            raise BudgetExceeded(f"word enumeration exceeds budget {budget}")
        pts = {p + scale * d for p in pts for d in ifs.digits}
        scale *= ifs.ratio
    return sorted(pts)


def net_intervals(ifs: WeightedIFS, n: int, omega: Optional[Omega] = None,
                  budget: int = 2_000_000) -> list:
    """Level-n net intervals from first principles, with their vectors.

    Sibling indices come from grouping with the level n-1 intervals, so this
    is independent of :func:`children`.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    if n == 0:
        v = root()
        return [NetInterval(0, Fraction(0), Fraction(1), v, 0 if omega is not None else None)]
    parents = net_intervals(ifs, n - 1, None, budget)
    scale = ifs.ratio ** n
    offsets = word_offsets(ifs, n, budget)
    ends = sorted(set(offsets) | {p + scale for p in offsets})
    parent_lefts = [P.a for P in parents]
    out = []
    seen = Counter()
    for a, b in zip(ends, ends[1:]):
        lo = bisect.bisect_right(offsets, a - scale)
        hi = bisect.bisect_left(offsets, b)
        nbrs = tuple(sorted((a - p) / scale for p in offsets[lo:hi]))
        parent = bisect.bisect_right(parent_lefts, a) - 1
        key = (parent, (b - a) / scale, nbrs)
        seen[key] += 1
        v = CharacteristicVector(key[1], nbrs, seen[key])
        vid = omega.index.get(v.reduced) if omega is not None else None
        out.append(NetInterval(n, a, b, v, vid))
    return out


# -- symbolic representations ---------------------------------------------------

@dataclass(frozen=True)
class SymbolicPath:
    """Vertex ids from the root, the child position taken at each step, and
    (when detected) the periodic tail.

    ``ids[i + 1]`` is child ``steps[i]`` of ``ids[i]``.  When ``period`` is
    set, the steps from ``cycle_start`` on repeat with that period forever.
    """

    ids: tuple
    steps: tuple
    cycle_start: Optional[int] = None
    period: Optional[int] = None

    @property
    def is_periodic(self) -> bool:
        return self.period is not None

    def cycle_edges(self) -> list:
        """(vertex id, child position) pairs around one period."""
        if self.period is None:
            raise ValueError("path has no detected period")
        c = self.cycle_start
        return [(self.ids[i], self.steps[i]) for i in range(c, c + self.period)]

    def extend(self, omega: Omega, depth: int) -> "SymbolicPath":
        """Truncate, or unroll the cycle, to exactly ``depth`` steps."""
        if self.period is None or len(self.steps) >= depth:
            fits = self.period is not None and self.cycle_start + self.period <= depth
            return SymbolicPath(self.ids[:depth + 1], self.steps[:depth],
                                self.cycle_start if fits else None, self.period if fits else None)
        ids, steps = list(self.ids), list(self.steps)
        cyc = steps[self.cycle_start:self.cycle_start + self.period]
        i = 0
        while len(steps) < depth:
            s = cyc[i % len(cyc)]
            steps.append(s)
            ids.append(omega.edges[ids[-1]][s][0])
            i += 1
        return SymbolicPath(tuple(ids), tuple(steps), self.cycle_start, self.period)


def _walk(omega: Omega, x: Fraction, depth: int) -> list:
    r = omega.ifs.ratio
    done = []
    # partial paths: (ids, steps, relative position of x, state -> step)
    active = [([0], [], x, {(0, x): 0})]
    while active:
        ids, steps, y, seen = active.pop()
        if len(steps) >= depth:
            done.append(SymbolicPath(tuple(ids), tuple(steps)))
            continue
        hits = []
        for pos, (cid, ch) in enumerate(omega.edges[ids[-1]]):
            u = ch.offset
            if u <= y <= u + r * ch.vector.length:
                hits.append((pos, cid, (y - u) / r))
        for pos, cid, y2 in hits:
            ids2, steps2 = ids + [cid], steps + [pos]
            state = (cid, y2)
            if state in seen:
                done.append(SymbolicPath(tuple(ids2), tuple(steps2), seen[state],
                                         len(steps2) - seen[state]))
                continue
            seen2 = seen if len(hits) == 1 else dict(seen)
            seen2[state] = len(steps2)
            active.append((ids2, steps2, y2, seen2))
    done.sort(key=lambda p: p.steps)
    return done


def symbolic(omega: Omega, x, depth: int) -> list:
    """Symbolic representation(s) of x, ``depth`` levels deep.

    Returns one path, or two when x is a shared endpoint of two net
    intervals.  Paths whose (vertex, relative position of x) state repeats
    carry their detected period (``cycle_start``, ``period``).
    """
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"x = {x} outside [0, 1]")
    return [p.extend(omega, depth) for p in _walk(omega, x, depth)]


def periodic_paths(omega: Omega, x, max_depth: Optional[int] = None) -> list:
    """Representations of x with their periodic tails; raises if a tail is
    not found within ``max_depth`` (default 4 * |Omega| + 64)."""
    if max_depth is None:
        max_depth = 4 * len(omega) + 64
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"x = {x} outside [0, 1]")
    paths = _walk(omega, x, max_depth)
    for p in paths:
        if not p.is_periodic:
            raise DepthExceeded(f"no periodic tail for x = {x} within {max_depth} levels")
    return paths
