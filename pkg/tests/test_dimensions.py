import functools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finitetype.classes import build
from finitetype.dimensions import (
    attainable_set,
    class_component,
    cycle_dims,
    default_lengths,
    local_dim,
    loop_attractor_dim,
    outer_interval,
    periodic_dim,
    periodic_dim_expr,
)
from finitetype.errors import BudgetExceeded, OverlapError
from finitetype.ifs import WeightedIFS
from finitetype.net import closure, periodic_paths

from conftest import r4_ifs

LOG4 = math.log(1 / 4)
D_END = math.log(1 / 164) / LOG4
D_MID = math.log(2 / 164) / LOG4


def self_edge(omega, vid):
    return next((vid, pos) for pos, (cid, _) in enumerate(omega.edges[vid]) if cid == vid)


def test_periodic_dims_of_loop_classes(omega4):
    assert periodic_dim(omega4, [self_edge(omega4, 1)]) == pytest.approx(D_END, abs=1e-12)
    assert periodic_dim(omega4, [self_edge(omega4, 7)]) == pytest.approx(D_MID, abs=1e-12)
    assert periodic_dim_expr(omega4, [self_edge(omega4, 7)]) == "log(1/82)/log(1/4)"


def test_doubled_cycle(omega4):
    e = self_edge(omega4, 7)
    assert periodic_dim(omega4, [e, e]) == pytest.approx(periodic_dim(omega4, [e]), abs=1e-12)
    assert periodic_dim_expr(omega4, [e, e]) == "log(1/6724)/(2*log(1/4))"


def test_cycle_must_close(omega4):
    with pytest.raises(ValueError):
        periodic_dim(omega4, [(0, 0)])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=4), st.integers(0, 3))
def test_essential_cycles_rotation_and_doubling(steps, shift):
    # v_5 (id 4) has four self-edges; any word in them is a cycle
    omega = _omega4()
    cyc = [(4, s) for s in steps]
    d = periodic_dim(omega, cyc)
    k = shift % len(cyc)
    assert periodic_dim(omega, cyc[k:] + cyc[:k]) == pytest.approx(d, abs=1e-12)
    assert periodic_dim(omega, cyc + cyc) == pytest.approx(d, abs=1e-12)
    assert 0.98 < d < 1.02


@functools.lru_cache(maxsize=None)
def _omega4():
    return closure(r4_ifs())


def test_local_dims_at_points(omega4):
    assert local_dim(omega4, 0) == pytest.approx(D_END, abs=1e-12)
    assert local_dim(omega4, 1) == pytest.approx(D_END, abs=1e-12)
    assert local_dim(omega4, F(1, 2)) == pytest.approx(D_MID, abs=1e-12)


def test_both_representations_agree(omega4):
    dims = [periodic_dim(omega4, p) for p in periodic_paths(omega4, F(1, 2))]
    assert len(dims) == 2
    assert abs(dims[0] - dims[1]) <= 1e-12


def test_essential_cycle_dims(graph4):
    ess = graph4.essential
    lo1, hi1 = cycle_dims(graph4, ess, 1)
    assert 0.983436074 <= lo1 <= hi1 <= 1.017811955
    lo3, hi3 = cycle_dims(graph4, ess, 3)
    # longer cycles include the shorter ones
    assert lo3 <= lo1 and hi3 >= hi1


@pytest.mark.parametrize("L", [1, 2, 4])
def test_outer_contains_inner_and_tightens(graph4, L):
    ess = graph4.essential
    inner = cycle_dims(graph4, ess, 4)
    o1 = outer_interval(graph4, ess, L)
    o2 = outer_interval(graph4, ess, 2 * L)
    assert o1[0] <= inner[0] and inner[1] <= o1[1]
    assert o1[0] <= o2[0] and o2[1] <= o1[1]


def test_budget_guard(graph4):
    with pytest.raises(BudgetExceeded):
        cycle_dims(graph4, graph4.essential, 6, budget=100)
    with pytest.raises(BudgetExceeded):
        outer_interval(graph4, graph4.essential, 8, budget=100)


def test_default_lengths(graph4, graph14):
    assert default_lengths(graph4, graph4.essential) == (8, 6)
    assert default_lengths(graph14, graph14.essential) == (4, 3)


def test_scalar_class_is_exact(graph4):
    comp = graph4.components[graph4.component_of[1]]
    dc = class_component(graph4, comp)
    assert dc.kind == "exact-point"
    assert dc.inner == dc.outer
    assert dc.inner[0] == pytest.approx(D_END, abs=1e-12)
    assert dc.expr == "log(1/164)/log(1/4)"


def test_attainable_set_r4(dimset4):
    kinds = sorted(c.kind for c in dimset4.components)
    assert kinds == ["bracketed-interval"] + ["exact-point"] * 4
    for c in dimset4.components:
        assert c.outer[0] <= c.inner[0] <= c.inner[1] <= c.outer[1]
    pieces = dimset4.pieces()
    assert len(pieces) == 3
    assert pieces[1].inner[0] == pytest.approx(D_MID, abs=1e-12)
    assert pieces[2].inner[0] == pytest.approx(D_END, abs=1e-12)
    assert dimset4.status == "disjoint"


def test_interval_class_of_multi14(graph14):
    # the class {c_2}: a single vertex with self-maps of weights 7/1150 and 5/1150
    log14 = math.log(1 / 14)
    want = (math.log(7 / 1150) / log14, math.log(5 / 1150) / log14)
    found = [class_component(graph14, c, Lc=2) for c in graph14.loop_classes(include_essential=False)]
    ivs = [c for c in found if c.kind == "exact-interval"]
    assert len(ivs) == 1
    assert ivs[0].inner == pytest.approx(want, abs=1e-12)


def test_uniform_and_weighted_single_vertex_systems():
    half = build(closure(WeightedIFS(F(1, 2), [0, F(1, 2)], [F(1, 2), F(1, 2)])))
    (c,) = attainable_set(half).components
    assert c.kind == "exact-point" and c.inner[0] == pytest.approx(1.0)
    third = build(closure(WeightedIFS(F(1, 3), [0, F(1, 3), F(2, 3)], [F(1, 4), F(1, 2), F(1, 4)])))
    (c,) = attainable_set(third).components
    assert c.kind == "exact-interval"
    assert c.inner == pytest.approx((math.log(2) / math.log(3), math.log(4) / math.log(3)))


def test_loop_attractor_dim():
    assert loop_attractor_dim([0], F(1, 14)) == 0.0
    assert loop_attractor_dim([F(104, 196), F(156, 196)], F(1, 14)) == pytest.approx(math.log(2) / math.log(14))
    assert loop_attractor_dim([0, F(1, 2), F(13, 14)], F(1, 14)) == pytest.approx(math.log(3) / math.log(14))
    with pytest.raises(OverlapError):
        loop_attractor_dim([0, F(1, 28)], F(1, 14))
