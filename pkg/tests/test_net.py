from fractions import Fraction as F

import numpy as np
import pytest

from finitetype.errors import CapExceeded, DepthExceeded
from finitetype.ifs import WeightedIFS
from finitetype.net import children, closure, net_intervals, periodic_paths, root, symbolic, word_offsets

from conftest import R4_CHILDREN, R4_VECTORS, random_systems
from invariants import check_endpoint_refinement, check_tiling


def test_root_children_of_r4_example(ifs4):
    kids = children(ifs4, root())
    assert len(kids) == 16
    assert [k.offset for k in kids] == [F(j, 16) for j in range(16)]
    # v_5 appears four times; sibling indices count the repeats
    v5 = [k.vector.sibling for k in kids if k.vector.reduced == R4_VECTORS[4]]
    assert v5 == [1, 2, 3, 4]


def test_closure_order_and_children(omega4):
    assert [v.reduced for v in omega4.vectors] == R4_VECTORS
    for vid, expected in R4_CHILDREN.items():
        assert [c + 1 for c in omega4.child_ids(vid - 1)] == expected


def test_dump_format(omega4):
    lines = omega4.format().splitlines()
    assert lines[0] == "1  ell=1  V=(0)  children=[2,3,4,5,5,6,7,8,9,10,4,5,5,6,11,12]"
    assert lines[7] == "8  ell=1/4  V=(1/4, 3/4)  children=[5,6,7,8]"


def test_two_map_half_system_closes_on_the_root():
    ifs = WeightedIFS(F(1, 2), [0, F(1, 2)], [F(1, 2), F(1, 2)])
    om = closure(ifs)
    assert len(om) == 1
    assert om.child_ids(0) == [0, 0]


def test_cap_is_enforced(ifs4):
    with pytest.raises(CapExceeded):
        closure(ifs4, cap=5)


def test_word_offsets_level_one(ifs4):
    assert word_offsets(ifs4, 1) == sorted(ifs4.digits)


def test_net_intervals_match_closure(ifs4, omega4):
    check_tiling(ifs4, omega4, 5)


@pytest.mark.parametrize("ifs", random_systems(6, seed=7), ids=lambda s: f"R{s.ratio.denominator}-{len(s.digits)}")
def test_net_intervals_on_random_systems(ifs):
    check_tiling(ifs, closure(ifs), 4)
    counts = check_endpoint_refinement(ifs, 4)
    assert counts == [len(net_intervals(ifs, n)) for n in range(5)]


def test_symbolic_single_representation(omega4):
    (p,) = symbolic(omega4, 0, 5)
    assert [v + 1 for v in p.ids] == [1, 2, 2, 2, 2, 2]


def test_boundary_point_has_two_representations(omega4):
    paths = periodic_paths(omega4, F(1, 2))
    tails = sorted(p.ids[p.cycle_start] + 1 for p in paths)
    assert tails == [8, 9]
    assert all(p.period == 1 for p in paths)


def test_x_equal_one(omega4):
    (p,) = periodic_paths(omega4, 1)
    assert p.ids[p.cycle_start] + 1 == 12


def test_symbolic_rejects_points_outside(omega4):
    with pytest.raises(ValueError):
        symbolic(omega4, F(5, 4), 3)


def test_periodic_paths_depth_limit(omega4):
    with pytest.raises(DepthExceeded):
        periodic_paths(omega4, F(1, 3), max_depth=1)


def test_extend_unrolls_cycle(omega4):
    (p,) = periodic_paths(omega4, 0)
    q = p.extend(omega4, 10)
    assert len(q.steps) == 10 and set(q.ids[1:]) == {1}


def test_net_intervals_level_zero():
    ifs = WeightedIFS(F(1, 2), [0, F(1, 2)], [F(1, 2), F(1, 2)])
    (I,) = net_intervals(ifs, 0)
    assert (I.a, I.b) == (0, 1)
    with pytest.raises(ValueError):
        net_intervals(ifs, -1)


def test_random_tilings_cover_unit_interval():
    rng = np.random.default_rng(3)
    for ifs in random_systems(3, seed=int(rng.integers(1000))):
        ivs = net_intervals(ifs, 3)
        assert sum(I.b - I.a for I in ivs) == 1
