from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitetype.errors import (
    HullViolation,
    IFSValidationError,
    ProbabilitySum,
    StandardAssumptionViolation,
    SupportGap,
)
from finitetype.ifs import (
    WeightedIFS,
    as_fraction,
    compose,
    dump_config,
    ifs_from_config,
    ifs_to_config,
    image_union_gaps,
    validate,
)

from conftest import r4_ifs


def test_as_fraction_rejects_floats():
    assert as_fraction("3/16") == F(3, 16)
    assert as_fraction(2) == F(2)
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        as_fraction(True)


def test_r4_example_is_valid(ifs4):
    assert validate(ifs4) is ifs4
    assert ifs4.alphabet_size == 11
    assert sum(ifs4.probs) == 1
    assert ifs4.min_prob == F(1, 164)


@pytest.mark.parametrize("ratio, digits, probs, exc", [
    (F(1, 4), [0, F(1, 4), F(1, 2)], [F(1, 3)] * 3, HullViolation),          # last digit is not 1 - r
    (F(1, 2), [0, F(1, 2)], [F(1, 4), F(1, 4)], ProbabilitySum),              # sum is 1/2
    (F(1, 4), [0, F(1, 4), F(3, 4)], [F(1, 4), F(1, 2), F(1, 4)], SupportGap),  # gap 1/2 > r
    (F(1, 2), [0, F(1, 8), F(1, 2)], [F(1, 8), F(1, 2), F(3, 8)], StandardAssumptionViolation),
])
def test_single_violation_raises_its_class(ratio, digits, probs, exc):
    with pytest.raises(exc):
        validate(WeightedIFS(ratio, digits, probs))


def test_several_violations_are_bundled():
    bad = WeightedIFS(F(1, 4), [0, F(3, 4)], [F(1, 3), F(1, 3)])
    with pytest.raises(IFSValidationError) as info:
        validate(bad)
    kinds = {type(v) for v in info.value.violations}
    assert SupportGap in kinds and ProbabilitySum in kinds


def test_constructor_rejects_bad_shapes():
    with pytest.raises(ValueError):
        WeightedIFS(F(1, 2), [0, F(1, 2)], [F(1)])
    with pytest.raises(ValueError):
        WeightedIFS(F(3, 2), [0, F(1, 2)], [F(1, 2), F(1, 2)])


def test_compose_matches_hand_computation(ifs4):
    # S_6 o S_12 (x) = (x/4 + 12/16)/4 + 6/16
    S, p = compose(ifs4, [5, 10])
    assert S.scale == F(1, 16)
    assert S.offset == F(6, 16) + F(12, 64)
    assert p == F(2, 164) * F(1, 164)
    with pytest.raises(ValueError):
        compose(ifs4, [11])


def test_full_support(ifs4):
    assert image_union_gaps(ifs4) == []
    gappy = WeightedIFS(F(1, 4), [0, F(3, 4)], [F(1, 2), F(1, 2)])
    assert image_union_gaps(gappy) == [(F(1, 4), F(3, 4))]


def test_config_round_trip(tmp_path, ifs4):
    cfg = ifs_to_config(ifs4)
    assert cfg["R"] == 4 and cfg["digits"] == [0, 1, 2, 3, 4, 6, 8, 9, 10, 11, 12]
    path = tmp_path / "c.yaml"
    dump_config(cfg, path)
    from finitetype.ifs import load_config
    assert ifs_from_config(load_config(path)) == ifs4


def test_config_with_explicit_ratio():
    cfg = {"ratio": "1/3", "digits": ["0", "1/3", "2/3"], "probs": ["1/3", "1/3", "1/3"]}
    ifs = ifs_from_config(cfg)
    assert ifs.ratio == F(1, 3)
    assert ifs_from_config(ifs_to_config(ifs)) == ifs


@given(st.lists(st.integers(1, 50), min_size=2, max_size=6))
def test_weights_round_trip_exactly(ws):
    w = [min(ws)] + sorted(ws)[1:-1] + [min(ws)]
    total = sum(w)
    k = len(w) - 1
    ifs = WeightedIFS(F(1, k + 1), [F(j, k + 1) for j in range(k + 1)], [F(x, total) for x in w])
    validate(ifs)
    assert ifs_from_config(ifs_to_config(ifs)) == ifs


def test_example_builder_matches_fixture(ifs4):
    assert r4_ifs() == ifs4
