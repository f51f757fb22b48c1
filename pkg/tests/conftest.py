from fractions import Fraction as F

import numpy as np
import pytest

from finitetype import attainable_set, build, closure, multiinterval
from finitetype.ifs import WeightedIFS

# R = 4 example: point blocks at 0, 1/2, 1 and eight shared maps
R4_INDICES = [0, 1, 2, 3, 4, 6, 8, 9, 10, 11, 12]
R4_PROBS = {0: F(1, 164), 6: F(2, 164), 12: F(1, 164)}

# (ell, V) of v_1 .. v_12 and their children, as printed
R4_VECTORS = [
    (F(1), (0,)),
    (F(1, 4), (0,)),
    (F(1, 4), (0, F(1, 4))),
    (F(1, 4), (0, F(1, 4), F(1, 2))),
    (F(1, 4), (0, F(1, 4), F(1, 2), F(3, 4))),
    (F(1, 4), (F(1, 4), F(1, 2), F(3, 4))),
    (F(1, 4), (0, F(1, 2), F(3, 4))),
    (F(1, 4), (F(1, 4), F(3, 4))),
    (F(1, 4), (0, F(1, 2))),
    (F(1, 4), (0, F(1, 4), F(3, 4))),
    (F(1, 4), (F(1, 2), F(3, 4))),
    (F(1, 4), (F(3, 4),)),
]
R4_CHILDREN = {
    1: [2, 3, 4, 5, 5, 6, 7, 8, 9, 10, 4, 5, 5, 6, 11, 12],
    2: [2, 3, 4, 5],
    3: [5, 5, 5, 5],
    4: [5, 5, 5, 5],
    5: [5, 5, 5, 5],
    6: [5, 5, 5, 5],
    7: [5, 5, 5, 5],
    8: [5, 6, 7, 8],
    9: [9, 10, 4, 5],
    10: [5, 5, 5, 5],
    11: [5, 5, 5, 5],
    12: [5, 6, 11, 12],
}

# R = 14 multi-interval system: block probabilities as (first, second) per Cantor block
R14_BLOCK_PROBS = [F(1, 1150), (F(3, 1150), F(3, 1150)), (F(7, 1150), F(5, 1150)), F(1, 1150)]


def r4_ifs():
    probs = [R4_PROBS.get(j, F(20, 164)) for j in R4_INDICES]
    return WeightedIFS.from_indices(4, R4_INDICES, probs)


@pytest.fixture(scope="session")
def ifs4():
    return r4_ifs()


@pytest.fixture(scope="session")
def omega4(ifs4):
    return closure(ifs4)


@pytest.fixture(scope="session")
def graph4(omega4):
    return build(omega4)


@pytest.fixture(scope="session")
def dimset4(graph4):
    return attainable_set(graph4)


@pytest.fixture(scope="session")
def multi14():
    return multiinterval(14, R14_BLOCK_PROBS)


@pytest.fixture(scope="session")
def graph14(multi14):
    return build(closure(multi14[0]))


@pytest.fixture(scope="session")
def dimset14(graph14):
    return attainable_set(graph14)


def random_system(rng, R=None):
    """A random valid finite-type system: ratio 1/R, digits on the grid
    1/R**2 containing both ends with gaps at most 1/R, and integer weights
    whose first and last are minimal."""
    R = R or int(rng.integers(2, 5))
    top = R * (R - 1)
    while True:
        inner = [j for j in range(1, top) if rng.random() < 0.5]
        idx = [0] + inner + [top]
        if all(b - a <= R for a, b in zip(idx, idx[1:])):
            break
    m = int(rng.integers(1, 4))
    w = [m] + [m + int(rng.integers(0, 4)) for _ in idx[1:-1]] + [m]
    total = sum(w)
    return WeightedIFS.from_indices(R, idx, [F(x, total) for x in w])


def random_systems(n=20, seed=20240607):
    rng = np.random.default_rng(seed)
    return [random_system(rng) for _ in range(n)]


# -- one PASS/FAIL line per acceptance criterion in the terminal summary --------

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _CRITERIA[report.nodeid.split("::")[-1]] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        terminalreporter.write_line(f"{_CRITERIA[name]}  {name}")
