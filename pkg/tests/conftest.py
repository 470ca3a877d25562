"""Shared constructors for the test suite."""

import pytest

from qhcover.fields import GF, QQ
from qhcover.quiver import Arrow, QuiverPresentation, from_quiver


def make_am_algebra(m, field):
    """The bound quiver algebra with arrows i <-> i+1 and the zigzag relations."""
    if m == 1:
        return from_quiver(QuiverPresentation(1, [], []), field)
    arrows = []
    for i in range(m - 1):
        arrows.append(Arrow(f"a{i + 1}", i, i + 1))
    for i in range(m - 1):
        arrows.append(Arrow(f"b{i + 1}", i + 1, i))
    a_idx = lambda i: i - 1
    b_idx = lambda i: (m - 1) + i - 1
    relations = []
    for i in range(2, m):
        relations.append([(1, (a_idx(i), a_idx(i - 1)))])  # a_i a_{i-1} = 0
        relations.append([(1, (b_idx(i - 1), b_idx(i)))])  # b_{i-1} b_i = 0
    relations.append([(1, (b_idx(1), a_idx(1)))])  # b_1 a_1 = 0
    for i in range(2, m):
        # b_i a_i = a_{i-1} b_{i-1}
        relations.append([(1, (b_idx(i), a_idx(i))), (-1, (a_idx(i - 1), b_idx(i - 1)))])
    return from_quiver(QuiverPresentation(m, arrows, relations), field)


@pytest.fixture(scope="session")
def a2_gf3():
    return make_am_algebra(2, GF(3))


@pytest.fixture(scope="session")
def a3_gf3():
    return make_am_algebra(3, GF(3))


@pytest.fixture(scope="session")
def a2_qq():
    return make_am_algebra(2, QQ)
