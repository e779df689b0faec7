# -*- coding: utf-8 -*-
"""C_n 根系与指标测试"""

import pytest

from app.core.errors import UnsupportedError, UsageError
from app.services.roots import (Root, angle_case, enumerate_roots, index_order, parse_root, position,
                                reflect, root_of_position, root_position, succ)


def test_index_order_and_positions():
    assert index_order(3) == (1, 2, 3, -3, -2, -1)
    assert [position(k, 3) for k in index_order(3)] == list(range(6))


def test_successor():
    assert succ(3, 3) == -3
    assert succ(-2, 3) == -1
    with pytest.raises(UsageError):
        succ(-1, 3)


def test_root_count():
    roots = enumerate_roots(3)
    assert len(roots) == 18
    assert sum(r.is_long for r in roots) == 6


def test_position_map():
    assert root_of_position(1, 2, 3) == Root((1, -1, 0))
    assert root_of_position(1, -1, 3) == Root((2, 0, 0))
    assert root_of_position(-2, 1, 3) == Root((-1, -1, 0))
    # 镜像位置 (-j, -i) 对应同一个根
    assert root_of_position(2, 3, 3) == root_of_position(-3, -2, 3)


def test_root_position_round_trip():
    for alpha in enumerate_roots(3):
        i, j = root_position(alpha)
        assert root_of_position(i, j, 3) == alpha


def test_diagonal_position_rejected():
    with pytest.raises(UsageError):
        root_of_position(2, 2, 3)


def test_angle_cases():
    a = parse_root("e1-e2", 3)
    assert angle_case(a, parse_root("e2-e3", 3)) == "2pi/3"
    assert angle_case(a, parse_root("e1+e2", 3)) == "pi/2"
    assert angle_case(parse_root("2e1", 3), parse_root("e2-e1", 3)) == "long-short"
    assert angle_case(parse_root("e2-e1", 3), parse_root("2e1", 3)) == "short-long"
    assert angle_case(a, parse_root("2e3", 3)) == "commute"
    with pytest.raises(UnsupportedError):
        angle_case(a, -a)


def test_reflection():
    a = parse_root("e1-e2", 3)
    assert reflect(a, a) == -a
    assert reflect(a, parse_root("2e1", 3)) == parse_root("2e2", 3)


def test_parse_root_labels():
    for alpha in enumerate_roots(3):
        assert parse_root(alpha.label(), 3) == alpha
    with pytest.raises(UsageError):
        parse_root("e1+e1+e1", 3)
    with pytest.raises(UsageError):
        parse_root("e4", 3)
