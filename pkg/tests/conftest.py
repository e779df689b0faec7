# -*- coding: utf-8 -*-
"""测试公共夹具: 内置环目录中的环与矩阵空间"""

import numpy as np
import pytest

from app.services.catalog import load_catalog
from app.services.ring_core import subring_generated
from app.services.symplectic import get_space


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def F2(catalog):
    return catalog.ring("F2")


@pytest.fixture(scope="session")
def F4(catalog):
    return catalog.ring("F4")


@pytest.fixture(scope="session")
def F2eps(catalog):
    return catalog.ring("F2eps")


@pytest.fixture(scope="session")
def F2xF2(catalog):
    return catalog.ring("F2xF2")


@pytest.fixture(scope="session")
def F2t3(catalog):
    return catalog.ring("F2t3")


@pytest.fixture(scope="session")
def eps(F2eps):
    return F2eps.parse("eps")


@pytest.fixture
def prime():
    """环的素子环 {0, 1}"""
    def make(ring):
        return subring_generated(ring, [])
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def space():
    return get_space
