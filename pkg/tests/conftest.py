import functools

import pytest

from weylscan import weyl
from weylscan.roots import build_root_system


@functools.lru_cache(maxsize=64)
def _rs(family, rank):
    return build_root_system(family, rank)


@functools.lru_cache(maxsize=16)
def _group(family, rank):
    return weyl.generate(_rs(family, rank))


@pytest.fixture
def rs():
    return _rs


@pytest.fixture
def group():
    return _group
