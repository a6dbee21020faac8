"""
Shared fixtures: small bounds, generator names and the repository root on sys.path.
"""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from modules.poly import Family, Polynomial, VarId  # noqa: E402
from modules.verify import Bounds  # noqa: E402


@pytest.fixture
def small_bounds():
    return Bounds(p_max=2, n_max=2, mk_max=1, w_max=3)


@pytest.fixture
def t():
    """t(j, a) -> the polynomial t^(j)_a."""
    return lambda j, a=1: Polynomial.var(VarId(Family.T, j, a))


@pytest.fixture
def u():
    return lambda j, a=1: Polynomial.var(VarId(Family.U, j, a))


@pytest.fixture
def pi():
    return Polynomial.pi_power(1)


@pytest.fixture
def repo_root():
    return ROOT
