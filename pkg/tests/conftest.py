"""Fixtures compartidas: las funciones de transferencia de los ejemplos."""
import cmath
import math

import pytest

from posreal.config import DEFAULT_CONFIG, Config
from posreal.tf import from_coefficients, from_zeros_poles


def unit_pair(angle: float, r: float = 1.0) -> list:
    p = cmath.rect(r, angle)
    return [p, p.conjugate()]


@pytest.fixture
def config() -> Config:
    return DEFAULT_CONFIG


@pytest.fixture
def integrator():
    """1/(z - 1)"""
    return from_coefficients([1], [1, -1])


@pytest.fixture
def cube_roots():
    """1/(z^3 - 1): polos {1, exp(±i2π/3)}"""
    return from_coefficients([1], [1, 0, 0, -1])


@pytest.fixture
def fifth_roots_pair():
    """Polos {1, exp(±i4π/5)}"""
    return from_zeros_poles([], [1.0] + unit_pair(4 * math.pi / 5), 1.0)


@pytest.fixture
def two_positive_poles():
    """1/((z - 1)(z - 0.5))"""
    return from_zeros_poles([], [1.0, 0.5], 1.0)


@pytest.fixture
def three_real_poles():
    """Polos {1, 0.5, -0.3}: dos polos positivos"""
    return from_zeros_poles([], [1.0, 0.5, -0.3], 1.0)
