"""Criterios de aceptación de extremo a extremo."""
import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from posreal.compound import CompoundMode, compound_realize
from posreal.config import DEFAULT_CONFIG
from posreal.markov import (
    find_certificate,
    find_certificate_for_denominator,
    minimal_markov_dimension,
    realize,
    verify_realization,
)
from posreal.poly import Polynomial, conv, from_roots
from posreal.regions import GridSpec, nesting_check, scan
from posreal.tf import check_external_positivity, from_zeros_poles
from posreal.theory import (
    PoleAngle,
    RationalPoleAngles,
    certify_exact_minimality,
    check_divisibility_condition,
    lemma1_transform,
    perturb_to_rational,
    theorem_certificate,
    theorem_for_transfer_function,
)

UNIT = Polynomial([1.0, -1.0])


def assert_oracle(h, N, cert):
    ss = realize(h, cert)
    assert ss.dimension == N
    assert ss.min_entry() >= -1e-9
    assert verify_realization(ss, h, horizon=2 * N, tol=1e-8)


def test_trivial_realization(integrator):
    N, cert = minimal_markov_dimension(integrator)
    ss = realize(integrator, cert)
    assert N == 1
    assert ss.A.tolist() == [[1.0]] and ss.B.tolist() == [1.0] and ss.C.tolist() == [1.0]


def test_rational_angle_exact_case(cube_roots):
    N, cert = minimal_markov_dimension(cube_roots)
    assert N == 3
    np.testing.assert_allclose(cert.q.array, [1.0])
    assert certify_exact_minimality(cube_roots, N)
    assert_oracle(cube_roots, N, cert)


def random_theorem_angles(rng: np.random.Generator) -> RationalPoleAngles:
    n_p = int(rng.integers(2, 5))
    magnitudes = np.sort(rng.uniform(0.3, 0.95, size=n_p - 1))[::-1]
    entries = [PoleAngle(1.0, 0, 1)]
    product = 1
    for r in magnitudes:
        options = [m for m in range(2, 61) if product % m != 0 and product * m <= 60]
        if not options:
            break
        m = int(rng.choice(options))
        l = int(rng.choice([l for l in range(1, m // 2 + 1) if math.gcd(l, m) == 1]))
        entries.append(PoleAngle(float(r), l, m))
        product *= m
    return RationalPoleAngles(tuple(entries))


@pytest.mark.slow
def test_theorem_end_to_end():
    rng = np.random.default_rng(20240501)
    for _ in range(500):
        angles = random_theorem_angles(rng)
        assert check_divisibility_condition(angles)
        a_hat = angles.a_hat()
        a = conv(UNIT, a_hat)
        cert = theorem_certificate(angles, a_hat)
        assert cert.N == math.prod(angles.denominators)
        assert np.max(cert.feasibility_certificate().convolution(a)) <= 1e-9
        assert find_certificate_for_denominator(a, cert.N) is not None


def test_minimality_on_the_circle(fifth_roots_pair):
    assert find_certificate(fifth_roots_pair, 3) is None
    assert find_certificate(fifth_roots_pair, 4) is None
    cert = find_certificate(fifth_roots_pair, 5)
    assert cert is not None
    assert certify_exact_minimality(fifth_roots_pair, 5)
    assert_oracle(fifth_roots_pair, 5, cert)


@pytest.mark.slow
def test_two_positive_poles_never_feasible():
    rng = np.random.default_rng(5)
    for _ in range(200):
        second = rng.uniform(0.2, 0.8)
        others = []
        for _ in range(int(rng.integers(0, 3))):
            r, theta = rng.uniform(0.1, 0.9), rng.uniform(0.3, math.pi)
            others += [r * np.exp(1j * theta), r * np.exp(-1j * theta)]
        a = from_roots([1.0, second, *others])
        for N in range(a.degree, 26):
            assert find_certificate_for_denominator(a, N) is None


def test_lemma1_equivalence():
    rng = np.random.default_rng(99)
    for k in range(1000):
        if k % 2:
            a_hat = Polynomial(np.concatenate([[1.0], rng.uniform(-1, 1, size=rng.integers(1, 5))]))
            q = Polynomial(np.concatenate([[1.0], rng.uniform(-1, 1, size=rng.integers(0, 5))]))
        else:
            # Â con coeficientes no negativos no crecientes
            a_hat = Polynomial(np.concatenate([[1.0], np.sort(rng.uniform(0, 1, size=rng.integers(1, 5)))[::-1]]))
            q = Polynomial([1.0]).shift(int(rng.integers(0, 3)))
        a = conv(UNIT, a_hat)
        aq = conv(a, q).array[1:]
        _, ok = lemma1_transform(a, q, feas_tol=1e-10)
        assert ok == bool(np.max(aq) <= 1e-10)


@pytest.mark.slow
def test_region_nesting():
    grid = GridSpec(steps=101)
    s3, s4, s5 = (scan(N, grid) for N in (3, 4, 5))
    assert nesting_check(s3, s4)
    assert nesting_check(s4, s5)
    assert nesting_check(s3, s5)


def test_oracle_on_feasible_instances():
    rng = np.random.default_rng(3)
    for _ in range(20):
        r, theta = rng.uniform(0.2, 0.9), rng.uniform(0.5, math.pi)
        h = from_zeros_poles([], [1.0, r * np.exp(1j * theta), r * np.exp(-1j * theta)], 1.0)
        found = minimal_markov_dimension(h, n_max=40)
        if found is None or not check_external_positivity(h):
            continue
        N, cert = found
        assert_oracle(h, N, cert)


def perturbed_system(angles: RationalPoleAngles):
    return from_zeros_poles([], [1.0] + angles.poles(), 1.0)


@seed(17)
@settings(max_examples=100, deadline=None)
@given(
    thetas=st.lists(st.floats(0.1, math.pi), min_size=1, max_size=2),
    magnitudes=st.lists(st.floats(0.2, 0.95), min_size=2, max_size=2, unique=True),
)
def test_perturbation_coarse(thetas, magnitudes):
    eps = 1e-2
    r = sorted(magnitudes, reverse=True)[: len(thetas)]
    angles = perturb_to_rational([0.0] + thetas, [1.0] + r, eps)
    assert check_divisibility_condition(angles)
    assert max(abs(e.angle - t) for e, t in zip(angles.entries[1:], thetas)) <= eps

    config = DEFAULT_CONFIG.with_overrides(max_denominator=10**6)
    cert = theorem_for_transfer_function(perturbed_system(angles), config)
    assert cert is not None
    assert cert.N == math.prod(angles.denominators)


@seed(23)
@settings(max_examples=100, deadline=None)
@given(theta=st.floats(0.1, math.pi), r=st.floats(0.2, 0.95))
def test_perturbation_fine(theta, r):
    eps = 1e-4
    angles = perturb_to_rational([0.0, theta], [1.0, r], eps)
    assert check_divisibility_condition(angles)
    assert abs(angles.entries[1].angle - theta) <= eps

    config = DEFAULT_CONFIG.with_overrides(max_denominator=10**6)
    cert = theorem_for_transfer_function(perturbed_system(angles), config)
    assert cert is not None
    assert cert.N == angles.entries[1].m


def test_compound_acceptance(two_positive_poles):
    result = compound_realize(two_positive_poles)
    assert result.plan.mode is CompoundMode.SERIES
    assert result.realization.dimension == 2
    assert result.realization.is_positive()
    assert verify_realization(result.realization, two_positive_poles, horizon=40, tol=1e-9)
    assert compound_realize(two_positive_poles, modes=(CompoundMode.PARALLEL,)) is None
