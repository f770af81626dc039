import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from posreal.config import DEFAULT_CONFIG
from posreal.errors import (
    CommonFactor,
    InvalidInput,
    NonpositiveDominantPole,
    NotMonic,
    NotNormalized,
    NotStrictlyProper,
)
from posreal.tf import (
    check_external_positivity,
    classify,
    distance,
    from_coefficients,
    from_zeros_poles,
    markov_parameters,
    normalize_dominant_pole,
    positive_poles,
    transfer_function_from_json,
)


def test_from_coefficients_pads_numerator(cube_roots):
    assert cube_roots.b.tolist() == [0.0, 0.0, 1.0]
    assert cube_roots.order == 3
    assert cube_roots.relative_degree == 3
    assert cube_roots.dominant_pole == 1


def test_poles_sorted_by_modulus():
    h = from_zeros_poles([], [0.3, -0.9, 1.0], 1.0)
    assert [round(p.real, 9) for p in h.poles] == [1.0, -0.9, 0.3]


@pytest.mark.parametrize(
    "b, a, error",
    [
        ([1], [2, -1], NotMonic),
        ([1, 0], [1, -1], NotStrictlyProper),
        ([1, -1], [1, -1.5, 0.5], CommonFactor),
        ([0], [1, -1], InvalidInput),
    ],
)
def test_from_coefficients_validation(b, a, error):
    with pytest.raises(error):
        from_coefficients(b, a)


def test_from_json_both_forms():
    h1 = transfer_function_from_json({"b": [1], "a": [1, -1.5, 0.5]})
    h2 = transfer_function_from_json({"zeros": [], "poles": [[1, 0], [0.5, 0]], "gain": 1})
    np.testing.assert_allclose(h1.a, h2.a)
    assert h1.to_json_dict() == {"b": [0.0, 1.0], "a": [1.0, -1.5, 0.5]}
    with pytest.raises(InvalidInput):
        transfer_function_from_json({"b": [1]})


def test_markov_parameters_integrator(integrator):
    seq = markov_parameters(integrator, 5)
    assert seq.values == (1.0, 1.0, 1.0, 1.0, 1.0)
    assert seq[1] == 1.0
    with pytest.raises(IndexError):
        seq[0]


def test_markov_parameters_periodic(cube_roots):
    assert markov_parameters(cube_roots, 7).values == (0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0)


@given(p=st.floats(0.05, 0.95), b=st.floats(0.1, 5))
def test_markov_parameters_first_order(p, b):
    h = from_coefficients([b], [1, -p])
    values = markov_parameters(h, 6).as_array()
    np.testing.assert_allclose(values, b * p ** np.arange(6), rtol=1e-12)


def test_normalize_example():
    h = from_coefficients([1], [1, -2])
    g, scale = normalize_dominant_pole(h)
    assert scale == 2.0
    np.testing.assert_allclose(g.a, [1, -1])
    np.testing.assert_allclose(g.b, [1])


def test_normalize_markov_relation():
    h = from_zeros_poles([0.2], [2.0, -1.0, 0.5], 3.0)
    g, scale = normalize_dominant_pole(h)
    assert g.is_normalized()
    T = 12
    h_t = markov_parameters(h, T).as_array()
    g_t = markov_parameters(g, T).as_array()
    np.testing.assert_allclose(g_t, h_t / scale ** np.arange(T), rtol=1e-10, atol=1e-12)


def test_normalize_rejects_nonpositive_dominant():
    with pytest.raises(NonpositiveDominantPole):
        normalize_dominant_pole(from_zeros_poles([], [-1.0, 0.5], 1.0))
    pair = [0.9 * np.exp(1j), 0.9 * np.exp(-1j)]
    with pytest.raises(NonpositiveDominantPole):
        normalize_dominant_pole(from_zeros_poles([], pair, 1.0))


def test_external_positivity(integrator, cube_roots):
    assert check_external_positivity(integrator)
    assert check_external_positivity(cube_roots)
    negative = from_zeros_poles([], [1.0, -0.5], -1.0)
    assert not check_external_positivity(negative)


def test_classify(fifth_roots_pair, three_real_poles):
    c = classify(fifth_roots_pair)
    assert c.positive_pole_count == 1
    assert c.in_M
    assert c.externally_positive
    assert classify(three_real_poles).positive_pole_count == 2
    assert not classify(three_real_poles).in_M
    assert c.to_json_dict()["horizon"] == 100


def test_classify_requires_normalization():
    with pytest.raises(NotNormalized):
        classify(from_coefficients([1], [1, -2]))


def test_positive_poles(two_positive_poles):
    assert sorted(p.real for p in positive_poles(two_positive_poles)) == [0.5, 1.0]


def test_distance_matches_poles():
    h = from_zeros_poles([], [1.0, 0.5, -0.5], 1.0)
    g = from_zeros_poles([], [1.0, -0.4, 0.5], 1.0)
    assert distance(h, g) == pytest.approx(0.1)
    assert distance(h, h) == pytest.approx(0.0)


def test_call_evaluates_ratio(integrator):
    assert integrator(3.0) == pytest.approx(0.5)
    assert math.isclose(abs(integrator(2j)), 1 / abs(2j - 1))


def random_stable_poles(rng: np.random.Generator, dominant: float, count: int) -> list:
    """Polos reales y pares conjugados con módulo menor que ``dominant``."""
    poles = []
    while len(poles) < count:
        r = rng.uniform(0.1, 0.9) * dominant
        if len(poles) + 2 <= count and rng.random() < 0.5:
            theta = rng.uniform(0.2, math.pi - 0.2)
            poles += [r * np.exp(1j * theta), r * np.exp(-1j * theta)]
        else:
            poles.append(-r if rng.random() < 0.5 else r)
    return poles


def test_leading_markov_parameters_vanish():
    rng = np.random.default_rng(4)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(0, n))
        poles = [1.0] + random_stable_poles(rng, 1.0, n - 1)
        zeros = list(rng.uniform(1.2, 2.0, size=m))
        h = from_zeros_poles(zeros, poles, float(rng.uniform(0.5, 2.0)))
        values = markov_parameters(h, n + 2).as_array()
        assert np.all(np.abs(values[: n - m - 1]) <= 1e-12)
        assert abs(values[n - m - 1]) > 1e-12


def test_normalize_markov_relation_random_systems():
    rng = np.random.default_rng(21)
    T = 30
    for _ in range(40):
        p1 = float(rng.uniform(0.5, 2.0))
        n = int(rng.integers(1, 6))
        poles = [p1] + random_stable_poles(rng, p1, n - 1)
        zeros = list(rng.uniform(-0.4, 0.4, size=int(rng.integers(0, n))) * p1)
        h = from_zeros_poles(zeros, poles, float(rng.uniform(0.5, 2.0)))
        g, scale = normalize_dominant_pole(h)
        assert scale == pytest.approx(p1)
        h_t = markov_parameters(h, T).as_array()
        g_t = markov_parameters(g, T).as_array()
        expected = h_t / scale ** np.arange(T)
        np.testing.assert_allclose(g_t, expected, rtol=1e-8, atol=1e-10 * np.max(np.abs(expected)))


def test_classify_stable_under_small_pole_moves():
    config = DEFAULT_CONFIG
    delta = 0.4 * config.axis_tol
    rng = np.random.default_rng(9)
    base = [1.0, -0.6, 0.5 * np.exp(2j), 0.5 * np.exp(-2j)]
    expected = classify(from_zeros_poles([], base, 1.0)).in_M
    for _ in range(20):
        angle = float(rng.uniform(-delta, delta))
        moved = [
            1.0,
            -0.6 + float(rng.uniform(-delta, delta)),
            (0.5 + delta) * np.exp(1j * (2 + angle)),
            (0.5 + delta) * np.exp(-1j * (2 + angle)),
        ]
        assert classify(from_zeros_poles([], moved, 1.0)).in_M == expected
    with_second = from_zeros_poles([], [1.0, 0.4 + delta, -0.6], 1.0)
    assert not classify(with_second).in_M
