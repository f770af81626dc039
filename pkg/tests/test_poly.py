from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from posreal.errors import DegreeMismatch, InvalidInput, NonConjugateRoots
from posreal.poly import Polynomial, conv, conv_exact, divide, from_roots, refine_roots

coefficients = arrays(np.float64, st.integers(1, 6), elements=st.floats(-10, 10))


def test_conv_cube_roots():
    assert conv(Polynomial([1, -1]), Polynomial([1, 1, 1])).coeffs == (1.0, 0.0, 0.0, -1.0)


def test_conv_with_constant_is_scaling():
    assert conv(Polynomial([2]), Polynomial([1, 3])).coeffs == (2.0, 6.0)


@given(a=coefficients, b=coefficients)
def test_conv_length_and_commutativity(a, b):
    pa, pb = Polynomial(a), Polynomial(b)
    ab = conv(pa, pb)
    assert len(ab) == len(pa) + len(pb) - 1
    np.testing.assert_allclose(ab.array, conv(pb, pa).array, atol=1e-9)


@given(a=coefficients, b=coefficients, c=coefficients)
def test_conv_associativity(a, b, c):
    pa, pb, pc = Polynomial(a), Polynomial(b), Polynomial(c)
    left = conv(conv(pa, pb), pc).array
    right = conv(pa, conv(pb, pc)).array
    scale = max(1.0, float(np.max(np.abs(a))) * float(np.max(np.abs(b))) * float(np.max(np.abs(c))))
    np.testing.assert_allclose(left, right, atol=1e-12 * scale * 36)


def test_conv_exact_uses_fractions():
    out = conv_exact([Fraction(1), Fraction(-1, 3)], [Fraction(1), Fraction(1, 3)])
    assert out == [Fraction(1), Fraction(0), Fraction(-1, 9)]


def test_from_roots_real_pair():
    p = from_roots([1.0, 0.5])
    np.testing.assert_allclose(p.array, [1.0, -1.5, 0.5])


def test_from_roots_unit_cube_roots():
    roots = [1.0, np.exp(2j * np.pi / 3), np.exp(-2j * np.pi / 3)]
    np.testing.assert_allclose(from_roots(roots).array, [1, 0, 0, -1], atol=1e-12)


def test_from_roots_empty_is_one():
    assert from_roots([]).coeffs == (1.0,)


def test_from_roots_rejects_unpaired_complex():
    with pytest.raises(NonConjugateRoots):
        from_roots([1.0, 1j])


@settings(max_examples=50)
@given(
    reals=st.lists(st.floats(-2, 2), max_size=3),
    pairs=st.lists(st.tuples(st.floats(0.1, 2), st.floats(0.1, 3.0)), max_size=2),
)
def test_from_roots_recovers_roots(reals, pairs):
    roots = list(reals)
    for r, theta in pairs:
        roots += [r * np.exp(1j * theta), r * np.exp(-1j * theta)]
    if not roots:
        return
    p = from_roots(roots)
    assert p.is_monic()
    assert p.degree == len(roots)
    # Cada raíz pedida anula el polinomio (refinada con Newton)
    refined = refine_roots(p, roots)
    assert np.max(np.abs(p(refined))) <= 1e-6 * max(1.0, np.max(np.abs(p.array)))


def test_divide_exact():
    q, exact = divide(Polynomial([1, 0, 0, -1]), Polynomial([1, -1]))
    assert exact
    np.testing.assert_allclose(q.array, [1, 1, 1])


def test_divide_inexact_reports_remainder():
    q, exact = divide(Polynomial([1, 0, 1]), Polynomial([1, -1]))
    assert not exact
    np.testing.assert_allclose(q.array, [1, 1])


def test_divide_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        divide(Polynomial([1, -1]), Polynomial([1, 0, 1]))


@given(a=coefficients, b=coefficients)
def test_divide_undoes_conv(a, b):
    b = b.copy()
    b[0] = 1.0
    pa, pb = Polynomial(a), Polynomial(b)
    if not np.any(a):
        return
    q, exact = divide(conv(pa, pb), pb, rem_tol=1e-6)
    np.testing.assert_allclose(q.array, pa.array, atol=1e-6 * max(1.0, float(np.max(np.abs(a)))) * 10 ** pb.degree)


def test_polynomial_helpers():
    p = Polynomial([1, -1])
    assert p.shift(2).coeffs == (1.0, -1.0, 0.0, 0.0)
    assert Polynomial([0, 0, 3, 1]).trim().coeffs == (3.0, 1.0)
    assert p(1.0) == 0.0
    with pytest.raises(InvalidInput):
        Polynomial([])
