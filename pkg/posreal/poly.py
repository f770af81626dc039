"""
Aritmética de polinomios densos con coeficientes reales.

Los coeficientes se guardan en potencias descendentes: ``coeffs[0]`` es el
coeficiente principal, igual que la indexación a_0..a_n de las secuencias de
coeficientes (a*q)_k usadas en el programa lineal.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from posreal.errors import DegreeMismatch, InvalidInput, NonConjugateRoots

CONJ_TOL = 1e-9
REM_TOL = 1e-9

Number = Union[int, float, Fraction]


@dataclass(frozen=True, init=False)
class Polynomial:
    """
    Polinomio real en potencias descendentes.

    Example:
        >>> Polynomial([1, -1])          # z - 1
        >>> Polynomial([1, 0, 0, -1])    # z^3 - 1
    """

    coeffs: tuple

    def __init__(self, coeffs: Iterable[float]):
        values = tuple(float(c) for c in np.asarray(coeffs, dtype=float).ravel())
        if not values:
            raise InvalidInput("Un polinomio necesita al menos un coeficiente")
        object.__setattr__(self, "coeffs", values)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[0]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)

    def is_monic(self, tol: float = 0.0) -> bool:
        return abs(self.coeffs[0] - 1.0) <= tol

    def shift(self, k: int) -> "Polynomial":
        """Multiplica por z^k."""
        return Polynomial(self.coeffs + (0.0,) * k)

    def trim(self) -> "Polynomial":
        """Quita los ceros principales (deja al menos un coeficiente)."""
        arr = np.trim_zeros(self.array, "f")
        return Polynomial(arr if arr.size else [0.0])

    def roots(self) -> np.ndarray:
        """Raíces por autovalores de la matriz compañera."""
        return np.roots(self.array)

    def __call__(self, z):
        return np.polyval(self.array, z)

    def __len__(self) -> int:
        return len(self.coeffs)

    def to_list(self) -> list:
        return list(self.coeffs)


def conv(a: Polynomial, b: Polynomial) -> Polynomial:
    """
    Convolución (a*b)_k = sum_j a_j b_{k-j}, es decir, el producto de polinomios.

    Example:
        >>> conv(Polynomial([1, -1]), Polynomial([1, 1, 1])).coeffs
        (1.0, 0.0, 0.0, -1.0)
    """
    return Polynomial(np.convolve(a.array, b.array))


def conv_exact(a: Sequence[Number], b: Sequence[Number]) -> list:
    """Convolución exacta sobre ``Fraction`` (modo racional de las pruebas)."""
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += Fraction(ai) * Fraction(bj)
    return out


def _root_order(r: complex) -> tuple:
    return (abs(r), np.angle(r) % (2 * np.pi))


def from_roots(roots: Sequence[complex], conj_tol: float = CONJ_TOL) -> Polynomial:
    """
    Polinomio mónico real con las raíces dadas.

    Los factores se multiplican en orden de módulo ascendente. El residuo imaginario
    de cada coeficiente debe ser ≤ conj_tol·max(1, max|coef|) antes de descartarse.

    Raises:
        NonConjugateRoots: si las raíces no forman un multiconjunto cerrado bajo
            conjugación.
    """
    coeffs = np.array([1.0 + 0j])
    for r in sorted((complex(r) for r in roots), key=_root_order):
        coeffs = np.convolve(coeffs, [1.0, -r])

    scale = max(1.0, float(np.max(np.abs(coeffs.real))))
    residue = float(np.max(np.abs(coeffs.imag)))
    if residue > conj_tol * scale:
        raise NonConjugateRoots(
            f"Las raíces no son cerradas bajo conjugación (residuo imaginario {residue:.3e})"
        )
    return Polynomial(coeffs.real)


def divide(num: Polynomial, den: Polynomial, rem_tol: float = REM_TOL) -> tuple:
    """
    División larga num/den.

    Returns:
        (cociente, exacta) donde ``exacta`` indica que todos los coeficientes del resto
        tienen magnitud ≤ rem_tol·max|num|.

    Raises:
        DegreeMismatch: si grado(num) < grado(den).
    """
    if num.degree < den.degree:
        raise DegreeMismatch(f"grado(num)={num.degree} < grado(den)={den.degree}")
    if den.leading == 0:
        raise DegreeMismatch("El divisor tiene coeficiente principal nulo")

    quotient, remainder = np.polydiv(num.array, den.array)
    bound = rem_tol * float(np.max(np.abs(num.array)))
    exact = bool(np.all(np.abs(remainder) <= bound))
    return Polynomial(quotient), exact


def refine_roots(p: Polynomial, guesses: Sequence[complex], iterations: int = 25) -> np.ndarray:
    """Refina aproximaciones de raíces con Newton (solo para validación)."""
    coeffs = p.array
    deriv = np.polyder(coeffs)
    z = np.array(guesses, dtype=complex)
    for _ in range(iterations):
        dz = np.polyval(deriv, z)
        step = np.divide(np.polyval(coeffs, z), dz, out=np.zeros_like(z), where=dz != 0)
        z = z - step
    return z
