"""
Garantías constructivas para el LP de realizaciones de Markov.

- Certificado explícito cuando los ángulos de los polos son múltiplos racionales de
  2π y los denominadores cumplen m_k ∤ m_1···m_{k-1}: el LP es factible con
  N = ∏ m_k y Q(z) = Ω(z)/Â(z).
- Perturbación de ángulos arbitrarios a ángulos racionales que cumplen la condición.
- Reformulación con Â(z) = A(z)/(z - 1): el LP es factible si y solo si Â·Q tiene
  coeficientes no negativos y no crecientes.
- Vértices del círculo unidad de las regiones de Karpelevič y la cota inferior de
  dimensión que inducen.

Toda la aritmética de enteros (l, m, μ, divisibilidad) es exacta.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from posreal.config import DEFAULT_CONFIG, Config
from posreal.errors import (
    ConditionViolated,
    DegreeMismatch,
    InexactDivision,
    InvalidInput,
    NoUnitRoot,
    Unreachable,
)
from posreal.markov import FeasibilityCertificate
from posreal.poly import Polynomial, conv, conv_exact, divide, from_roots
from posreal.tf import TransferFunction, classify

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
UNIT_ROOT_TOL = 1e-9


# =============================================================================
# TIPOS
# =============================================================================

class PoleAngle(NamedTuple):
    """Polo r·exp(i 2π l/m)."""

    r: float
    l: int
    m: int

    @property
    def angle(self) -> float:
        return TWO_PI * self.l / self.m

    def pole(self) -> complex:
        return self.r * complex(math.cos(self.angle), math.sin(self.angle))


FIRST_ENTRY = PoleAngle(1.0, 0, 1)


@dataclass(frozen=True)
class RationalPoleAngles:
    """
    Polos con parte imaginaria no negativa, ordenados por módulo descendente.

    La primera entrada es siempre (1, 0, 1), el polo dominante normalizado.
    """

    entries: tuple

    def __post_init__(self):
        entries = tuple(PoleAngle(*e) for e in self.entries)
        if not entries or entries[0] != FIRST_ENTRY:
            raise InvalidInput("La primera entrada debe ser (1, 0, 1)")
        for prev, cur in zip(entries, entries[1:]):
            if cur.r > prev.r + 1e-12:
                raise InvalidInput("Los módulos deben ser no crecientes")
        for e in entries[1:]:
            if not 0 <= e.r <= 1:
                raise InvalidInput(f"Módulo {e.r} fuera de [0, 1]")
            if not (e.m > e.l >= 1 and math.gcd(e.m, e.l) == 1):
                raise InvalidInput(f"(l, m) = ({e.l}, {e.m}) debe cumplir m > l >= 1 y gcd(m, l) = 1")
        object.__setattr__(self, "entries", entries)

    @property
    def denominators(self) -> tuple:
        return tuple(e.m for e in self.entries)

    @property
    def mu(self) -> tuple:
        """μ_1 = 1, μ_k = m_k μ_{k-1}."""
        out = [1]
        for e in self.entries[1:]:
            out.append(e.m * out[-1])
        return tuple(out)

    def poles(self) -> list:
        """Todos los polos de H salvo p_1 = 1: las entradas y sus conjugados."""
        out = []
        for e in self.entries[1:]:
            p = e.pole()
            if 2 * e.l == e.m:
                out.append(complex(-e.r, 0.0))
            else:
                out.extend([p, p.conjugate()])
        return out

    def a_hat(self, conj_tol: float = DEFAULT_CONFIG.conj_tol) -> Polynomial:
        """Â(z) = ∏ (z - p) sobre los polos distintos de p_1."""
        return from_roots(self.poles(), conj_tol)


@dataclass(frozen=True)
class TheoremCertificate:
    mu: tuple
    omega: Polynomial
    q: Polynomial
    N: int
    omega_exact: Optional[tuple] = None

    def is_nonneg_nonincreasing(self, tol: float = 0.0) -> bool:
        w = self.omega.array
        return bool(np.all(w >= -tol) and np.all(np.diff(w) <= tol))

    def feasibility_certificate(self) -> FeasibilityCertificate:
        return FeasibilityCertificate(q=self.q, dimension=self.N)

    def to_json_dict(self) -> dict:
        return {"N": self.N, "mu": list(self.mu), "q": self.q.to_list(), "omega": self.omega.to_list()}


# =============================================================================
# DETECCIÓN DE ÁNGULOS RACIONALES
# =============================================================================

def _rational_angle(theta: float, max_denominator: int, angle_tol: float) -> Optional[tuple]:
    """(l, m) en términos mínimos con |2π l/m - θ| <= angle_tol, m <= max_denominator."""
    frac = Fraction(theta / TWO_PI).limit_denominator(max_denominator)
    if abs(TWO_PI * float(frac) - theta) > angle_tol:
        return None
    return frac.numerator, frac.denominator


def detect_rational_angles(
    h: TransferFunction,
    max_denominator: Optional[int] = None,
    config: Optional[Config] = None,
) -> Optional[RationalPoleAngles]:
    """
    Ángulos de los polos como múltiplos racionales exactos de 2π.

    Usa aproximaciones por fracciones continuas (``Fraction.limit_denominator``) con
    denominador <= max_denominator. Los polos en el origen se codifican como (0, 1, 2).
    Entre polos de igual módulo se ordena por m ascendente.

    Returns:
        RationalPoleAngles, o None si algún ángulo no es racional dentro de angle_tol o
        el sistema no tiene un único polo positivo.
    """
    config = config or DEFAULT_CONFIG
    max_denominator = max_denominator or config.max_denominator
    if not classify(h, config).in_M:
        logger.info("El sistema no tiene un único polo positivo")
        return None

    entries = []
    for p in h.poles[1:]:
        if p.imag < -config.axis_tol:
            continue
        r = abs(p)
        if r <= config.axis_tol:
            entries.append(PoleAngle(0.0, 1, 2))
            continue
        theta = abs(math.atan2(p.imag, p.real)) if abs(p.imag) > config.axis_tol else math.pi
        lm = _rational_angle(theta, max_denominator, config.angle_tol)
        if lm is None:
            logger.info("Ángulo no racional", extra={"extra_data": {"theta": theta}})
            return None
        entries.append(PoleAngle(min(r, 1.0), *lm))

    entries.sort(key=lambda e: (-round(e.r, 12), e.m, e.l))
    return RationalPoleAngles((FIRST_ENTRY, *entries))


def check_divisibility_condition(angles: RationalPoleAngles) -> bool:
    """m_k ∤ m_1 m_2 ... m_{k-1} para todo k >= 2 (aritmética entera exacta)."""
    product = 1
    for m in angles.denominators[1:]:
        if product % m == 0:
            return False
        product *= m
    return True


# =============================================================================
# CERTIFICADO CONSTRUCTIVO
# =============================================================================

def _p_factor(r, m: int, mu_prev: int, exact: bool) -> list:
    """Coeficientes de P_j(z^{μ_{j-1}}) con P_j(z) = sum_t r^{μ_{j-1} t} z^{m-1-t}."""
    base = Fraction(r) if exact else float(r)
    zero = Fraction(0) if exact else 0.0
    out = [zero] * ((m - 1) * mu_prev + 1)
    for t in range(m):
        out[t * mu_prev] = base ** (mu_prev * t)
    return out


def omega_product(angles: RationalPoleAngles, exact: bool = False) -> list:
    """Ω_{n_p}(z) = ∏_{j>=2} P_j(z^{μ_{j-1}}) como producto iterado."""
    mu = angles.mu
    omega = [Fraction(1)] if exact else np.ones(1)
    for j, e in enumerate(angles.entries[1:], start=1):
        factor = _p_factor(e.r, e.m, mu[j - 1], exact)
        omega = conv_exact(omega, factor) if exact else np.convolve(omega, factor)
    return list(omega)


def omega_recursive(angles: RationalPoleAngles, exact: bool = False) -> list:
    """
    Ω_{n_p} por la forma cerrada ω^{(k)}_t = r_k^{s(t) μ_{k-1}} ω^{(k-1)}_{τ(t)}, con
    s(t) = ⌊t/μ_{k-1}⌋ y τ(t) = t mod μ_{k-1}.
    """
    mu = angles.mu
    omega = [Fraction(1) if exact else 1.0]
    for k, e in enumerate(angles.entries[1:], start=1):
        r = Fraction(e.r) if exact else float(e.r)
        prev_mu = mu[k - 1]
        omega = [r ** ((t // prev_mu) * prev_mu) * omega[t % prev_mu] for t in range(mu[k])]
    return omega


def theorem_certificate(
    angles: RationalPoleAngles,
    a_hat: Polynomial,
    exact: bool = False,
    config: Optional[Config] = None,
) -> TheoremCertificate:
    """
    Certificado explícito con N = ∏ m_k: Q(z) = Ω_{n_p}(z)/Â(z).

    Args:
        angles: Ángulos racionales que cumplen la condición de divisibilidad
        a_hat: Â(z) = A(z)/(z - 1)
        exact: Calcula Ω con ``Fraction`` (los módulos float se convierten sin pérdida)

    Raises:
        ConditionViolated: si m_k | m_1···m_{k-1} para algún k.
        InexactDivision: si Â no divide a Ω (ángulos mal detectados o polos repetidos).

    Example:
        >>> angles = RationalPoleAngles(((1, 0, 1), (1.0, 1, 3)))
        >>> theorem_certificate(angles, Polynomial([1, 1, 1])).q.coeffs
        (1.0,)
    """
    config = config or DEFAULT_CONFIG
    if not check_divisibility_condition(angles):
        raise ConditionViolated(f"Denominadores {angles.denominators} violan m_k ∤ m_1···m_(k-1)")

    mu = angles.mu
    omega_values = omega_product(angles, exact)
    omega = Polynomial([float(c) for c in omega_values])

    try:
        q, ok = divide(omega, a_hat, config.rem_tol)
    except DegreeMismatch as e:
        raise InexactDivision(f"Â tiene grado mayor que Ω: {e}") from e
    if not ok:
        raise InexactDivision("Â(z) no divide a Ω(z) dentro de rem_tol")

    logger.info("Certificado constructivo", extra={"extra_data": {"N": mu[-1], "mu": list(mu)}})
    return TheoremCertificate(
        mu=mu,
        omega=omega,
        q=q,
        N=mu[-1],
        omega_exact=tuple(omega_values) if exact else None,
    )


def theorem_for_transfer_function(h: TransferFunction, config: Optional[Config] = None) -> Optional[TheoremCertificate]:
    """
    Detección + condición + certificado en una llamada.

    Devuelve None (y lo registra) cuando el teorema no es aplicable: ángulos no
    racionales, condición de divisibilidad violada o división inexacta.
    """
    config = config or DEFAULT_CONFIG
    angles = detect_rational_angles(h, config=config)
    if angles is None:
        return None
    if not check_divisibility_condition(angles):
        logger.warning(
            "Teorema no aplicable: condición de divisibilidad",
            extra={"extra_data": {"m": list(angles.denominators)}},
        )
        return None
    try:
        a_hat, exact = divide(h.den, Polynomial([1.0, -1.0]), config.rem_tol)
        if not exact:
            return None
        return theorem_certificate(angles, a_hat, config=config)
    except InexactDivision as e:
        logger.warning("Teorema no aplicable", extra={"extra_data": {"detail": str(e)}})
        return None


# =============================================================================
# PERTURBACIÓN A ÁNGULOS RACIONALES
# =============================================================================

def _approximate_angle(theta: float, tol: float) -> tuple:
    """Menor (l, m) con l >= 1 y |2π l/m - θ| <= tol (denominador creciente)."""
    x = theta / TWO_PI
    limit = 1
    while True:
        frac = Fraction(x).limit_denominator(limit)
        if frac.numerator >= 1 and abs(TWO_PI * float(frac) - theta) <= tol:
            return frac.numerator, frac.denominator
        limit *= 2


def perturb_to_rational(
    angles: Sequence[float],
    magnitudes: Sequence[float],
    epsilon: float,
    angle_tol: float = DEFAULT_CONFIG.angle_tol,
) -> RationalPoleAngles:
    """
    Ángulos racionales a distancia <= epsilon de ``angles`` que cumplen
    m''_k ∤ m''_1···m''_{k-1}.

    Primero cada θ_k se aproxima por 2πl'/m' con error <= epsilon/2. Luego, si
    m'_k | μ''_{k-1}, se reemplaza por l'' = l'^2 γ, m'' = m' l' γ + 1 con el menor
    γ > (μ''_{k-1} - 1)/(m' l') que deja el nuevo error |ε''_k| <= epsilon/2.
    Por ese reparto en mitades, θ = (0, π, π) con epsilon = π/20 da γ = 20 (m'' = 41,
    error π/41) y no γ = 10, que solo garantiza |ε''| <= epsilon.

    Args:
        angles: θ_1 = 0, θ_2..θ_{n_p} en (0, π]
        magnitudes: 1 = r_1 >= r_2 >= ... >= r_{n_p}
        epsilon: Error angular máximo

    Raises:
        Unreachable: si algún θ_k (k >= 2) es 0 (polo sobre el eje real positivo).
    """
    if len(angles) != len(magnitudes) or not angles:
        raise InvalidInput("angles y magnitudes deben tener la misma longitud no nula")
    if epsilon <= 0:
        raise InvalidInput("epsilon debe ser positivo")
    if abs(angles[0]) > angle_tol:
        raise InvalidInput("θ_1 debe ser 0")

    entries = [FIRST_ENTRY]
    mu = 1
    for k, (theta, r) in enumerate(zip(angles[1:], magnitudes[1:]), start=2):
        theta = abs(math.remainder(theta, TWO_PI))
        if theta <= angle_tol:
            raise Unreachable(f"θ_{k} = 0: polo sobre el eje real positivo")

        l1, m1 = _approximate_angle(theta, epsilon / 2)
        if mu % m1 != 0:
            l2, m2 = l1, m1
        else:
            gamma = (mu - 1) // (m1 * l1) + 1
            # |ε''| = 2π l' / (m' (m' l' γ + 1))
            needed = (2 * TWO_PI * l1 / (m1 * epsilon) - 1) / (m1 * l1)
            gamma = max(gamma, math.ceil(needed))
            while abs(TWO_PI * (Fraction(l1 * l1 * gamma, m1 * l1 * gamma + 1) - Fraction(l1, m1))) > epsilon / 2:
                gamma += 1
            l2, m2 = l1 * l1 * gamma, m1 * l1 * gamma + 1
            logger.debug("Ajuste de denominador", extra={"extra_data": {"k": k, "gamma": gamma, "m": m2}})
        entries.append(PoleAngle(float(r), l2, m2))
        mu *= m2

    return RationalPoleAngles(tuple(entries))


# =============================================================================
# REFORMULACIÓN CON Â(z)
# =============================================================================

def lemma1_transform(a: Polynomial, q: Polynomial, feas_tol: float = DEFAULT_CONFIG.feas_tol) -> tuple:
    """
    Calcula Â·Q con Â = A/(z - 1) y decide si sus coeficientes cumplen
    1 = c_0 >= c_1 >= ... >= c_last >= 0 (dentro de feas_tol).

    Eso equivale a (a*q)_k <= 0 para todo k, porque a*q = (z - 1)·Â·Q.

    Raises:
        NoUnitRoot: si A(1) != 0.
    """
    scale = max(1.0, float(np.max(np.abs(a.array))))
    if abs(a(1.0)) > UNIT_ROOT_TOL * scale:
        raise NoUnitRoot(f"A(1) = {a(1.0):.3e}: z = 1 no es raíz")

    a_hat, _ = divide(a, Polynomial([1.0, -1.0]))
    product = conv(a_hat, q)
    c = product.array
    ok = bool(
        abs(c[0] - 1.0) <= feas_tol
        and np.all(np.diff(c) <= feas_tol)
        and c[-1] >= -feas_tol
    )
    return product, ok


# =============================================================================
# REGIONES DE KARPELEVIČ: VÉRTICES EN EL CÍRCULO UNIDAD
# =============================================================================

def karpelevic_vertices(N: int) -> frozenset:
    """
    Pares (l, m) con 0 <= l < m <= N - 1 y gcd(m, l) = 1: los puntos exp(i 2π l/m)
    donde la región de Karpelevič de orden N - 1 toca el círculo unidad.
    """
    if N < 2:
        raise InvalidInput("N debe ser >= 2")
    return frozenset(
        (l, m) for m in range(1, N) for l in range(m) if math.gcd(m, l) == 1
    )


def _unit_circle_denominators(h: TransferFunction, config: Config) -> list:
    """Denominadores reducidos m de los polos de módulo 1 con ángulo racional."""
    out = []
    for p in h.poles:
        if abs(abs(p) - 1.0) > config.axis_tol:
            continue
        theta = math.atan2(p.imag, p.real) % TWO_PI
        lm = _rational_angle(theta, config.max_denominator, config.angle_tol)
        if lm is not None:
            out.append(lm)
    return out


def certify_exact_minimality(h: TransferFunction, N: int, config: Optional[Config] = None) -> bool:
    """
    True si algún polo de módulo 1 tiene ángulo racional 2πl/m fuera de V_{N-1}, lo
    que prueba que ninguna realización positiva (de Markov o no) tiene dimensión
    menor que N. False significa "no certificado", no "no mínimo".
    """
    config = config or DEFAULT_CONFIG
    if N < 2:
        # Ninguna realización tiene dimensión menor que 1
        return N == 1
    vertices = karpelevic_vertices(N)
    return any((l % m, m) not in vertices for l, m in _unit_circle_denominators(h, config))


def karpelevic_lower_bound(h: TransferFunction, config: Optional[Config] = None) -> int:
    """max(n, m) sobre los polos exp(i 2π l/m) del círculo unidad (m en términos mínimos)."""
    config = config or DEFAULT_CONFIG
    return max([h.order] + [m for _, m in _unit_circle_denominators(h, config)])


def third_order_lower_bound(h: TransferFunction, config: Optional[Config] = None) -> Optional[int]:
    """
    ⌈π/θ_2⌉ + 1 para sistemas de orden 3 con un par complejo de ángulo θ_2: el menor N
    con el que Â·Q puede tener coeficientes no negativos. None si no aplica.
    """
    config = config or DEFAULT_CONFIG
    if h.order != 3:
        return None
    complex_poles = [p for p in h.poles if p.imag > config.axis_tol]
    if len(complex_poles) != 1:
        return None
    theta = math.atan2(complex_poles[0].imag, complex_poles[0].real)
    return math.ceil(math.pi / theta - 1e-12) + 1
