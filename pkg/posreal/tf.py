"""
Funciones de transferencia discretas estrictamente propias

    H(z) = (b_1 z^{n-1} + ... + b_n) / (z^n + a_1 z^{n-1} + ... + a_n)
         = K prod(z - z_k) / prod(z - p_k)

con construcción validada, normalización del polo dominante, parámetros de Markov,
test (finito) de positividad externa y clasificación frente al conjunto de sistemas
con un único polo positivo.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.signal import lfilter

from posreal.config import DEFAULT_CONFIG, Config
from posreal.errors import (
    CommonFactor,
    InvalidInput,
    NonpositiveDominantPole,
    NotMonic,
    NotNormalized,
    NotStrictlyProper,
    ShapeMismatch,
)
from posreal.poly import Polynomial, from_roots

logger = logging.getLogger(__name__)

MONIC_TOL = 1e-12


# =============================================================================
# TIPOS
# =============================================================================

@dataclass(frozen=True)
class TransferFunction:
    """
    Función de transferencia estrictamente propia con denominador mónico.

    ``num`` guarda b_1..b_n (longitud n, rellenado con ceros a la izquierda) y
    ``den`` guarda 1, a_1..a_n. Los polos están ordenados por módulo descendente;
    los empates se resuelven por ángulo ascendente en [0, 2π).
    """

    num: Polynomial
    den: Polynomial
    gain: float
    zeros: tuple
    poles: tuple

    @property
    def order(self) -> int:
        return self.den.degree

    @property
    def b(self) -> np.ndarray:
        return self.num.array

    @property
    def a(self) -> np.ndarray:
        return self.den.array

    @property
    def relative_degree(self) -> int:
        return self.order - len(self.zeros)

    @property
    def dominant_pole(self) -> complex:
        return self.poles[0]

    def is_normalized(self, axis_tol: float = DEFAULT_CONFIG.axis_tol) -> bool:
        return abs(self.poles[0] - 1.0) <= axis_tol

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def to_json_dict(self) -> dict:
        return {"b": self.num.to_list(), "a": self.den.to_list()}


@dataclass(frozen=True)
class MarkovSequence:
    """Parámetros de Markov h_1..h_T (coeficientes de z^{-t} en H(z))."""

    values: tuple
    horizon: int

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def __getitem__(self, t: int) -> float:
        """Acceso con índice de la serie: seq[1] es h_1."""
        if not 1 <= t <= self.horizon:
            raise IndexError(f"t={t} fuera de [1, {self.horizon}]")
        return self.values[t - 1]


@dataclass(frozen=True)
class Classification:
    positive_pole_count: int
    in_M: bool
    externally_positive_up_to: int
    horizon: int
    dominant_modulus: float

    @property
    def externally_positive(self) -> bool:
        return self.externally_positive_up_to == self.horizon

    def to_json_dict(self) -> dict:
        return {
            "positive_pole_count": self.positive_pole_count,
            "in_M": self.in_M,
            "externally_positive_up_to": self.externally_positive_up_to,
            "horizon": self.horizon,
            "dominant_modulus": self.dominant_modulus,
        }


# =============================================================================
# CONSTRUCCIÓN
# =============================================================================

def _sort_poles(poles: Sequence[complex], axis_tol: float) -> tuple:
    snapped = [complex(p.real, 0.0) if abs(p.imag) <= axis_tol else complex(p) for p in poles]
    return tuple(sorted(snapped, key=lambda p: (-round(abs(p), 9), round(np.angle(p) % (2 * np.pi), 12))))


def _check_coprime(zeros: Sequence[complex], poles: Sequence[complex], coprime_tol: float) -> None:
    for z in zeros:
        for p in poles:
            if abs(z - p) <= coprime_tol:
                raise CommonFactor(f"Cancelación polo-cero en {p:.6g}")


def from_coefficients(b: Sequence[float], a: Sequence[float], config: Optional[Config] = None) -> TransferFunction:
    """
    Construye H(z) a partir de los coeficientes b (numerador) y a (denominador mónico).

    Args:
        b: b_1..b_n (puede ser más corto que n; se rellena por la izquierda)
        a: 1, a_1..a_n

    Raises:
        NotMonic: si a[0] != 1
        NotStrictlyProper: si len(b) > n
        CommonFactor: si algún cero coincide con un polo dentro de coprime_tol

    Example:
        >>> h = from_coefficients([1], [1, -1])      # 1/(z-1)
        >>> h.poles
        ((1+0j),)
    """
    config = config or DEFAULT_CONFIG
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()

    if a.size < 2:
        raise NotStrictlyProper("El denominador debe tener grado n >= 1")
    if abs(a[0] - 1.0) > MONIC_TOL:
        raise NotMonic(f"El denominador no es mónico (a_0 = {a[0]})")
    n = a.size - 1
    if b.size > n:
        raise NotStrictlyProper(f"El numerador tiene {b.size} coeficientes y el orden es {n}")
    if b.size == 0 or not np.any(b):
        raise InvalidInput("El numerador es idénticamente cero")

    a = a.copy()
    a[0] = 1.0
    num = Polynomial(np.concatenate([np.zeros(n - b.size), b]))
    den = Polynomial(a)

    trimmed = num.trim()
    zeros = tuple(complex(z) for z in trimmed.roots()) if trimmed.degree > 0 else ()
    poles = _sort_poles(den.roots(), config.axis_tol)
    _check_coprime(zeros, poles, config.coprime_tol)

    return TransferFunction(num=num, den=den, gain=trimmed.leading, zeros=zeros, poles=poles)


def from_zeros_poles(
    zeros: Sequence[complex],
    poles: Sequence[complex],
    gain: float,
    config: Optional[Config] = None,
) -> TransferFunction:
    """Construye H(z) = K prod(z - z_k)/prod(z - p_k)."""
    config = config or DEFAULT_CONFIG
    if len(zeros) >= len(poles):
        raise NotStrictlyProper(f"{len(zeros)} ceros y {len(poles)} polos")
    den = from_roots(poles, config.conj_tol)
    num = from_roots(zeros, config.conj_tol)
    return from_coefficients(gain * num.array, den.array, config)


def transfer_function_from_json(data: dict, config: Optional[Config] = None) -> TransferFunction:
    """
    Lee una función de transferencia en cualquiera de los dos formatos JSON:
    ``{"b": [...], "a": [...]}`` o ``{"zeros": [[re,im],...], "poles": [[re,im],...], "gain": g}``.
    """
    try:
        if "a" in data:
            return from_coefficients(data["b"], data["a"], config)
        zeros = [complex(re, im) for re, im in data.get("zeros", [])]
        poles = [complex(re, im) for re, im in data["poles"]]
        return from_zeros_poles(zeros, poles, float(data.get("gain", 1.0)), config)
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInput(f"JSON de función de transferencia inválido: {e}") from e


# =============================================================================
# NORMALIZACIÓN Y PARÁMETROS DE MARKOV
# =============================================================================

def normalize_dominant_pole(h: TransferFunction, config: Optional[Config] = None) -> tuple:
    """
    Escala el sistema para que su polo dominante sea p_1 = 1.

    Devuelve G(z) = p_1·H(p_1 z): sus polos y ceros son los de H divididos por p_1 y sus
    parámetros de Markov cumplen g_t = h_t / p_1^{t-1}. Si (A, B, C) realiza G,
    entonces (p_1·A, B, C) realiza H.

    Returns:
        (G, scale) con scale = p_1.

    Raises:
        NonpositiveDominantPole: si p_1 no es real positivo dentro de axis_tol.
    """
    config = config or DEFAULT_CONFIG
    p1 = h.dominant_pole
    if abs(p1.imag) > config.axis_tol or p1.real <= config.axis_tol:
        raise NonpositiveDominantPole(f"El polo dominante {p1:.6g} no es real positivo")

    scale = float(p1.real)
    if scale == 1.0:
        return h, 1.0

    n = h.order
    powers = scale ** np.arange(n + 1)
    den = Polynomial(h.a / powers)                         # a'_k = a_k / p^k
    num = Polynomial(h.b / powers[:n])                     # b'_k = b_k / p^{k-1}
    poles = (1.0 + 0j,) + tuple(p / scale for p in h.poles[1:])
    zeros = tuple(z / scale for z in h.zeros)
    gain = h.gain * scale ** (1 - h.relative_degree)

    logger.debug("Polo dominante normalizado", extra={"extra_data": {"scale": scale}})
    return TransferFunction(num=num, den=den, gain=gain, zeros=zeros, poles=poles), scale


def markov_parameters(h: TransferFunction, horizon: int) -> MarkovSequence:
    """
    Parámetros de Markov h_1..h_horizon.

    Son los coeficientes de la expansión de H(z) en z^{-1}, que cumplen
    h_k = b_k - sum_{j=1}^{min(k-1,n)} a_j h_{k-j} (b_k = 0 para k > n).

    Example:
        >>> markov_parameters(from_coefficients([1], [1, -1]), 4).values
        (1.0, 1.0, 1.0, 1.0)
    """
    if horizon < 1:
        raise InvalidInput("El horizonte debe ser >= 1")
    impulse = np.zeros(horizon + 1)
    impulse[0] = 1.0
    # H(z) = (b_1 z^{-1} + ... + b_n z^{-n}) / (1 + a_1 z^{-1} + ... + a_n z^{-n})
    response = lfilter(np.concatenate([[0.0], h.b]), h.a, impulse)
    return MarkovSequence(values=tuple(float(v) for v in response[1:]), horizon=horizon)


def check_external_positivity(
    h: TransferFunction,
    horizon: Optional[int] = None,
    config: Optional[Config] = None,
) -> bool:
    """
    Test de positividad externa h_t >= -pos_tol para t <= horizon.

    Es un filtro de horizonte finito, no una prueba: un sistema puede pasar el test y
    tener parámetros negativos más allá del horizonte.
    """
    prefix, used = _positive_prefix(h, horizon, config)
    return prefix == used


def _positive_prefix(h: TransferFunction, horizon: Optional[int], config: Optional[Config]) -> tuple:
    """(T, horizon) donde T es el mayor prefijo h_1..h_T sin valores negativos."""
    config = config or DEFAULT_CONFIG
    horizon = horizon or config.horizon_for(h.order)
    values = markov_parameters(h, horizon).as_array()
    negative = np.flatnonzero(values < -config.pos_tol)
    if negative.size:
        logger.debug(
            "Parámetro de Markov negativo",
            extra={"extra_data": {"t": int(negative[0]) + 1, "value": float(values[negative[0]])}},
        )
        return int(negative[0]), horizon
    return horizon, horizon


# =============================================================================
# CLASIFICACIÓN Y MÉTRICA
# =============================================================================

def positive_poles(h: TransferFunction, axis_tol: float = DEFAULT_CONFIG.axis_tol) -> tuple:
    """Polos sobre el eje real positivo abierto (|Im| <= axis_tol, Re > axis_tol)."""
    return tuple(p for p in h.poles if abs(p.imag) <= axis_tol and p.real > axis_tol)


def classify(h: TransferFunction, config: Optional[Config] = None) -> Classification:
    """
    Cuenta los polos positivos n_+ y decide la pertenencia al conjunto de sistemas con
    un único polo positivo (el polo dominante normalizado p_1 = 1).

    Raises:
        NotNormalized: si p_1 != 1 dentro de axis_tol.
    """
    config = config or DEFAULT_CONFIG
    if not h.is_normalized(config.axis_tol):
        raise NotNormalized(f"El polo dominante es {h.dominant_pole:.6g}, se esperaba 1")

    count = len(positive_poles(h, config.axis_tol))
    prefix, horizon = _positive_prefix(h, None, config)
    return Classification(
        positive_pole_count=count,
        in_M=count == 1,
        externally_positive_up_to=prefix,
        horizon=horizon,
        dominant_modulus=float(abs(h.dominant_pole)),
    )


def distance(h: TransferFunction, g: TransferFunction) -> float:
    """
    d(H, G) = sum|z''_k - z_k| + sum|p''_k - p_k| con el emparejamiento de costo mínimo
    entre los conjuntos de polos (y entre los de ceros).

    Raises:
        ShapeMismatch: si difieren el número de polos o el de ceros.
    """
    if len(h.poles) != len(g.poles) or len(h.zeros) != len(g.zeros):
        raise ShapeMismatch(
            f"Formas distintas: {len(h.poles)}/{len(g.poles)} polos, {len(h.zeros)}/{len(g.zeros)} ceros"
        )
    total = 0.0
    for mine, theirs in ((h.poles, g.poles), (h.zeros, g.zeros)):
        if not mine:
            continue
        cost = np.abs(np.subtract.outer(np.array(mine), np.array(theirs)))
        rows, cols = linear_sum_assignment(cost)
        total += float(cost[rows, cols].sum())
    return total
