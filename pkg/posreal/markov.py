"""
Realizaciones positivas de Markov.

Para un denominador mónico A(z) de grado n y una dimensión N >= n se busca un
polinomio mónico Q(z) de grado N - n tal que la secuencia a*q cumpla

    (a*q)_k <= 0,   k = 1..N

Con ese Q la realización

    A = [subdiagonal de unos | -(a*q) invertida en la última columna]
    B = e_1,   C = [h_1 ... h_N]

es no negativa y tiene los mismos parámetros de Markov que H(z). La búsqueda de Q es
un programa lineal de factibilidad resuelto por ``posreal.lp``.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import convolution_matrix

from posreal.config import DEFAULT_CONFIG, Config
from posreal.errors import DimensionTooSmall, InvalidCertificate, InvalidInput, NotNormalized
from posreal.lp import LinearFeasibilityProblem, solve_feasibility
from posreal.poly import Polynomial, conv
from posreal.tf import TransferFunction, markov_parameters, positive_poles

logger = logging.getLogger(__name__)


# =============================================================================
# TIPOS
# =============================================================================

@dataclass(frozen=True)
class FeasibilityCertificate:
    """Multiplicador mónico Q(z) de grado N - n que hace factible el LP con dimensión N."""

    q: Polynomial
    dimension: int

    def __post_init__(self):
        if not self.q.is_monic(1e-12):
            raise InvalidCertificate(f"q no es mónico (q_0 = {self.q.leading})")

    def convolution(self, a: Polynomial) -> np.ndarray:
        """(a*q)_1..(a*q)_N."""
        return conv(a, self.q).array[1:]

    def to_json_dict(self) -> dict:
        return {"N": self.dimension, "q": self.q.to_list()}


@dataclass(eq=False)
class StateSpaceRealization:
    """Terna densa (A, B, C) con D = 0."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    q: Optional[Polynomial] = None
    max_clamp: float = 0.0
    dimension: int = field(init=False)

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.B = np.asarray(self.B, dtype=float).ravel()
        self.C = np.asarray(self.C, dtype=float).ravel()
        self.dimension = self.A.shape[0]
        if self.A.shape != (self.dimension, self.dimension) or self.B.size != self.dimension or self.C.size != self.dimension:
            raise InvalidInput(f"Dimensiones inconsistentes: A{self.A.shape}, B({self.B.size}), C({self.C.size})")

    def markov_parameters(self, horizon: int) -> np.ndarray:
        """C A^{t-1} B para t = 1..horizon."""
        out = np.empty(horizon)
        x = self.B.copy()
        for t in range(horizon):
            out[t] = self.C @ x
            x = self.A @ x
        return out

    def min_entry(self) -> float:
        return float(min(self.A.min(), self.B.min(), self.C.min()))

    def is_positive(self, tol: float = 0.0) -> bool:
        return self.min_entry() >= -tol

    def to_json_dict(self) -> dict:
        return {
            "N": self.dimension,
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "C": self.C.tolist(),
            "q": self.q.to_list() if self.q is not None else None,
            "max_clamp": self.max_clamp,
        }


def realization_from_json(data: dict) -> StateSpaceRealization:
    """Lee el JSON ``{"N", "A", "B", "C", "q", "max_clamp"}``."""
    try:
        q = Polynomial(data["q"]) if data.get("q") is not None else None
        ss = StateSpaceRealization(A=data["A"], B=data["B"], C=data["C"], q=q, max_clamp=float(data.get("max_clamp", 0.0)))
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInput(f"JSON de realización inválido: {e}") from e
    if "N" in data and int(data["N"]) != ss.dimension:
        raise InvalidInput(f"N={data['N']} no coincide con la dimensión de A ({ss.dimension})")
    return ss


# =============================================================================
# PROGRAMA LINEAL
# =============================================================================

def build_feasibility_problem(a: Polynomial, N: int) -> LinearFeasibilityProblem:
    """
    LP de factibilidad en q ∈ R^{N-n+1}:  W·T_a·q <= 0,  q_1 = 1.

    T_a es la matriz de convolución (N+1)×(N-n+1) con [T_a]_{ij} = a_{i-j} y W = [0 I]
    descarta la primera fila, de modo que W·T_a·q = ((a*q)_1, ..., (a*q)_N).

    Raises:
        DimensionTooSmall: si N < n.
    """
    n = a.degree
    if N < n:
        raise DimensionTooSmall(f"N={N} es menor que el orden n={n}")

    num_vars = N - n + 1
    toeplitz = convolution_matrix(a.array, num_vars, mode="full")
    pin = np.zeros((1, num_vars))
    pin[0, 0] = 1.0

    return LinearFeasibilityProblem(
        ineq_matrix=toeplitz[1:],
        ineq_rhs=np.zeros(N),
        eq_matrix=pin,
        eq_rhs=np.ones(1),
        num_vars=num_vars,
    )


def find_certificate_for_denominator(a: Polynomial, N: int, config: Optional[Config] = None) -> Optional[FeasibilityCertificate]:
    """Resuelve el LP para el denominador ``a`` con dimensión N; None si es infactible."""
    config = config or DEFAULT_CONFIG
    outcome = solve_feasibility(build_feasibility_problem(a, N), config.feas_tol, config.pivot_tol)
    if not outcome.feasible:
        return None
    q = outcome.point.copy()
    q[0] = 1.0
    return FeasibilityCertificate(q=Polynomial(q), dimension=N)


def _require_normalized(h: TransferFunction, config: Config) -> None:
    if not h.is_normalized(config.axis_tol):
        raise NotNormalized(f"El polo dominante es {h.dominant_pole:.6g}; normalice primero")


def find_certificate(h: TransferFunction, N: int, config: Optional[Config] = None) -> Optional[FeasibilityCertificate]:
    """
    Certificado de factibilidad con dimensión N para un sistema normalizado.

    Un sistema tiene una realización positiva de Markov de dimensión N si y solo si
    este LP es factible.
    """
    config = config or DEFAULT_CONFIG
    _require_normalized(h, config)
    return find_certificate_for_denominator(h.den, N, config)


# =============================================================================
# REALIZACIÓN Y VERIFICACIÓN
# =============================================================================

def realize(h: TransferFunction, cert: FeasibilityCertificate, config: Optional[Config] = None) -> StateSpaceRealization:
    """
    Realización de Markov (A, B, C) de dimensión N a partir de un certificado.

    Las entradas de -(a*q) ligeramente negativas (>= -feas_tol) se fijan en 0 y la
    mayor corrección se guarda en ``max_clamp``.

    Raises:
        InvalidCertificate: si el grado de q no es N - n o algún (a*q)_k > feas_tol.
    """
    config = config or DEFAULT_CONFIG
    N = cert.dimension
    if cert.q.degree != N - h.order:
        raise InvalidCertificate(f"grado(q)={cert.q.degree} no es N - n = {N - h.order}")

    aq = cert.convolution(h.den)
    worst = float(aq.max())
    if worst > config.feas_tol:
        raise InvalidCertificate(f"(a*q)_k = {worst:.3e} > feas_tol")

    last_column = -aq[::-1]
    max_clamp = float(max(0.0, -last_column.min()))
    if max_clamp > config.feas_tol / 10:
        logger.warning("Corrección de frontera en la columna de A", extra={"extra_data": {"max_clamp": max_clamp}})
    last_column = np.maximum(last_column, 0.0)

    A = np.eye(N, k=-1)
    A[:, -1] = last_column
    # Con N = 1 la subdiagonal no existe y A = [-(a*q)_1]
    B = np.zeros(N)
    B[0] = 1.0
    C = markov_parameters(h, N).as_array()
    if C.min() < -config.pos_tol:
        logger.warning("H no es externamente positiva: C tiene entradas negativas", extra={"extra_data": {"min_c": float(C.min())}})

    return StateSpaceRealization(A=A, B=B, C=C, q=cert.q, max_clamp=max_clamp)


def rescale_realization(ss: StateSpaceRealization, scale: float) -> StateSpaceRealization:
    """Deshace la normalización del polo dominante: (scale·A, B, C)."""
    return StateSpaceRealization(A=scale * ss.A, B=ss.B, C=ss.C, q=ss.q, max_clamp=ss.max_clamp)


def verify_realization(
    ss: StateSpaceRealization,
    h: TransferFunction,
    horizon: Optional[int] = None,
    tol: Optional[float] = None,
    config: Optional[Config] = None,
) -> bool:
    """
    Oráculo: |C A^{t-1} B - h_t| <= tol·max(1, |h_t|) para t <= horizon y todas las
    entradas de (A, B, C) >= -tol.

    Args:
        horizon: Por defecto 2N; debe ser >= 2N.
        tol: Por defecto ``config.verify_tol``.
    """
    config = config or DEFAULT_CONFIG
    tol = config.verify_tol if tol is None else tol
    horizon = horizon or 2 * ss.dimension
    if horizon < 2 * ss.dimension:
        raise InvalidInput(f"El horizonte {horizon} es menor que 2N = {2 * ss.dimension}")

    expected = markov_parameters(h, horizon).as_array()
    got = ss.markov_parameters(horizon)
    matches = bool(np.all(np.abs(got - expected) <= tol * np.maximum(1.0, np.abs(expected))))
    positive = ss.is_positive(tol)
    if not (matches and positive):
        logger.info(
            "Verificación fallida",
            extra={"extra_data": {"matches": matches, "positive": positive, "N": ss.dimension}},
        )
    return matches and positive


# =============================================================================
# DIMENSIÓN MÍNIMA
# =============================================================================

def _doubling_probes(n: int, n_max: int) -> list:
    probes = []
    N = n
    while N < n_max:
        probes.append(N)
        N *= 2
    probes.append(n_max)
    return probes


def minimal_markov_dimension(
    h: TransferFunction,
    n_max: Optional[int] = None,
    config: Optional[Config] = None,
) -> Optional[tuple]:
    """
    Menor N en [n, n_max] con LP factible.

    La factibilidad es monótona en N (si Q sirve con N, z^k·Q sirve con N + k), así que
    basta con encontrar una cota superior factible y biseccionar. La cota se busca
    primero con la dimensión del teorema de ángulos racionales y si no aplica con
    N = n, 2n, 4n, ..., n_max. La cota inferior parte del vértice de Karpelevič de los
    polos en el círculo unidad.

    Returns:
        (N, certificado) o None si ningún N <= n_max es factible.
    """
    # Importación diferida: theory depende de este módulo
    from posreal.theory import karpelevic_lower_bound, theorem_for_transfer_function

    config = config or DEFAULT_CONFIG
    _require_normalized(h, config)
    n = h.order
    n_max = n_max or config.n_max
    if n_max < n:
        raise DimensionTooSmall(f"n_max={n_max} es menor que el orden n={n}")

    if len(positive_poles(h, config.axis_tol)) >= 2:
        # Regla de Descartes: a*q cambia de signo al menos dos veces para todo q
        logger.info("Dos o más polos positivos: LP infactible para todo N")
        return None

    probed: dict = {}

    def probe(N: int) -> Optional[FeasibilityCertificate]:
        if N not in probed:
            probed[N] = find_certificate_for_denominator(h.den, N, config)
            logger.debug("Sondeo de dimensión", extra={"extra_data": {"N": N, "feasible": probed[N] is not None}})
        return probed[N]

    lower = max(n, karpelevic_lower_bound(h, config))
    if lower > n_max:
        return None
    lo = lower - 1          # mayor N que se sabe infactible

    hi = None
    theorem = theorem_for_transfer_function(h, config)
    if theorem is not None and lower <= theorem.N <= n_max and probe(theorem.N) is not None:
        hi = theorem.N
    else:
        for N in _doubling_probes(lower, n_max):
            if probe(N) is not None:
                hi = N
                break
            lo = N
    if hi is None:
        logger.info("LP infactible hasta n_max", extra={"extra_data": {"n_max": n_max}})
        return None

    logger.info("Intervalo de bisección", extra={"extra_data": {"lo": lo, "hi": hi}})
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if probe(mid) is not None:
            hi = mid
        else:
            lo = mid

    return hi, probed[hi]
