"""
Solver de factibilidad lineal (simplex fase 1, tabla densa, regla de Bland).

Problema::

    encontrar x  tal que  G x <= h,  E x = f

Las variables son libres; se separan en pares no negativos x = u - v antes de la
fase 1. La regla de Bland hace el solver determinista: las mismas entradas dan
siempre el mismo resultado.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from posreal.errors import NumericalBreakdown, ShapeMismatch

logger = logging.getLogger(__name__)

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-10
ITERATION_FACTOR = 50


class LPStatus(str, Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"


def _as_matrix(values, num_vars: int) -> np.ndarray:
    arr = np.asarray(values if values is not None else np.zeros((0, num_vars)), dtype=float)
    if arr.size == 0:
        return np.zeros((0, num_vars))
    return np.atleast_2d(arr)


@dataclass(eq=False)
class LinearFeasibilityProblem:
    """
    Sistema de restricciones G x <= h, E x = f con ``num_vars`` variables libres.

    Las matrices vacías se aceptan (por ejemplo, sin igualdades).
    """

    ineq_matrix: np.ndarray
    ineq_rhs: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    num_vars: int

    def __post_init__(self):
        if self.num_vars < 1:
            raise ShapeMismatch("num_vars debe ser positivo")
        self.ineq_matrix = _as_matrix(self.ineq_matrix, self.num_vars)
        self.eq_matrix = _as_matrix(self.eq_matrix, self.num_vars)
        self.ineq_rhs = np.asarray(self.ineq_rhs, dtype=float).ravel()
        self.eq_rhs = np.asarray(self.eq_rhs, dtype=float).ravel()

        for name, mat, rhs in (
            ("desigualdad", self.ineq_matrix, self.ineq_rhs),
            ("igualdad", self.eq_matrix, self.eq_rhs),
        ):
            if mat.shape[1] != self.num_vars:
                raise ShapeMismatch(f"Matriz de {name} con {mat.shape[1]} columnas, se esperaban {self.num_vars}")
            if mat.shape[0] != rhs.size:
                raise ShapeMismatch(f"Matriz de {name} con {mat.shape[0]} filas y lado derecho de {rhs.size}")

    @property
    def num_constraints(self) -> int:
        return self.ineq_matrix.shape[0] + self.eq_matrix.shape[0]

    def violation(self, x: np.ndarray) -> float:
        """Máxima violación de restricciones en el punto x (0 si es factible)."""
        worst = 0.0
        if self.ineq_matrix.shape[0]:
            worst = max(worst, float(np.max(self.ineq_matrix @ x - self.ineq_rhs)))
        if self.eq_matrix.shape[0]:
            worst = max(worst, float(np.max(np.abs(self.eq_matrix @ x - self.eq_rhs))))
        return worst


@dataclass(eq=False)
class LPOutcome:
    status: LPStatus
    point: Optional[np.ndarray] = None
    max_violation: float = 0.0
    iterations: int = field(default=0)

    @property
    def feasible(self) -> bool:
        return self.status is LPStatus.FEASIBLE


# =============================================================================
# CONSTRUCCIÓN DE LA TABLA DE FASE 1
# =============================================================================

def _phase_one_tableau(p: LinearFeasibilityProblem):
    """
    Forma estándar con holguras y artificiales.

    Columnas: u (n), v (n), holguras (mi), artificiales. Las filas de desigualdad con
    lado derecho no negativo arrancan con su holgura en la base; el resto necesita una
    artificial.
    """
    n = p.num_vars
    mi = p.ineq_matrix.shape[0]
    me = p.eq_matrix.shape[0]
    m = mi + me

    core = np.zeros((m, 2 * n + mi))
    core[:mi, :n] = p.ineq_matrix
    core[:mi, n:2 * n] = -p.ineq_matrix
    core[:mi, 2 * n:] = np.eye(mi)
    core[mi:, :n] = p.eq_matrix
    core[mi:, n:2 * n] = -p.eq_matrix
    rhs = np.concatenate([p.ineq_rhs, p.eq_rhs])

    flip = rhs < 0
    core[flip] *= -1.0
    rhs[flip] *= -1.0

    needs_artificial = [i for i in range(m) if i >= mi or flip[i]]
    n_core = core.shape[1]
    n_cols = n_core + len(needs_artificial)

    tableau = np.zeros((m + 1, n_cols + 1))
    tableau[:m, :n_core] = core
    tableau[:m, -1] = rhs

    basis = np.empty(m, dtype=int)
    for i in range(mi):
        basis[i] = 2 * n + i
    for k, i in enumerate(needs_artificial):
        col = n_core + k
        tableau[i, col] = 1.0
        basis[i] = col

    # Fila objetivo: costos reducidos de min sum(artificiales)
    tableau[m, n_core:n_cols] = 1.0
    for i in needs_artificial:
        tableau[m] -= tableau[i]

    return tableau, basis


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])


# =============================================================================
# SOLVER
# =============================================================================

def solve_feasibility(
    p: LinearFeasibilityProblem,
    feas_tol: float = FEAS_TOL,
    pivot_tol: float = PIVOT_TOL,
) -> LPOutcome:
    """
    Decide la factibilidad de ``p`` con simplex fase 1.

    Args:
        p: Problema de factibilidad
        feas_tol: Violación máxima aceptada en el punto devuelto
        pivot_tol: Magnitud mínima de un pivote y de un costo reducido negativo

    Returns:
        LPOutcome. Si es Feasible, ``point`` satisface todas las restricciones dentro de
        feas_tol. Si es Infeasible, el objetivo de fase 1 (suma de artificiales) en el
        óptimo supera feas_tol y se reporta en ``max_violation``.

    Raises:
        NumericalBreakdown: si se supera el tope de 50·(num_vars + num_constraints)
            iteraciones o la tabla pierde consistencia numérica.
    """
    n = p.num_vars
    m = p.num_constraints
    if m == 0:
        return LPOutcome(LPStatus.FEASIBLE, np.zeros(n), 0.0, 0)

    tableau, basis = _phase_one_tableau(p)
    n_cols = tableau.shape[1] - 1
    cap = ITERATION_FACTOR * (n + m)

    iterations = 0
    while True:
        costs = tableau[m, :n_cols]
        candidates = np.flatnonzero(costs < -pivot_tol)
        if candidates.size == 0:
            break
        if iterations >= cap:
            raise NumericalBreakdown(f"El simplex superó el tope de {cap} iteraciones")

        # Bland: la variable de menor índice entra
        col = int(candidates[0])
        column = tableau[:m, col]
        rows = np.flatnonzero(column > pivot_tol)
        if rows.size == 0:
            # La fase 1 está acotada por 0; una columna sin pivote indica deriva numérica
            raise NumericalBreakdown("Fase 1 no acotada: tabla numéricamente inconsistente")

        ratios = tableau[rows, -1] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + pivot_tol * max(1.0, abs(best))]
        # Bland: entre empates sale la variable básica de menor índice
        row = int(tied[np.argmin(basis[tied])])

        _pivot(tableau, row, col)
        basis[row] = col
        iterations += 1

    phase_one = -float(tableau[m, -1])
    if phase_one > feas_tol:
        logger.debug(
            "LP infactible",
            extra={"extra_data": {"phase_one": phase_one, "iterations": iterations}},
        )
        return LPOutcome(LPStatus.INFEASIBLE, None, phase_one, iterations)

    values = np.zeros(n_cols)
    values[basis] = tableau[:m, -1]
    point = values[:n] - values[n:2 * n]

    violation = p.violation(point)
    if violation > feas_tol:
        raise NumericalBreakdown(f"Punto de fase 1 con violación {violation:.3e} > {feas_tol:.1e}")

    logger.debug(
        "LP factible",
        extra={"extra_data": {"violation": violation, "iterations": iterations}},
    )
    return LPOutcome(LPStatus.FEASIBLE, point, violation, iterations)
