"""
Regiones de factibilidad para sistemas de tercer orden.

Para cada punto (x, y) del plano se toma el denominador

    a(z) = (z - 1)(z^2 - 2xz + x^2 + y^2)

(polo dominante en 1 y par complejo x ± iy) y se decide si el LP de la realización
de Markov es factible con dimensión N. El conjunto de puntos factibles es la región
Psi_N; crece con N.
"""
import asyncio
import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import IntEnum
from itertools import repeat
from pathlib import Path
from typing import Optional, Union

import numpy as np

from posreal.config import DEFAULT_CONFIG, Config
from posreal.errors import GridMismatch, InvalidInput, NumericalBreakdown
from posreal.markov import find_certificate_for_denominator
from posreal.poly import Polynomial, conv
from posreal.theory import karpelevic_vertices

logger = logging.getLogger(__name__)

CSV_HEADER = ("x", "y", "N", "feasible")
UNIT_DISK_TOL = 1e-12


class CellStatus(IntEnum):
    SKIPPED = -1
    INFEASIBLE = 0
    FEASIBLE = 1


@dataclass(frozen=True)
class GridSpec:
    """Rejilla rectangular con ``steps`` puntos por eje (extremos incluidos)."""

    x_min: float = -1.0
    x_max: float = 1.0
    y_min: float = -1.0
    y_max: float = 1.0
    steps: int = 201

    def __post_init__(self):
        if self.steps < 1:
            raise InvalidInput("La rejilla necesita al menos un punto por eje")
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise InvalidInput("Rangos de rejilla invertidos")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.steps)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.steps)


@dataclass(eq=False)
class RegionScan:
    """
    Resultado de un barrido: ``results[i, j]`` es el estado de la celda (xs[j], ys[i])
    codificado con CellStatus.
    """

    N: int
    grid: GridSpec
    results: np.ndarray

    def __post_init__(self):
        self.results = np.asarray(self.results, dtype=np.int8)
        if self.results.shape != (self.grid.steps, self.grid.steps):
            raise GridMismatch(f"Resultados {self.results.shape} para una rejilla de {self.grid.steps} pasos")

    def status(self, i: int, j: int) -> CellStatus:
        return CellStatus(int(self.results[i, j]))

    def feasible_points(self) -> list:
        rows, cols = np.nonzero(self.results == CellStatus.FEASIBLE)
        xs, ys = self.grid.xs, self.grid.ys
        return [(float(xs[j]), float(ys[i])) for i, j in zip(rows, cols)]

    @property
    def feasible_count(self) -> int:
        return int(np.count_nonzero(self.results == CellStatus.FEASIBLE))


# =============================================================================
# CELDAS
# =============================================================================

def third_order_denominator(x: float, y: float) -> Polynomial:
    """(z - 1)(z^2 - 2xz + x^2 + y^2)."""
    return conv(Polynomial([1.0, -1.0]), Polynomial([1.0, -2.0 * x, x * x + y * y]))


def _skipped(x: float, y: float) -> bool:
    # Polos reales fuera de la familia; fuera del disco el polo 1 deja de ser dominante
    return y == 0.0 or x * x + y * y > 1.0 + UNIT_DISK_TOL


def cell_feasible(x: float, y: float, N: int, config: Optional[Config] = None) -> bool:
    """
    Factibilidad del LP con dimensión N para el denominador de tercer orden en (x, y).

    Example:
        >>> cell_feasible(-0.5, math.sqrt(3) / 2, 3)      # z^3 - 1
        True
    """
    return find_certificate_for_denominator(third_order_denominator(x, y), N, config) is not None


def _row_key(y: float) -> float:
    # y y -y comparten fila aunque linspace no sea exactamente simétrico
    return round(abs(float(y)), 12)


def _evaluate_row(xs: np.ndarray, y: float, N: int, config: Config) -> np.ndarray:
    """Fila de estados para un |y| fijo. Función de módulo para poder usarla en un pool de procesos."""
    row = np.full(xs.size, CellStatus.SKIPPED, dtype=np.int8)
    for j, x in enumerate(xs):
        x = float(x)
        if _skipped(x, y):
            continue
        try:
            feasible = cell_feasible(x, y, N, config)
        except NumericalBreakdown as e:
            logger.warning("Celda sin solución numérica", extra={"extra_data": {"x": x, "y": y, "N": N, "detail": str(e)}})
            feasible = False
        row[j] = CellStatus.FEASIBLE if feasible else CellStatus.INFEASIBLE
    return row


async def _evaluate_rows_parallel(xs: np.ndarray, ys_abs: list, N: int, config: Config, workers: int) -> list:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        tasks = [loop.run_in_executor(pool, _evaluate_row, xs, y, N, config) for y in ys_abs]
        return await asyncio.gather(*tasks)


def _evaluate_rows_in_pool(xs: np.ndarray, ys_abs: list, N: int, config: Config, workers: int) -> list:
    """Reparto síncrono para cuando ya hay un event loop corriendo (p. ej. un notebook)."""
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate_row, repeat(xs), ys_abs, repeat(N), repeat(config)))


def _loop_is_running() -> bool:
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return False
    return True


# =============================================================================
# BARRIDO
# =============================================================================

def scan(
    N: int,
    grid: Optional[GridSpec] = None,
    config: Optional[Config] = None,
    workers: Optional[int] = None,
) -> RegionScan:
    """
    Barre la rejilla y decide la factibilidad de cada celda.

    Solo se resuelven las filas con y >= 0; cada fila con y < 0 copia la de |y|, así que
    la simetría conjugada es exacta. Con ``workers > 1`` las filas se reparten en un
    pool de procesos y se ensamblan por índice. Si ya hay un event loop corriendo
    (un notebook, por ejemplo) el pool se usa con ``map`` en lugar de ``asyncio.run``.

    Args:
        N: Dimensión de la realización (>= 3)
        grid: Rejilla; por defecto [-1, 1]^2 con ``config.grid_steps`` puntos por eje
        workers: Procesos; por defecto ``config.workers``

    Returns:
        RegionScan con los estados de todas las celdas.
    """
    config = config or DEFAULT_CONFIG
    if N < 3:
        raise InvalidInput(f"N={N}: el sistema de tercer orden necesita N >= 3")
    grid = grid or GridSpec(steps=config.grid_steps)
    workers = workers or config.workers

    xs, ys = grid.xs, grid.ys
    ys_abs = sorted({_row_key(y) for y in ys})

    logger.info(
        "Barrido de región",
        extra={"extra_data": {"N": N, "steps": grid.steps, "rows": len(ys_abs), "workers": workers}},
    )
    if workers > 1 and _loop_is_running():
        # asyncio.run no puede anidarse dentro de un loop activo
        rows = _evaluate_rows_in_pool(xs, ys_abs, N, config, workers)
    elif workers > 1:
        rows = asyncio.run(_evaluate_rows_parallel(xs, ys_abs, N, config, workers))
    else:
        rows = []
        for k, y in enumerate(ys_abs):
            rows.append(_evaluate_row(xs, y, N, config))
            if (k + 1) % 20 == 0:
                logger.info("Progreso del barrido", extra={"extra_data": {"N": N, "rows_done": k + 1}})

    by_abs = dict(zip(ys_abs, rows))
    results = np.stack([by_abs[_row_key(y)] for y in ys])
    region = RegionScan(N=N, grid=grid, results=results)
    logger.info("Barrido terminado", extra={"extra_data": {"N": N, "feasible": region.feasible_count}})
    return region


def nesting_check(s_lo: RegionScan, s_hi: RegionScan) -> bool:
    """
    True si toda celda factible de ``s_lo`` también lo es en ``s_hi``.

    Raises:
        GridMismatch: si las rejillas difieren.
    """
    if s_lo.grid != s_hi.grid:
        raise GridMismatch(f"Rejillas distintas: {s_lo.grid} vs {s_hi.grid}")
    if s_hi.N <= s_lo.N:
        raise InvalidInput(f"Se esperaba N creciente, recibido {s_lo.N} y {s_hi.N}")

    lost = (s_lo.results == CellStatus.FEASIBLE) & (s_hi.results != CellStatus.FEASIBLE)
    if np.any(lost):
        logger.warning(
            "Celdas factibles que desaparecen al crecer N",
            extra={"extra_data": {"N_lo": s_lo.N, "N_hi": s_hi.N, "count": int(np.count_nonzero(lost))}},
        )
        return False
    return True


def vertex_overlay(N: int) -> list:
    """
    Puntos exp(i 2π l/m) del círculo unidad que la región de Karpelevič de orden N - 1
    alcanza, como (x, y, l, m), ordenados por ángulo.
    """
    points = sorted(karpelevic_vertices(N), key=lambda lm: lm[0] / lm[1])
    return [
        (math.cos(2 * math.pi * l / m), math.sin(2 * math.pi * l / m), l, m)
        for l, m in points
    ]


# =============================================================================
# CSV
# =============================================================================

def emit_csv(s: RegionScan, path: Union[str, Path]) -> None:
    """CSV ``x,y,N,feasible`` en orden de filas de la rejilla; las celdas omitidas no se escriben."""
    xs, ys = s.grid.xs, s.grid.ys
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_HEADER)
        for i, y in enumerate(ys):
            for j, x in enumerate(xs):
                status = s.results[i, j]
                if status == CellStatus.SKIPPED:
                    continue
                writer.writerow((repr(float(x)), repr(float(y)), s.N, int(status)))


def emit_vertex_csv(N: int, path: Union[str, Path]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(("x", "y", "l", "m"))
        for x, y, l, m in vertex_overlay(N):
            writer.writerow((repr(x), repr(y), l, m))


def _grid_index(values: np.ndarray, v: float, axis: str) -> int:
    k = int(np.argmin(np.abs(values - v)))
    if not math.isclose(values[k], v, rel_tol=1e-12, abs_tol=1e-12):
        raise GridMismatch(f"{axis}={v!r} no pertenece a la rejilla")
    return k


def read_csv(path: Union[str, Path], grid: GridSpec, N: int) -> RegionScan:
    """
    Lee un CSV escrito por ``emit_csv``. Las celdas ausentes quedan como SKIPPED.

    Raises:
        GridMismatch: si un punto no está en la rejilla o la columna N no coincide.
        InvalidInput: si la cabecera o alguna fila es inválida.
    """
    results = np.full((grid.steps, grid.steps), CellStatus.SKIPPED, dtype=np.int8)
    xs, ys = grid.xs, grid.ys
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise InvalidInput(f"Cabecera CSV inesperada: {header}")
        for line, row in enumerate(reader, start=2):
            try:
                x, y, n, feasible = float(row[0]), float(row[1]), int(row[2]), int(row[3])
            except (IndexError, ValueError) as e:
                raise InvalidInput(f"Fila {line} inválida: {row}") from e
            if n != N:
                raise GridMismatch(f"Fila {line} con N={n}, se esperaba {N}")
            if feasible not in (0, 1):
                raise InvalidInput(f"Fila {line}: feasible debe ser 0 o 1")
            results[_grid_index(ys, y, "y"), _grid_index(xs, x, "x")] = feasible
    return RegionScan(N=N, grid=grid, results=results)
