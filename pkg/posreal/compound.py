"""
Realizaciones compuestas para sistemas con varios polos positivos.

Ningún sistema con dos o más polos positivos admite una realización de Markov
positiva. Si se descompone en subsistemas en serie o en paralelo con un único polo
positivo cada uno, cada parte se realiza con el LP y las realizaciones se combinan
por bloques. La dimensión total es la suma de las dimensiones de las partes.
"""
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np
from scipy.linalg import block_diag
from scipy.signal import invres, residue

from posreal.config import DEFAULT_CONFIG, Config
from posreal.errors import NonpositiveDominantPole, NotEnoughPositivePoles, PosRealError
from posreal.markov import (
    StateSpaceRealization,
    minimal_markov_dimension,
    realize,
    rescale_realization,
    verify_realization,
)
from posreal.poly import from_roots
from posreal.tf import (
    TransferFunction,
    check_external_positivity,
    from_coefficients,
    normalize_dominant_pole,
    positive_poles,
)

logger = logging.getLogger(__name__)

RESIDUE_IMAG_TOL = 1e-8


class CompoundMode(str, Enum):
    SERIES = "series"
    PARALLEL = "parallel"


@dataclass(frozen=True)
class CompoundPlan:
    """Partes (cada una con un único polo positivo) y sus dimensiones N_i."""

    mode: CompoundMode
    parts: tuple
    dims: tuple = field(default=())

    @property
    def total_dimension(self) -> int:
        return sum(self.dims)

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "parts": [part.to_json_dict() for part in self.parts],
            "dims": list(self.dims),
        }


@dataclass(eq=False)
class CompoundRealization:
    realization: StateSpaceRealization
    plan: CompoundPlan


# =============================================================================
# COMPOSICIÓN POR BLOQUES
# =============================================================================

def series_compose(s1: StateSpaceRealization, s2: StateSpaceRealization) -> StateSpaceRealization:
    """
    Cascada u -> s1 -> s2 -> y:

        A = [[A1, 0], [B2·C1, A2]],  B = [B1; 0],  C = [0, C2]

    Si ambas entradas son no negativas, la salida también lo es.
    """
    n1, n2 = s1.dimension, s2.dimension
    A = np.block([
        [s1.A, np.zeros((n1, n2))],
        [np.outer(s2.B, s1.C), s2.A],
    ])
    B = np.concatenate([s1.B, np.zeros(n2)])
    C = np.concatenate([np.zeros(n1), s2.C])
    return StateSpaceRealization(A=A, B=B, C=C, max_clamp=max(s1.max_clamp, s2.max_clamp))


def parallel_compose(s1: StateSpaceRealization, s2: StateSpaceRealization) -> StateSpaceRealization:
    """A = diag(A1, A2), B = [B1; B2], C = [C1, C2]: los parámetros de Markov se suman."""
    return StateSpaceRealization(
        A=block_diag(s1.A, s2.A),
        B=np.concatenate([s1.B, s2.B]),
        C=np.concatenate([s1.C, s2.C]),
        max_clamp=max(s1.max_clamp, s2.max_clamp),
    )


# =============================================================================
# DESCOMPOSICIÓN
# =============================================================================

def _group_index(pole: complex, anchors: list) -> int:
    """Grupo del polo positivo más cercano en módulo (empates: el de mayor módulo)."""
    distances = [abs(abs(pole) - p) for p in anchors]
    return int(np.argmin(distances))


def _group_poles(h: TransferFunction, anchors: list, axis_tol: float) -> list:
    groups = [[complex(p)] for p in anchors]
    positives = set(positive_poles(h, axis_tol))
    for p in h.poles:
        if p in positives:
            continue
        groups[_group_index(p, anchors)].append(p)
    return groups


def _assign_zeros(h: TransferFunction, anchors: list, capacity: list) -> Optional[list]:
    """
    Reparte los ceros entre los grupos: cada cero va al grupo cuyo polo positivo está más
    cerca; si el grupo ya tiene grado(num) = grado(den) - 1, pasa al siguiente más cercano.
    Los pares conjugados se mueven juntos.
    """
    assigned = [[] for _ in anchors]
    pending = sorted(h.zeros, key=lambda z: (abs(z), np.angle(z) % (2 * np.pi)))
    units = []
    while pending:
        z = pending.pop(0)
        if abs(z.imag) > 0:
            mate = min(pending, key=lambda w: abs(w - z.conjugate()))
            pending.remove(mate)
            units.append([z, mate])
        else:
            units.append([z])

    for unit in units:
        order = np.argsort([abs(unit[0] - p) for p in anchors], kind="stable")
        for g in order:
            if len(assigned[g]) + len(unit) <= capacity[g]:
                assigned[g].extend(unit)
                break
        else:
            return None
    return assigned


def _series_parts(h: TransferFunction, anchors: list, config: Config) -> Optional[list]:
    groups = _group_poles(h, anchors, config.axis_tol)
    zeros = _assign_zeros(h, anchors, [len(g) - 1 for g in groups])
    if zeros is None:
        logger.info("Ceros sin grupo: la serie no puede ser estrictamente propia")
        return None

    parts = []
    for k, (poles, group_zeros) in enumerate(zip(groups, zeros)):
        den = from_roots(poles, config.conj_tol)
        num = from_roots(group_zeros, config.conj_tol)
        gain = h.gain if k == 0 else 1.0
        parts.append(from_coefficients(gain * num.array, den.array, config))
    return parts


def _parallel_parts(h: TransferFunction, anchors: list, config: Config) -> Optional[list]:
    residues, poles, _ = residue(h.num.trim().array, h.den.array)
    grouped = [([], []) for _ in anchors]
    for r, p in zip(residues, poles):
        rs, ps = grouped[_group_index(p, anchors)]
        rs.append(r)
        ps.append(p)

    parts = []
    for rs, ps in grouped:
        b, a = invres(rs, ps, [])
        if np.max(np.abs(np.imag(b)), initial=0.0) > RESIDUE_IMAG_TOL or np.max(np.abs(np.imag(a))) > RESIDUE_IMAG_TOL:
            logger.warning("Grupo con residuos no conjugados")
            return None
        b, a = np.real(b), np.real(a)
        b = np.where(np.abs(b) <= RESIDUE_IMAG_TOL * max(1.0, float(np.max(np.abs(b)))), 0.0, b)
        parts.append(from_coefficients(np.trim_zeros(b, "f"), a / a[0], config))
    return parts


def decompose(h: TransferFunction, mode: CompoundMode, config: Optional[Config] = None) -> Optional[CompoundPlan]:
    """
    Descompone H en partes con un único polo positivo cada una.

    Cada polo no positivo se asigna al grupo del polo positivo más cercano en módulo.
    En paralelo las partes salen de la expansión en fracciones parciales agrupada; en
    serie se factoriza el denominador y los ceros se reparten manteniendo cada parte
    estrictamente propia. Toda parte debe pasar el test de positividad externa.

    Returns:
        CompoundPlan sin dimensiones, o None si la descomposición no es viable.

    Raises:
        NotEnoughPositivePoles: si n_+ < 2.
    """
    config = config or DEFAULT_CONFIG
    count = len(positive_poles(h, config.axis_tol))
    if count < 2:
        raise NotEnoughPositivePoles(f"n_+ = {count}; se necesitan al menos 2 polos positivos")

    anchors = sorted((p.real for p in positive_poles(h, config.axis_tol)), reverse=True)
    mode = CompoundMode(mode)
    try:
        if mode is CompoundMode.SERIES:
            parts = _series_parts(h, anchors, config)
        else:
            parts = _parallel_parts(h, anchors, config)
    except PosRealError as e:
        logger.warning("Descomposición inválida", extra={"extra_data": {"mode": mode.value, "detail": str(e)}})
        return None
    if parts is None:
        return None

    for k, part in enumerate(parts):
        if not check_external_positivity(part, config=config):
            logger.info(
                "Parte sin positividad externa",
                extra={"extra_data": {"mode": mode.value, "part": k}},
            )
            return None
    return CompoundPlan(mode=mode, parts=tuple(parts))


# =============================================================================
# REALIZACIÓN COMPUESTA
# =============================================================================

def _realize_part(part: TransferFunction, n_max: int, config: Config) -> Optional[StateSpaceRealization]:
    try:
        normalized, scale = normalize_dominant_pole(part, config)
    except NonpositiveDominantPole:
        return None
    found = minimal_markov_dimension(normalized, n_max, config)
    if found is None:
        return None
    _, cert = found
    return rescale_realization(realize(normalized, cert, config), scale)


def compound_realize(
    h: TransferFunction,
    n_max: Optional[int] = None,
    config: Optional[Config] = None,
    modes: tuple = (CompoundMode.SERIES, CompoundMode.PARALLEL),
) -> Optional[CompoundRealization]:
    """
    Realización positiva compuesta: prueba serie y luego paralelo.

    Cada parte se normaliza por su propio polo dominante, se realiza con la dimensión
    de Markov mínima, se desescala y se compone. El resultado se verifica contra H.

    Returns:
        CompoundRealization (realización + plan con dims) o None si ningún modo funciona.
    """
    config = config or DEFAULT_CONFIG
    n_max = n_max or config.n_max

    for mode in modes:
        plan = decompose(h, mode, config)
        if plan is None:
            continue
        realizations = [_realize_part(part, n_max, config) for part in plan.parts]
        if any(ss is None for ss in realizations):
            logger.info("Alguna parte no admite realización de Markov", extra={"extra_data": {"mode": plan.mode.value}})
            continue

        compose = series_compose if plan.mode is CompoundMode.SERIES else parallel_compose
        total = realizations[0]
        for ss in realizations[1:]:
            total = compose(total, ss)

        if not verify_realization(total, h, config=config):
            logger.warning("La realización compuesta no verifica", extra={"extra_data": {"mode": plan.mode.value}})
            continue

        plan = replace(plan, dims=tuple(ss.dimension for ss in realizations))
        logger.info("Realización compuesta", extra={"extra_data": {"mode": plan.mode.value, "dims": list(plan.dims)}})
        return CompoundRealization(realization=total, plan=plan)

    return None
