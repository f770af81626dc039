"""
Jerarquía de excepciones de posreal.

Cada excepción lleva un ``code`` estable (snake_case) que la CLI usa en el JSON de
error que escribe en stderr: ``{"error": code, "detail": "..."}``.
"""


class PosRealError(Exception):
    """Error base del paquete."""

    code = "posreal_error"

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.code)
        self.detail = detail or self.code

    def to_json_dict(self) -> dict:
        return {"error": self.code, "detail": self.detail}


# =============================================================================
# POLINOMIOS Y PROGRAMACIÓN LINEAL
# =============================================================================

class NonConjugateRoots(PosRealError):
    code = "non_conjugate_roots"


class DegreeMismatch(PosRealError):
    code = "degree_mismatch"


class NumericalBreakdown(PosRealError):
    code = "numerical_breakdown"


class ShapeMismatch(PosRealError):
    code = "shape_mismatch"


# =============================================================================
# FUNCIONES DE TRANSFERENCIA
# =============================================================================

class NotStrictlyProper(PosRealError):
    code = "not_strictly_proper"


class CommonFactor(PosRealError):
    code = "common_factor"


class NotMonic(PosRealError):
    code = "not_monic"


class NonpositiveDominantPole(PosRealError):
    code = "nonpositive_dominant_pole"


class NotNormalized(PosRealError):
    code = "not_normalized"


# =============================================================================
# REALIZACIONES DE MARKOV Y TEORÍA
# =============================================================================

class DimensionTooSmall(PosRealError):
    code = "dimension_too_small"


class InvalidCertificate(PosRealError):
    code = "invalid_certificate"


class ConditionViolated(PosRealError):
    code = "condition_violated"


class InexactDivision(PosRealError):
    code = "inexact_division"


class Unreachable(PosRealError):
    code = "unreachable"


class NoUnitRoot(PosRealError):
    code = "no_unit_root"


class NotEnoughPositivePoles(PosRealError):
    code = "not_enough_positive_poles"


class GridMismatch(PosRealError):
    code = "grid_mismatch"


# =============================================================================
# ENTRADA, CONFIGURACIÓN Y FALLOS DE DOMINIO DE LA CLI
# =============================================================================

class InvalidInput(PosRealError):
    code = "invalid_input"


class ConfigError(PosRealError):
    code = "config_error"


class Infeasible(PosRealError):
    code = "infeasible"


class MultiplePositivePoles(PosRealError):
    code = "multiple_positive_poles"


class NotExternallyPositive(PosRealError):
    code = "not_externally_positive"


class TheoremInapplicable(PosRealError):
    code = "theorem_inapplicable"


class DecompositionFailed(PosRealError):
    code = "decomposition_failed"
