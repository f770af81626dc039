"""
Configuración de posreal.

Todas las tolerancias, horizontes y límites viven en un único registro validado
(``Config``). Se puede cargar desde un archivo ``key=value`` (formato dotenv, por
ejemplo ``posreal.toml`` o ``posreal.env``) cuya ruta se indica con la variable de
entorno ``POSREAL_CONFIG``, y cada valor se puede sobreescribir desde la CLI.

Ejemplo de archivo::

    FEAS_TOL=1e-9
    N_MAX=96
    POSREAL_GRID_STEPS=101
"""
import os
from typing import Any, Literal, Mapping, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from posreal.errors import ConfigError

CONFIG_ENV_VAR = "POSREAL_CONFIG"
KEY_PREFIX = "posreal_"


class Config(BaseModel):
    """Registro inmutable con todas las tolerancias del pipeline."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # poly
    conj_tol: float = Field(default=1e-9, gt=0, description="Residuo imaginario permitido en from_roots")
    rem_tol: float = Field(default=1e-9, gt=0, description="Residuo relativo permitido en divide")

    # lp
    feas_tol: float = Field(default=1e-9, gt=0, description="Violación máxima de restricciones")
    pivot_tol: float = Field(default=1e-10, gt=0, description="Magnitud mínima de pivote")

    # tf
    axis_tol: float = Field(default=1e-9, gt=0, description="Distancia al eje real positivo")
    coprime_tol: float = Field(default=1e-7, gt=0, description="Distancia mínima polo-cero")
    pos_tol: float = Field(default=1e-9, gt=0, description="Holgura del test de positividad externa")
    positivity_horizon: Optional[int] = Field(default=None, ge=1, description="None = max(100, 20n)")

    # markov
    n_max: int = Field(default=64, ge=1, description="Dimensión máxima de búsqueda")
    verify_tol: float = Field(default=1e-8, gt=0, description="Tolerancia del oráculo de realización")

    # theory
    angle_tol: float = Field(default=1e-9, gt=0, description="Tolerancia de ángulos racionales")
    max_denominator: int = Field(default=64, ge=1, description="Denominador máximo de ángulos")

    # regions
    grid_steps: int = Field(default=201, ge=2, description="Puntos por eje de la malla")
    workers: int = Field(default=1, ge=1, description="Procesos para el barrido de regiones")

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"

    def horizon_for(self, order: int) -> int:
        """Horizonte del test de positividad externa para un sistema de orden ``order``."""
        if self.positivity_horizon is not None:
            return self.positivity_horizon
        return max(100, 20 * order)

    def with_overrides(self, **overrides: Any) -> "Config":
        """Copia validada con algunos campos cambiados."""
        return _build({**self.model_dump(), **overrides})


DEFAULT_CONFIG = Config()


def _normalize_key(key: str) -> str:
    key = key.strip().lower()
    if key.startswith(KEY_PREFIX):
        key = key[len(KEY_PREFIX):]
    return key


def _build(values: Mapping[str, Any]) -> Config:
    try:
        return Config(**values)
    except ValidationError as e:
        raise ConfigError(f"Configuración inválida: {e.errors(include_url=False)}") from e


def load_config(path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> Config:
    """
    Carga la configuración.

    Args:
        path: Archivo ``key=value``. Si es None se usa ``$POSREAL_CONFIG``; si tampoco
            existe, los valores por defecto.
        overrides: Valores que ganan sobre los del archivo (p. ej. ``--set`` de la CLI).

    Returns:
        Config validado.

    Raises:
        ConfigError: archivo inexistente, clave desconocida o valor inválido.
    """
    path = path or os.getenv(CONFIG_ENV_VAR)
    values: dict[str, Any] = {}

    if path:
        if not os.path.isfile(path):
            raise ConfigError(f"No existe el archivo de configuración '{path}'")
        for key, value in dotenv_values(path).items():
            if value is None:
                raise ConfigError(f"La clave '{key}' no tiene valor en '{path}'")
            values[_normalize_key(key)] = value

    for key, value in (overrides or {}).items():
        values[_normalize_key(key)] = value

    return _build(values)
