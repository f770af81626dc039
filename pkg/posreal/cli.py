"""
Línea de comandos de posreal.

    python -m posreal realize      --tf h.json --dim 5 [--out real.json]
    python -m posreal minimal-dim  --tf h.json [--max 64]
    python -m posreal certify      --tf h.json
    python -m posreal region-scan  --N 3 [--grid 201] --out psi_3.csv
    python -m posreal compound     --tf h.json [--mode series|parallel]
    python -m posreal classify     --tf h.json

Opciones globales: ``--config PATH``, ``--set KEY=VALUE`` (repetible) y
``--log-level``. Códigos de salida: 0 éxito, 1 fallo de dominio (JSON de error en
stderr), 2 error de uso o de configuración.
"""
import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

from posreal.compound import CompoundMode, compound_realize
from posreal.config import Config, load_config
from posreal.errors import (
    ConfigError,
    DecompositionFailed,
    Infeasible,
    InvalidInput,
    MultiplePositivePoles,
    NotExternallyPositive,
    PosRealError,
    TheoremInapplicable,
)
from posreal.logging_setup import configure_logging
from posreal.markov import find_certificate, minimal_markov_dimension, realize, rescale_realization
from posreal.regions import GridSpec, emit_csv, emit_vertex_csv, scan
from posreal.tf import (
    TransferFunction,
    check_external_positivity,
    classify,
    normalize_dominant_pole,
    positive_poles,
    transfer_function_from_json,
)
from posreal.theory import (
    certify_exact_minimality,
    karpelevic_lower_bound,
    theorem_for_transfer_function,
    third_order_lower_bound,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


# =============================================================================
# ENTRADA / SALIDA
# =============================================================================

def _load_tf(path: str, config: Config) -> TransferFunction:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise InvalidInput(f"No se puede leer '{path}': {e}") from e
    except json.JSONDecodeError as e:
        raise InvalidInput(f"JSON inválido en '{path}': {e}") from e
    if not isinstance(data, dict):
        raise InvalidInput("Se esperaba un objeto JSON con 'b'/'a' o 'zeros'/'poles'")
    return transfer_function_from_json(data, config)


def _emit(payload: dict, out: Optional[str] = None) -> None:
    # json usa repr para los float: el valor más corto que se relee bit a bit
    text = json.dumps(payload)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)


def _normalized(args, config: Config) -> tuple:
    h = _load_tf(args.tf, config)
    return normalize_dominant_pole(h, config)


def _require_markov_candidate(g: TransferFunction, config: Config) -> None:
    if len(positive_poles(g, config.axis_tol)) >= 2:
        raise MultiplePositivePoles("multiple positive poles: no Markov realization exists for any N")
    if not check_external_positivity(g, config=config):
        raise NotExternallyPositive("Algún parámetro de Markov es negativo dentro del horizonte")


# =============================================================================
# COMANDOS
# =============================================================================

def cmd_realize(args, config: Config) -> dict:
    g, scale = _normalized(args, config)
    _require_markov_candidate(g, config)
    cert = find_certificate(g, args.dim, config)
    if cert is None:
        raise Infeasible(f"El LP es infactible con N={args.dim}")
    ss = rescale_realization(realize(g, cert, config), scale)
    return {**ss.to_json_dict(), "scale": scale}


def cmd_minimal_dim(args, config: Config) -> dict:
    g, scale = _normalized(args, config)
    _require_markov_candidate(g, config)
    found = minimal_markov_dimension(g, args.max, config)
    if found is None:
        raise Infeasible(f"Ningún N <= {args.max or config.n_max} hace factible el LP")
    N, cert = found
    return {
        "N": N,
        "q": cert.q.to_list(),
        # Ninguna realización tiene dimensión menor que el orden
        "certified_minimal": N == g.order or certify_exact_minimality(g, N, config),
        "scale": scale,
        "lower_bound": karpelevic_lower_bound(g, config),
        "lp_lower_bound": third_order_lower_bound(g, config),
    }


def cmd_certify(args, config: Config) -> dict:
    g, scale = _normalized(args, config)
    cert = theorem_for_transfer_function(g, config)
    if cert is None:
        raise TheoremInapplicable("Los ángulos no son racionales o no cumplen la condición de divisibilidad")
    aq = cert.feasibility_certificate().convolution(g.den)
    return {**cert.to_json_dict(), "max_aq": float(aq.max()), "scale": scale}


def cmd_region_scan(args, config: Config) -> dict:
    grid = GridSpec(steps=args.grid or config.grid_steps)
    region = scan(args.N, grid, config, args.workers)
    emit_csv(region, args.out)
    if args.vertices:
        emit_vertex_csv(args.N, args.vertices)
    return {"N": args.N, "steps": grid.steps, "feasible": region.feasible_count, "out": args.out}


def cmd_compound(args, config: Config) -> dict:
    h = _load_tf(args.tf, config)
    modes = (CompoundMode(args.mode),) if args.mode else (CompoundMode.SERIES, CompoundMode.PARALLEL)
    result = compound_realize(h, args.max, config, modes)
    if result is None:
        raise DecompositionFailed(f"Ninguna descomposición ({', '.join(m.value for m in modes)}) produjo una realización")
    return {"realization": result.realization.to_json_dict(), "plan": result.plan.to_json_dict()}


def cmd_classify(args, config: Config) -> dict:
    g, scale = _normalized(args, config)
    return {**classify(g, config).to_json_dict(), "scale": scale}


COMMANDS = {
    "realize": cmd_realize,
    "minimal-dim": cmd_minimal_dim,
    "certify": cmd_certify,
    "region-scan": cmd_region_scan,
    "compound": cmd_compound,
    "classify": cmd_classify,
}


# =============================================================================
# PARSER
# =============================================================================

def _int_at_least(minimum: int):
    def parse(value: str) -> int:
        try:
            n = int(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"'{value}' no es un entero")
        if n < minimum:
            raise argparse.ArgumentTypeError(f"{n} debe ser >= {minimum}")
        return n

    return parse


_positive_int = _int_at_least(1)
# El barrido de regiones usa sistemas de tercer orden
_scan_dimension = _int_at_least(3)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posreal",
        description="Realizaciones positivas de Markov mediante factibilidad de un LP.",
    )
    parser.add_argument("--config", help="Archivo key=value (por defecto $POSREAL_CONFIG)")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="Sobreescribe un valor de configuración")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("realize", help="Realización de Markov con dimensión fija")
    p.add_argument("--tf", required=True)
    p.add_argument("--dim", type=_positive_int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("minimal-dim", help="Menor dimensión de Markov factible")
    p.add_argument("--tf", required=True)
    p.add_argument("--max", type=_positive_int)
    p.add_argument("--out")

    p = sub.add_parser("certify", help="Certificado constructivo con ángulos racionales")
    p.add_argument("--tf", required=True)
    p.add_argument("--out")

    p = sub.add_parser("region-scan", help="Región de factibilidad de tercer orden")
    p.add_argument("--N", type=_scan_dimension, required=True)
    p.add_argument("--grid", type=_positive_int)
    p.add_argument("--workers", type=_positive_int)
    p.add_argument("--out", required=True)
    p.add_argument("--vertices", help="CSV con los vértices de Karpelevič en el círculo unidad")

    p = sub.add_parser("compound", help="Realización compuesta serie/paralelo")
    p.add_argument("--tf", required=True)
    p.add_argument("--mode", choices=[m.value for m in CompoundMode])
    p.add_argument("--max", type=_positive_int)
    p.add_argument("--out")

    p = sub.add_parser("classify", help="Polos positivos y positividad externa")
    p.add_argument("--tf", required=True)
    p.add_argument("--out")

    return parser


def _parse_overrides(pairs: Sequence[str]) -> dict:
    overrides = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--set espera KEY=VALUE, recibido '{pair}'")
        overrides[key.strip()] = value.strip()
    return overrides


def _report(error: PosRealError) -> None:
    print(json.dumps(error.to_json_dict()), file=sys.stderr)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Ejecuta un comando y devuelve el código de salida.

    Args:
        argv: Argumentos sin el nombre del programa (por defecto ``sys.argv[1:]``)

    Returns:
        0 éxito, 1 fallo de dominio, 2 error de uso o de configuración.
    """
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    try:
        config = load_config(args.config, _parse_overrides(args.set))
    except ConfigError as e:
        _report(e)
        return EXIT_USAGE

    configure_logging(args.log_level or config.log_level)
    logger.debug("Comando", extra={"extra_data": {"command": args.command}})

    try:
        payload = COMMANDS[args.command](args, config)
    except PosRealError as e:
        logger.info("Fallo de dominio", extra={"extra_data": {"error": e.code}})
        _report(e)
        return EXIT_DOMAIN

    _emit(payload, getattr(args, "out", None) if args.command != "region-scan" else None)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
