"""
posreal: realizaciones positivas de Markov para funciones de transferencia discretas.

Flujo típico::

    from posreal import from_coefficients, normalize_dominant_pole, minimal_markov_dimension

    h = from_coefficients([1], [1, 0, 0, -1])      # 1/(z^3 - 1)
    g, scale = normalize_dominant_pole(h)
    N, cert = minimal_markov_dimension(g)
"""
from posreal.compound import CompoundMode, CompoundPlan, CompoundRealization, compound_realize, decompose
from posreal.config import DEFAULT_CONFIG, Config, load_config
from posreal.errors import PosRealError
from posreal.lp import LinearFeasibilityProblem, LPOutcome, LPStatus, solve_feasibility
from posreal.markov import (
    FeasibilityCertificate,
    StateSpaceRealization,
    build_feasibility_problem,
    find_certificate,
    minimal_markov_dimension,
    realize,
    rescale_realization,
    verify_realization,
)
from posreal.poly import Polynomial, conv, divide, from_roots
from posreal.regions import GridSpec, RegionScan, emit_csv, nesting_check, scan
from posreal.tf import (
    TransferFunction,
    check_external_positivity,
    classify,
    from_coefficients,
    from_zeros_poles,
    markov_parameters,
    normalize_dominant_pole,
    positive_poles,
)
from posreal.theory import (
    RationalPoleAngles,
    certify_exact_minimality,
    check_divisibility_condition,
    detect_rational_angles,
    lemma1_transform,
    perturb_to_rational,
    theorem_certificate,
)

__version__ = "0.1.0"
