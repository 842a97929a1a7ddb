"""Ferrers (associated Legendre) functions of large degree and order.

Uniform asymptotic evaluation of P and Q of order -mu on (-1, 1) built
from parabolic cylinder functions, with the slowly varying coefficient
functions recovered by exact-rational recursions, turning-point Taylor
series and Cauchy contour integrals, plus independent series/ODE oracles
for every layer.
"""

from __future__ import annotations

from .numerics import (
    DEFAULT_DIGITS,
    BranchAmbiguityError,
    DomainError,
    GeometryError,
    InconsistencyError,
    PrecisionLossError,
    RangeError,
    RootNotFoundError,
    SearchError,
    ToleranceError,
    digits,
    extradps,
    set_digits,
    workdps,
)
from .tpgeom import (
    Params,
    TpPoint,
    alpha_from_a,
    control_radius,
    params_from_nu_a,
    params_from_nu_mu,
    sqrt_pair,
    xi,
    zeta,
    zeta_path,
    zeta_taylor,
)
from .coeffs import (
    DConstants,
    combined_E,
    d_check,
    d_constants,
    dump_coeffs,
    gen_leg_E,
    gen_pcf_e,
    gen_pcf_etilde,
)
from .pcf import PcfValue, pcf_connection_check, pcf_eval, pcf_lg
from .legendre import (
    AbPair,
    EnvelopeValue,
    ab_contour,
    ab_expansion,
    ab_taylor,
    envelope,
    eval_P,
    eval_P_neg,
    eval_P_prime,
    eval_Q,
    eval_Q_prime,
    omega_error,
    ring_taylor_coefficients,
)
from .oracle import (
    ab_exact_ref,
    ferrers_P_prime_ref,
    ferrers_P_ref,
    ferrers_Q_prime_ref,
    ferrers_Q_ref,
    ferrers_wronskian_ref,
    legendre_ode_P_ref,
    pcf_ode_ref,
    xi_quad_ref,
)

__version__ = "0.1.0"

__all__ = [
    "AbPair",
    "BranchAmbiguityError",
    "DConstants",
    "DEFAULT_DIGITS",
    "DomainError",
    "EnvelopeValue",
    "GeometryError",
    "InconsistencyError",
    "Params",
    "PcfValue",
    "PrecisionLossError",
    "RangeError",
    "RootNotFoundError",
    "SearchError",
    "ToleranceError",
    "TpPoint",
    "ab_contour",
    "ab_exact_ref",
    "ab_expansion",
    "ab_taylor",
    "alpha_from_a",
    "combined_E",
    "control_radius",
    "d_check",
    "d_constants",
    "digits",
    "dump_coeffs",
    "envelope",
    "eval_P",
    "eval_P_neg",
    "eval_P_prime",
    "eval_Q",
    "eval_Q_prime",
    "extradps",
    "ferrers_P_prime_ref",
    "ferrers_P_ref",
    "ferrers_Q_prime_ref",
    "ferrers_Q_ref",
    "ferrers_wronskian_ref",
    "gen_leg_E",
    "gen_pcf_e",
    "gen_pcf_etilde",
    "legendre_ode_P_ref",
    "omega_error",
    "params_from_nu_a",
    "params_from_nu_mu",
    "pcf_connection_check",
    "pcf_eval",
    "pcf_lg",
    "pcf_ode_ref",
    "ring_taylor_coefficients",
    "set_digits",
    "sqrt_pair",
    "workdps",
    "xi",
    "xi_quad_ref",
    "zeta",
    "zeta_path",
    "zeta_taylor",
    "__version__",
]
