"""Exact computation in the Iwasawa algebra Z_p[[T]] at finite precision.

Functional equations of p-adic L-functions, their parity and Taylor
consequences, and the mu/lambda invariance of conjugate twists.
"""

from .functional_equation import (
    CurveContext,
    FEParams,
    Flavor,
    Verdict,
    check_fe,
    f_pm_derivative_at_zero,
    parity_check,
    phi,
    pm_taylor_relation,
    symmetrize,
    taylor_relation,
    w_series,
)
from .harness import SuiteConfig, random_series, run_suite, twist, unit_invariance_check
from .invariants import invariant_report, lambda_invariant, mu_invariant, weierstrass_prepare
from .padic import (
    PadicContext,
    PadicInt,
    log_gamma,
    one_unit_projection,
    padic_binomial,
    padic_log,
    valuation,
)
from .series import (
    Certificate,
    TruncatedSeries,
    compose,
    invert_unit,
    one_plus_T_pow,
    order_of_vanishing,
    sigma,
)

__version__ = "0.1.0"
