"""Largest-block statistics of near-critical uniform random graphs.

Exact enumeration of the coefficient tables, floating-point evaluation of
the subcritical and critical-window limit constants, and a reproducible
Monte-Carlo simulator to validate both against sampled graphs.
"""

from .exactalg import LaurentSeries, MultiPoly, Rational, TruncationError
from .enumeration import (
    CoeffTables,
    DegreeSpec,
    beta_series,
    block_b,
    coeff_c,
    cubic_g,
    cubic_t,
    poly_e,
    tables_build,
    tables_load,
    tables_save,
    tree_count,
    tree_gf,
)
from .analysis import (
    AnalysisConfig,
    C2Breakdown,
    QuadratureError,
    TailMassError,
    airy_A,
    alpha_of_lambda,
    c2_integrand,
    compute_c1,
    compute_c2,
    exp_integral_E1,
)
from .graphsim import (
    Graph,
    SimResult,
    biconnected_components,
    exact_expectation,
    lambda_to_m,
    max_block_size,
    run_monte_carlo,
    sample_gnm,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "C2Breakdown",
    "CoeffTables",
    "DegreeSpec",
    "Graph",
    "LaurentSeries",
    "MultiPoly",
    "QuadratureError",
    "Rational",
    "SimResult",
    "TailMassError",
    "TruncationError",
    "airy_A",
    "alpha_of_lambda",
    "beta_series",
    "biconnected_components",
    "block_b",
    "c2_integrand",
    "coeff_c",
    "compute_c1",
    "compute_c2",
    "cubic_g",
    "cubic_t",
    "exact_expectation",
    "exp_integral_E1",
    "lambda_to_m",
    "max_block_size",
    "poly_e",
    "run_monte_carlo",
    "sample_gnm",
    "tables_build",
    "tables_load",
    "tables_save",
    "tree_count",
    "tree_gf",
]
