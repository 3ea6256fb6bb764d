"""Closed-form solution families and brute-force verification for
convolution-type sine/cosine functional equations on finitely generated
abelian groups."""

from .families import (
    CombinedCase,
    Incompatible,
    ParameterError,
    SolutionFamily,
    SolutionParams,
    Theorem,
    build,
    build_combined_case,
    build_even_case,
    build_odd_case,
    compose_FH,
    pair_cases,
    split_FH,
)
from .functions import (
    AdditiveFunction,
    ExpPolyFunction,
    Exponential,
    TableFunction,
    TwoGPeriodic,
    check_exponential,
    enumerate_exponentials,
    even_part,
    odd_part,
)
from .groups import GroupSpec, coset_2g, enumerate_elements
from .measures import Measure, convolve, invert, mu_hat, translate
from .solvers import reduce_dalembert, reduce_gajda, solve_fech, solve_wilson_modified
from .verify import Domain, NotRank1, Rank1, rank1_factorize, residual_dalem1, residual_sincos

__version__ = "0.1.0"

_MODULES = {"cli", "families", "functions", "groups", "jsonio", "measures", "solvers", "verify"}
__all__ = [name for name in dir() if not name.startswith("_") and name not in _MODULES]
