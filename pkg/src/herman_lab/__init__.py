"""Exact and numerical analysis toolkit for Herman's randomized token ring.

The library covers the full verification surface for the 4/27 N^2
worst-case expected stabilization time: the protocol itself in position,
gap and bit form (`ring`), exact rational hitting times and drift
identities on the gap-vector chain (`markov`), the Lyapunov polynomials
and their derivative quantities (`lyapunov`), exact sparse-polynomial
identity checks (`polynomials`), simplex maximization (`optimize`) and
reproducible Monte Carlo estimation (`montecarlo`).
"""

from .lyapunov import ALPHA, V, V3, V5, f, f3, f5
from .markov import (
    CapacityError,
    TransitionLaw,
    delta_moment,
    expected_time_exact,
    expected_time_float,
    lyapunov_bound_check,
    max_expected_time,
    successor_distribution,
    theorem1_bound,
    verify_drift_V,
    verify_drift_V3,
    verify_drift_V5,
    verify_prop17,
)
from .montecarlo import SimStats, coupled_equivalence, estimate, simulate_once
from .optimize import OptimizerConfig, interior_max_scan, kkt_report, maximize
from .polynomials import SparsePolynomial, build_f, build_f3, build_f5
from .ring import (
    BitRing,
    Configuration,
    GapVector,
    apply_step,
    bit_step,
    bits_from_config,
    canonical_rotation,
    config_from_bits,
    config_from_gaps,
    gap_vector,
    parse_configuration,
    parse_gap_vector,
    random_step,
)
from .streams import CoinStream, stream_key

__version__ = "0.1.0"
