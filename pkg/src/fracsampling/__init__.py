"""Rate-distortion trade-offs for computing functions of two correlated
sources when each source may only be sampled on a fraction of time instants."""

from .binary import BinaryAndSolution, and_dmin, and_rd, xor_rd
from .combiner import (
    DistortionAllocation,
    FractionDecomposition,
    RateAllocation,
    decompose,
    decomposition_builder,
    distortion_rate_profile,
    dmin_budget,
    dmin_profile,
    optimize_overlap,
    rate_distortion_profile,
)
from .core import (
    DegenerateModelError,
    DomainError,
    DsbsModel,
    FracSamplingError,
    GaussianPairModel,
    InfeasibleDistortionError,
    NoFeasiblePointError,
    ProfileWeights,
    RegimeError,
    SamplingBudget,
    SamplingProfile,
    TargetFunction,
    binary_entropy,
    inv_binary_entropy,
    theta12_bounds,
    validate_profile,
)
from .gaussian import (
    GaussianSumSolution,
    identity_dr,
    small_rate_threshold,
    sum_dmin,
    sum_dr,
    sum_dr_nonpos_rho,
    sum_dr_smallrate,
)
from .multihop import (
    MultiHopRates,
    MultiHopUpperSolution,
    decoder_cut_bound,
    multihop_upper_bound,
    recompress_d0,
    sideinfo_lower_bound,
)
from .primitives import (
    FractionRdFunction,
    binary_and_indirect_dr,
    binary_and_indirect_rd,
    binary_direct_dr,
    binary_direct_rd,
    gaussian_direct_dr,
    gaussian_indirect_dr,
)
from .worstcase import dmu_budget, dmu_profile, mu_transition, worst_case_term

__version__ = "0.1.0"
