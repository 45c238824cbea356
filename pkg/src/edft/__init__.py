"""Extended DFT: adaptive-basis Fourier transforms for short, gapped or
nonuniformly sampled sequences."""

from .baselines import (
    CaponFilter,
    DFTResult,
    HRDFTResult,
    biased_autocorrelation,
    capon_classic_psd,
    capon_filter,
    capon_iterative,
    classical_dft,
    gwls_spectrum,
    hrdft,
)
from .engine import (
    EngineOptions,
    SpectrumResult,
    StopCode,
    edft_iteration,
    resolution_curve,
    run_edft,
    run_edft_2d,
    run_edft_batch,
)
from .errors import (
    EDFTError,
    EmptySequence,
    InfValue,
    MonotonicityViolated,
    NonMonotonicTimes,
    NonPositiveDiagonal,
    RecursionBreakdown,
    SequenceError,
    SingularAutocorrelation,
    SingularOrIndefinite,
    SingularQ,
    TooFewNonzeroWeights,
)
from .inverse import ReconstructionRequest, extrapolate_uniform, inedft
from .signal_model import FrequencyGrid, GridKind, SampledSequence

__version__ = "0.1.0"
