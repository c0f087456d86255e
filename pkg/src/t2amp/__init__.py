"""WB/SB amplitude quantization for Type-2 codebook CSI feedback."""
from .amplitude import (
    DB_FACTOR,
    STEP_DB,
    EstimatorResult,
    InvalidInput,
    SbLevelPair,
    SubbandAmplitudeVector,
    WbLevelGrid,
    build_wb_grid,
    quantize_sb_index_db,
    quantize_sb_linear,
    quantize_wb_index,
    rnsqe,
    sb_levels_for_beam,
)
from .codebook import (
    BeamSet,
    FeedbackMode,
    LayerCoefficients,
    PrecoderMatrix,
    QuantizedFeedback,
    assemble_layer,
    assemble_precoder,
    compute_feedback,
    generate_dft_beam,
    psk_phase,
    reconstruct_amplitudes,
)
from .estimators import (
    Method,
    RegionCandidate,
    brute_force_oracle,
    evaluate_estimator,
    linear_average_wb,
    optimal_wb,
    region_candidates,
    suboptimal_wb,
)
from .harness import SweepConfig, SweepRow, generate_sb_amplitudes, run_sweep, write_csv

__version__ = "0.1.0"
