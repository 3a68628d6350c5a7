"""Meaningfulness metric for sets of binary attributes."""

__version__ = "0.1.0"

from .analyze import (
    CooccurrenceMatrix,
    EvaluationConfig,
    MeaningfulnessReport,
    cooccurrence,
    evaluate_method,
    evaluate_methods,
)
from .calibrate import CalibrationResult, Clamp, calibrate, gamma, gamma_combined, solve_gstar
from .core import (
    AttributeMatrix,
    AttributeVector,
    Kind,
    MeaningfulnessError,
    SubspaceSplit,
    from_zero_one,
    to_zero_one,
    validate,
)
from .interpolate import InterpolationCurve, NoiseSpec, gen_noise, trace_curve
from .reconstruct import (
    MatchSet,
    ReconstructionResult,
    attribute_distance,
    correlation,
    delta_cvx,
    delta_jp,
    greedy_match,
    simplex_project,
)
from .select import IndependenceScores, SelectionConfig, leave_one_out_errors, select_representation
from .synth import Planted, PlantSpec, plant_meaningful, synthetic_labelled_set
