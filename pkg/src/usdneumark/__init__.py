"""Optimal unambiguous discrimination of pure states via the Neumark extension."""

from .config import DEFAULT_TOLERANCES, Tolerances
from .ensemble import Ensemble, build_product_state, load_ensemble
from .errors import NumericalError, UsdError, ValidationError
from .final_config import FinalConfiguration, build_final_configuration
from .ladder import LadderForm, build_ladder, ladder_coefficients
from .pipeline import (
    PipelineReport,
    report_to_dict,
    run_pipeline,
    verify_report,
)
from .rotations import RotationSequence, RotationStep, decompose, euler_angles
from .synthesis import SynthesisResult, simulate_measurement, synthesize_u1
from .usd_sdp import (
    ReciprocalSet,
    UsdSolution,
    oracle_usd,
    reciprocal_states,
    solve_usd,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOLERANCES",
    "Tolerances",
    "Ensemble",
    "build_product_state",
    "load_ensemble",
    "UsdError",
    "ValidationError",
    "NumericalError",
    "LadderForm",
    "build_ladder",
    "ladder_coefficients",
    "ReciprocalSet",
    "UsdSolution",
    "reciprocal_states",
    "solve_usd",
    "oracle_usd",
    "FinalConfiguration",
    "build_final_configuration",
    "SynthesisResult",
    "synthesize_u1",
    "simulate_measurement",
    "RotationStep",
    "RotationSequence",
    "decompose",
    "euler_angles",
    "PipelineReport",
    "run_pipeline",
    "report_to_dict",
    "verify_report",
]
