# Estimation package
from src.estimation.base import AmplitudeModel, normalize_amplitudes
from src.estimation.factory import get_model
from src.estimation.field_model import FieldAmplitudeModel
from src.estimation.magnitude import (
    magnitude_from_splitting,
    magnitude_precision,
    splitting_propagation,
)
from src.estimation.monte_carlo import PrecisionReport, PrecisionScenario, monte_carlo_precision
from src.estimation.orientation import (
    equivalent_orientations,
    fold_orientation,
    orientation_estimate,
    orientation_residual,
    rotation_estimate,
    splitting_from_measurements,
    symmetry_group,
    synthesize_measurements,
    vector_estimate,
)
from src.estimation.rotation_model import RotationAmplitudeModel

__all__ = [
    "AmplitudeModel",
    "normalize_amplitudes",
    "FieldAmplitudeModel",
    "RotationAmplitudeModel",
    "get_model",
    "magnitude_from_splitting",
    "magnitude_precision",
    "splitting_propagation",
    "PrecisionReport",
    "PrecisionScenario",
    "monte_carlo_precision",
    "equivalent_orientations",
    "fold_orientation",
    "orientation_estimate",
    "orientation_residual",
    "rotation_estimate",
    "splitting_from_measurements",
    "symmetry_group",
    "synthesize_measurements",
    "vector_estimate",
]
