from .sampler import (
    DiffusionState,
    NoisePredictor,
    PointMassPredictor,
    ZeroPredictor,
    forward_sample,
    forward_step,
    masked_reverse_step,
    reverse_step,
    sample,
    training_loss,
    validate_mask,
)
from .schedule import DEFAULT_BETA_END, DEFAULT_BETA_START, DEFAULT_T, NoiseSchedule, make_schedule

__all__ = [
    "DEFAULT_BETA_END",
    "DEFAULT_BETA_START",
    "DEFAULT_T",
    "DiffusionState",
    "NoisePredictor",
    "NoiseSchedule",
    "PointMassPredictor",
    "ZeroPredictor",
    "forward_sample",
    "forward_step",
    "make_schedule",
    "masked_reverse_step",
    "reverse_step",
    "sample",
    "training_loss",
    "validate_mask",
]
