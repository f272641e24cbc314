"""Forward process, reverse sampler, training loss, and masked inpainting.

All operations are pure functions over arrays; randomness enters only
through explicitly passed numpy Generators, so fixed seeds give bit-identical
trajectories. Elementwise math means a batch axis runs independent chains
in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import numpy as np

from ..errors import InvalidRange, NonBinaryMask, ShapeMismatch
from .schedule import NoiseSchedule


class NoisePredictor(Protocol):
    def predict(self, z: np.ndarray, t: int) -> np.ndarray: ...


@dataclass(frozen=True)
class DiffusionState:
    """A latent array pinned to its position in the chain."""

    z: np.ndarray
    t: int

    def __post_init__(self):
        z = np.asarray(self.z, dtype=np.float64)
        if not np.isfinite(z).all():
            raise InvalidRange("diffusion state must be finite")
        if self.t < 0:
            raise InvalidRange(f"step must be non-negative, got {self.t}")
        z.flags.writeable = False
        object.__setattr__(self, "z", z)


class ZeroPredictor:
    """Predicts no noise anywhere; handy for determinism checks."""

    def predict(self, z, t):
        return np.zeros_like(z)


class PointMassPredictor:
    """Analytically optimal predictor for a dataset of a single target.

    If all data equals z0_star, the noise that produced z_t is recoverable
    exactly: eps = (z_t - sqrt(alpha_bar_t) * z0_star) / sqrt(1 - alpha_bar_t).
    """

    def __init__(self, z0_star: np.ndarray, schedule: NoiseSchedule):
        self.z0_star = np.asarray(z0_star, dtype=np.float64)
        self.schedule = schedule

    def predict(self, z, t):
        ab = self.schedule.alpha_bar[t]
        return (z - np.sqrt(ab) * self.z0_star) / np.sqrt(1.0 - ab)


def _check_step(t: int, schedule: NoiseSchedule, low: int = 1):
    if not low <= t <= schedule.steps:
        raise InvalidRange(f"step {t} outside [{low}, {schedule.steps}]")


def validate_mask(mask: np.ndarray, shape) -> np.ndarray:
    mask = np.asarray(mask)
    if mask.shape != tuple(shape):
        raise ShapeMismatch(f"mask shape {mask.shape} != data shape {tuple(shape)}")
    vals = np.unique(mask)
    if not np.isin(vals, (0, 1)).all():
        raise NonBinaryMask(f"mask values outside {{0,1}}: {vals[:8]}")
    return mask.astype(bool)


def forward_sample(z0, t, eps, schedule: NoiseSchedule):
    """Closed-form jump to step t: sqrt(ab_t) z0 + sqrt(1 - ab_t) eps.

    t = 0 is the identity embedding (alpha_bar[0] = 1).
    """
    z0 = np.asarray(z0, dtype=np.float64)
    eps = np.asarray(eps, dtype=np.float64)
    if eps.shape != z0.shape:
        raise ShapeMismatch(f"eps shape {eps.shape} != z0 shape {z0.shape}")
    _check_step(t, schedule, low=0)
    ab = schedule.alpha_bar[t]
    return np.sqrt(ab) * z0 + np.sqrt(1.0 - ab) * eps


def forward_step(z_prev, t, schedule: NoiseSchedule, rng: np.random.Generator):
    """One Markov step: sqrt(1 - beta_t) z_{t-1} + sqrt(beta_t) g."""
    z_prev = np.asarray(z_prev, dtype=np.float64)
    _check_step(t, schedule)
    b = schedule.beta[t - 1]
    return np.sqrt(1.0 - b) * z_prev + np.sqrt(b) * rng.standard_normal(z_prev.shape)


def reverse_step(z_t, t, predictor: NoisePredictor, schedule: NoiseSchedule, rng: np.random.Generator):
    """Posterior mean step with sigma_t^2 = beta_t; noiseless at t = 1."""
    z_t = np.asarray(z_t, dtype=np.float64)
    _check_step(t, schedule)
    b = schedule.beta[t - 1]
    a = schedule.alpha[t - 1]
    ab = schedule.alpha_bar[t]
    eps_hat = np.asarray(predictor.predict(z_t, t), dtype=np.float64)
    if eps_hat.shape != z_t.shape:
        raise ShapeMismatch(f"predictor output {eps_hat.shape} != input {z_t.shape}")
    mu = (z_t - b / np.sqrt(1.0 - ab) * eps_hat) / np.sqrt(a)
    if t == 1:
        return mu
    return mu + np.sqrt(b) * rng.standard_normal(z_t.shape)


def training_loss(predictor: NoisePredictor, z0, t, eps, schedule: NoiseSchedule) -> float:
    """Euclidean norm of the predictor's residual at a noised sample."""
    z_t = forward_sample(z0, t, eps, schedule)
    residual = np.asarray(eps, dtype=np.float64) - predictor.predict(z_t, t)
    return float(np.linalg.norm(residual.ravel()))


def masked_reverse_step(
    z_t, t, predictor: NoisePredictor, schedule: NoiseSchedule,
    mask, known_z0, rng: np.random.Generator,
):
    """Reverse step that pins mask=0 elements to a re-noised known image.

    The known region is drawn fresh at step t-1 from known_z0 (exactly
    known_z0 once t-1 = 0), then spliced in after the full reverse step.
    """
    z_t = np.asarray(z_t, dtype=np.float64)
    known_z0 = np.asarray(known_z0, dtype=np.float64)
    if known_z0.shape != z_t.shape:
        raise ShapeMismatch(f"known_z0 shape {known_z0.shape} != z shape {z_t.shape}")
    keep = validate_mask(mask, z_t.shape)
    z_hat = reverse_step(z_t, t, predictor, schedule, rng)
    if t - 1 >= 1:
        known = forward_sample(known_z0, t - 1, rng.standard_normal(z_t.shape), schedule)
    else:
        known = known_z0
    # np.where keeps known-region bits exact; an arithmetic blend would
    # flip -0.0 to +0.0
    return np.where(keep, z_hat, known)


def sample(
    predictor: NoisePredictor,
    schedule: NoiseSchedule,
    shape,
    rng: np.random.Generator,
    mask=None,
    known_z0=None,
) -> np.ndarray:
    """Full reverse chain from pure noise down to z_0.

    With mask and known_z0 given, runs the inpainting variant; mask=0
    elements of the result equal known_z0 bit-for-bit.
    """
    if (mask is None) != (known_z0 is None):
        raise ShapeMismatch("mask and known_z0 must be given together")
    z = rng.standard_normal(shape)
    for t in range(schedule.steps, 0, -1):
        if mask is None:
            z = reverse_step(z, t, predictor, schedule, rng)
        else:
            z = masked_reverse_step(z, t, predictor, schedule, mask, known_z0, rng)
    return z
