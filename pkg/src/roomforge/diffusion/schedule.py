"""Noise schedules for the pixel-space denoising sampler."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidRange

DEFAULT_T = 50
DEFAULT_BETA_START = 1e-4
DEFAULT_BETA_END = 0.1


@dataclass(frozen=True)
class NoiseSchedule:
    """Per-step noise variances and their running products.

    beta and alpha are indexed by t-1 (t runs 1..T); alpha_bar has T+1
    entries with alpha_bar[0] = 1 so alpha_bar[t] is valid for t in 0..T.
    """

    beta: np.ndarray
    alpha: np.ndarray = field(repr=False)
    alpha_bar: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("beta", "alpha", "alpha_bar"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.beta.ndim != 1 or len(self.beta) < 1:
            raise InvalidRange("schedule needs at least one step")
        if not ((self.beta > 0.0) & (self.beta < 1.0)).all():
            raise InvalidRange("beta values must lie strictly inside (0, 1)")
        if self.alpha.shape != self.beta.shape or self.alpha_bar.shape != (len(self.beta) + 1,):
            raise InvalidRange("alpha/alpha_bar lengths do not match beta")

    @property
    def steps(self) -> int:
        return len(self.beta)


def make_schedule(
    steps: int = DEFAULT_T,
    beta_start: float = DEFAULT_BETA_START,
    beta_end: float = DEFAULT_BETA_END,
) -> NoiseSchedule:
    """Linear beta ramp; alpha_bar is the exact running product of alphas."""
    if steps < 1:
        raise InvalidRange(f"steps must be >= 1, got {steps}")
    if not (0.0 < beta_start <= beta_end < 1.0):
        raise InvalidRange(
            f"need 0 < beta_start <= beta_end < 1, got ({beta_start}, {beta_end})"
        )
    beta = np.linspace(beta_start, beta_end, steps, dtype=np.float64)
    alpha = 1.0 - beta
    alpha_bar = np.concatenate(([1.0], np.cumprod(alpha)))
    return NoiseSchedule(beta=beta, alpha=alpha, alpha_bar=alpha_bar)
