"""Shared FFT peak-location helpers."""

from __future__ import annotations

import numpy as np


def parabolic_offset(y_minus: float, y_0: float, y_plus: float) -> float:
    """Sub-bin offset of a peak from a 3-point parabola, clipped to [-0.5, 0.5].

    Returns 0 when the points are degenerate (flat top).
    """
    denom = y_minus - 2.0 * y_0 + y_plus
    if denom == 0.0:
        return 0.0
    delta = 0.5 * (y_minus - y_plus) / denom
    return float(np.clip(delta, -0.5, 0.5))


def refine_peak_1d(mag: np.ndarray, k: int) -> float:
    """Refine the integer peak bin k of a magnitude spectrum to sub-bin."""
    if 0 < k < len(mag) - 1:
        return k + parabolic_offset(mag[k - 1], mag[k], mag[k + 1])
    return float(k)
