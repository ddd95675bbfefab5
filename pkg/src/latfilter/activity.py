"""Clipped, normalized local activity measurement.

The activity of a pixel is the standard deviation of its 3x3 window
(replicate padding at the border), clipped to ``[1/2, h]`` and divided by
the largest clipped value in the image.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ConfigurationError, InternalInvariantError
from .models import ActivityConfig

logger = logging.getLogger(__name__)

CLIP_LOW = 0.5


@dataclass(frozen=True)
class ActivityMap:
    """All stages of the activity computation for one image."""

    raw_std: np.ndarray
    clipped: np.ndarray
    normalized: np.ndarray
    tuned: np.ndarray


def local_mean_std(img: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean and population standard deviation over each 3x3 window."""
    padded = np.pad(img, 1, mode="edge")
    windows = sliding_window_view(padded, (3, 3))
    mean = windows.mean(axis=(2, 3))
    deviation = windows - mean[:, :, None, None]
    std = np.sqrt((deviation**2).mean(axis=(2, 3)))
    return mean, std


def clip_activity(std: np.ndarray, h: float) -> np.ndarray:
    """Clamp standard deviations into ``[1/2, h]``."""
    if not h > CLIP_LOW:
        raise ConfigurationError(f"clip bound h must exceed {CLIP_LOW}, got {h}")
    return np.clip(std, CLIP_LOW, h)


def normalize_activity(clipped: np.ndarray) -> np.ndarray:
    """Divide by the global maximum so the result lies in ``(0, 1]``."""
    return clipped / clipped.max()


def compute_activity(img: np.ndarray, h: float) -> ActivityMap:
    """Run every activity stage on ``img``."""
    _, std = local_mean_std(img)
    clipped = clip_activity(std, h)
    normalized = normalize_activity(clipped)
    return ActivityMap(raw_std=std, clipped=clipped, normalized=normalized, tuned=normalized)


def scheduled_activity(
    t: int,
    cfg: ActivityConfig,
    recompute: Callable[[], np.ndarray],
    cache: np.ndarray | None,
) -> np.ndarray:
    """Return the tuned activity for iteration ``t``.

    The map is recomputed whenever ``t`` is a multiple of the update interval
    and reused from ``cache`` otherwise. Callers store the returned map as the
    cache for the next iteration.
    """
    if t < 0:
        raise ConfigurationError(f"iteration must be non-negative, got {t}")
    if t % cfg.update_interval == 0:
        logger.debug(f"Recomputing activity map at iteration {t}")
        return recompute()
    if cache is None:
        raise InternalInvariantError(
            f"no cached activity map at iteration {t} (interval {cfg.update_interval})"
        )
    return cache
