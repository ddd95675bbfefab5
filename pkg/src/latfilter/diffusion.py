"""Perona-Malik diffusion, local activity-tuned diffusion and the TV baseline."""

import logging

import numpy as np

from .activity import compute_activity, scheduled_activity
from .errors import ConfigurationError, ImageError
from .image_core import (
    as_image,
    forward_diff_x,
    forward_diff_y,
    neighbor_differences,
    require_same_shape,
)
from .models import LAT_VARIANTS, PM_VARIANTS, DiffusionConfig, TvConfig

logger = logging.getLogger(__name__)


def edge_stop_pm_exp(grad, rho: float):
    """``exp(-(|grad|/rho)^2)``."""
    return np.exp(-((np.abs(grad) / rho) ** 2))


def edge_stop_pm_frac(grad, rho: float):
    """``1 / (1 + (|grad|/rho)^2)``."""
    return 1.0 / (1.0 + (np.abs(grad) / rho) ** 2)


def _check_activity(k) -> None:
    if np.any(np.asarray(k) <= 0):
        raise ImageError("activity values must be strictly positive")


def edge_stop_lat(grad, k, rho1: float):
    """``exp(-(|grad| / (rho1*k))^2)``: the activity enters squared."""
    _check_activity(k)
    return np.exp(-((np.abs(grad) / (rho1 * k)) ** 2))


def edge_stop_lat_i(grad, k, rho2_sq: float):
    """``exp(-grad^2 / (rho2^2 * k))``: the activity enters linearly."""
    _check_activity(k)
    return np.exp(-(np.asarray(grad, dtype=np.float64) ** 2) / (rho2_sq * k))


def _pm_update(img: np.ndarray, cfg: DiffusionConfig) -> np.ndarray:
    edge_stop = edge_stop_pm_exp if cfg.variant == "pm_exp" else edge_stop_pm_frac
    flux = np.zeros_like(img)
    for offset in cfg.neighbors.offsets:
        grad = neighbor_differences(img, offset)
        flux += edge_stop(grad, cfg.rho) * grad
    return img + cfg.lambda_ * flux


def diffuse_pm(img: np.ndarray, cfg: DiffusionConfig) -> np.ndarray:
    """Classic Perona-Malik diffusion with zero flux across the border."""
    if cfg.variant not in PM_VARIANTS:
        raise ConfigurationError(f"diffuse_pm needs a pm_* variant, got {cfg.variant}")
    current = as_image(img).copy()
    for t in range(cfg.iterations):
        current = _pm_update(current, cfg)
        logger.debug(f"PM iteration {t + 1}/{cfg.iterations}")
    return current


def diffuse_lat(img: np.ndarray, cfg: DiffusionConfig) -> np.ndarray:
    """Local activity-tuned diffusion (FLAT/TLAT/PLAT and their ``_i`` forms).

    The edge-stop function of every pixel is tuned by the activity of the
    center pixel; the activity map is refreshed on the variant's schedule.
    """
    if cfg.variant not in LAT_VARIANTS:
        raise ConfigurationError(f"diffuse_lat needs a LAT variant, got {cfg.variant}")
    edge_stop = edge_stop_lat_i if cfg.variant.endswith("_i") else edge_stop_lat
    schedule = cfg.activity

    current = as_image(img).copy()
    k = None
    for t in range(cfg.iterations):
        k = scheduled_activity(
            t,
            schedule,
            lambda: compute_activity(current, schedule.clip_high).tuned,
            k,
        )
        flux = np.zeros_like(current)
        for offset in cfg.neighbors.offsets:
            grad = neighbor_differences(current, offset)
            flux += edge_stop(grad, k, cfg.rho) * grad
        current = current + cfg.lambda_ * flux
        logger.debug(f"{cfg.variant} iteration {t + 1}/{cfg.iterations}")
    return current


def diffuse(img: np.ndarray, cfg: DiffusionConfig) -> np.ndarray:
    """Dispatch to Perona-Malik or activity-tuned diffusion by variant."""
    logger.info(
        f"Diffusing {cfg.variant}: lambda={cfg.lambda_}, rho={cfg.rho}, "
        f"iterations={cfg.iterations}"
    )
    if cfg.variant in PM_VARIANTS:
        return diffuse_pm(img, cfg)
    return diffuse_lat(img, cfg)


def tv_divergence(p_x: np.ndarray, p_y: np.ndarray) -> np.ndarray:
    """Negative transpose of the forward-difference gradient applied to ``(p_x, p_y)``.

    ``p_x`` must vanish in the last column and ``p_y`` in the last row.
    """
    div = np.zeros_like(p_x)
    div[:, 0] += p_x[:, 0]
    div[:, 1:] += p_x[:, 1:] - p_x[:, :-1]
    div[0, :] += p_y[0, :]
    div[1:, :] += p_y[1:, :] - p_y[:-1, :]
    return div


def diffuse_tv(img: np.ndarray, original: np.ndarray, cfg: TvConfig) -> np.ndarray:
    """Explicit descent on the Euler-Lagrange equation of the TV model."""
    current = as_image(img).copy()
    original = as_image(original, "original")
    require_same_shape(current, original)

    logger.info(f"TV descent: lambda={cfg.lambda_}, dt={cfg.dt}, iterations={cfg.iterations}")
    for t in range(cfg.iterations):
        g_x = forward_diff_x(current)
        g_y = forward_diff_y(current)
        magnitude = np.sqrt(g_x**2 + g_y**2 + cfg.eps**2)
        div = tv_divergence(g_x / magnitude, g_y / magnitude)
        current = current + cfg.dt * (div - cfg.lambda_ * (current - original))
        logger.debug(f"TV iteration {t + 1}/{cfg.iterations}")
    return current
