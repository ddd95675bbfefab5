"""Quality metrics and reproducible noise / test-image synthesis.

Noise uses an explicit generator so that streams are identical on every
platform and easy to re-implement elsewhere:

* SplitMix64: ``state += 0x9E3779B97F4A7C15``; ``z = state``;
  ``z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9``;
  ``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``; output ``z ^ (z >> 31)``
  (all arithmetic modulo 2**64). The k-th output (k = 1, 2, ...) is the mix
  of ``seed + k * 0x9E3779B97F4A7C15``.
* Uniforms: ``u = (z >> 11) * 2**-53`` in ``[0, 1)``.
* Box-Muller on consecutive pairs ``(u1, u2)``:
  ``r = sqrt(-2 ln(1 - u1))``, normals ``r cos(2 pi u2)`` then ``r sin(2 pi u2)``.
"""

import logging
import math
from typing import Literal

import numpy as np

from .image_core import as_image, forward_diff_x, forward_diff_y, require_same_shape
from .models import NoiseSpec

logger = logging.getLogger(__name__)

PEAK = 255.0
INFINITE_PSNR = math.inf

SynthKind = Literal["step", "blocks", "clipart", "ramp", "ringing", "texture"]
SYNTH_KINDS: tuple[str, ...] = ("step", "blocks", "clipart", "ramp", "ringing", "texture")
PLATEAU_VALUES: tuple[float, ...] = (16.0, 48.0, 80.0, 112.0, 144.0, 176.0, 208.0, 240.0)
STEP_LOW, STEP_HIGH = 0.0, 200.0

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB with peak 255; ``inf`` for identical images."""
    a = as_image(a, "a")
    b = as_image(b, "b")
    require_same_shape(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return INFINITE_PSNR
    return 10.0 * math.log10(PEAK**2 / mse)


def discrete_tv(img: np.ndarray, eps: float = 0.0) -> float:
    """Sum of forward-difference gradient magnitudes.

    A positive ``eps`` gives the regularized energy ``sum(sqrt(|grad|^2 + eps^2))``.
    """
    g_x = forward_diff_x(img)
    g_y = forward_diff_y(img)
    return float(np.sqrt(g_x**2 + g_y**2 + eps**2).sum())


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of SplitMix64 started from ``seed``."""
    steps = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & _MASK64) + steps * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniform_stream(seed: int, count: int) -> np.ndarray:
    """``count`` doubles in ``[0, 1)`` with 53 random bits each."""
    bits = splitmix64(seed, count) >> np.uint64(11)
    return bits.astype(np.float64) * 2.0**-53


def gaussian_stream(seed: int, count: int) -> np.ndarray:
    """``count`` standard normal samples via Box-Muller."""
    pairs = (count + 1) // 2
    u = uniform_stream(seed, 2 * pairs).reshape(pairs, 2)
    radius = np.sqrt(-2.0 * np.log(1.0 - u[:, 0]))
    angle = 2.0 * np.pi * u[:, 1]
    normals = np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1).ravel()
    return normals[:count]


def add_gaussian_noise(img: np.ndarray, spec: NoiseSpec) -> np.ndarray:
    """Add seeded i.i.d. ``N(0, sigma^2)`` noise, optionally clamped to ``[0, 255]``."""
    img = as_image(img)
    noise = gaussian_stream(spec.seed, img.size).reshape(img.shape)
    noisy = img + spec.sigma * noise
    if spec.clip:
        noisy = np.clip(noisy, 0.0, PEAK)
    logger.debug(f"Added Gaussian noise sigma={spec.sigma} seed={spec.seed} clip={spec.clip}")
    return noisy


def synth_ringing_step(
    height: int,
    width: int,
    amplitude: float = 4.0,
    bands: int = 4,
    low: float = 40.0,
    high: float = 140.0,
) -> tuple[np.ndarray, np.ndarray]:
    """A vertical step and a copy with ringing columns on both sides of the edge.

    The ringing alternates in sign with the distance to the edge and has zero
    mean on each side: the column next to the edge undershoots on the low side
    and overshoots on the high side.

    Returns:
        ``(clean, degraded)``.
    """
    edge = width // 2
    clean = np.full((height, width), low)
    clean[:, edge:] = high
    degraded = clean.copy()
    for d in range(min(bands, edge, width - edge)):
        sign = -1.0 if d % 2 == 0 else 1.0
        degraded[:, edge - 1 - d] += sign * amplitude
        degraded[:, edge + d] -= sign * amplitude
    return clean, degraded


def _pick(values: tuple[float, ...], seed: int, count: int) -> np.ndarray:
    indices = splitmix64(seed, count) % np.uint64(len(values))
    return np.asarray(values)[indices.astype(np.int64)]


def _blocks(height: int, width: int, seed: int) -> np.ndarray:
    rows = np.linspace(0, height, 5).astype(int)
    cols = np.linspace(0, width, 5).astype(int)
    levels = _pick(PLATEAU_VALUES, seed, 16).reshape(4, 4)
    img = np.empty((height, width))
    for a in range(4):
        for b in range(4):
            img[rows[a] : rows[a + 1], cols[b] : cols[b + 1]] = levels[a, b]
    return img


def _clipart(height: int, width: int, seed: int) -> np.ndarray:
    background, disk, box, wedge = _pick(PLATEAU_VALUES, seed, 4)
    rr, cc = np.mgrid[0:height, 0:width]
    img = np.full((height, width), background)

    box_mask = (rr >= height // 8) & (rr < height // 2) & (cc >= width // 8) & (cc < width // 2)
    img[box_mask] = box

    radius = min(height, width) / 5
    disk_mask = (rr - 0.6 * height) ** 2 + (cc - 0.65 * width) ** 2 <= radius**2
    img[disk_mask] = disk

    wedge_mask = (rr >= height * 3 // 4) & (cc < (rr - height * 3 // 4) * 2 + width // 8)
    img[wedge_mask] = wedge
    return img


def synth_piecewise(kind: SynthKind, height: int, width: int, seed: int = 0) -> np.ndarray:
    """Deterministic piecewise constant (or ramp) test images.

    * ``step``: left half 0, right half 200.
    * ``blocks``: a 4x4 grid of plateaus drawn from ``PLATEAU_VALUES``.
    * ``clipart``: box, disk and wedge shapes over a background, all from ``PLATEAU_VALUES``.
    * ``ramp``: columns rising linearly from 0 to 255.
    * ``ringing``: the degraded image of ``synth_ringing_step``.
    * ``texture``: ``blocks`` plus a seeded +-8 checker texture in every block.
    """
    if height < 8 or width < 8:
        raise ValueError(f"synthetic images must be at least 8x8, got {height}x{width}")

    if kind == "step":
        img = np.full((height, width), STEP_LOW)
        img[:, width // 2 :] = STEP_HIGH
        return img
    if kind == "blocks":
        return _blocks(height, width, seed)
    if kind == "clipart":
        return _clipart(height, width, seed)
    if kind == "ramp":
        return np.tile(np.linspace(0.0, PEAK, width), (height, 1))
    if kind == "ringing":
        return synth_ringing_step(height, width)[1]
    if kind == "texture":
        rr, cc = np.mgrid[0:height, 0:width]
        checker = np.where((rr + cc) % 2 == 0, 8.0, -8.0)
        jitter = gaussian_stream(seed + 1, height * width).reshape(height, width)
        return _blocks(height, width, seed) + checker + 2.0 * jitter
    raise ValueError(f"unknown synthetic image kind: {kind}")
