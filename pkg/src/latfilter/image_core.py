"""Image grid conventions and the discrete gradient operators shared by all filters.

Images are 2-D ``float64`` numpy arrays indexed ``[row, column]`` with
intensities on a nominal 0-255 scale. Vectorization is row-major.
"""

import logging

import numpy as np
import scipy.sparse as sp

from .errors import ImageError

logger = logging.getLogger(__name__)

Pixel = tuple[int, int]


def as_image(data, name: str = "image") -> np.ndarray:
    """Validate ``data`` as an image and return it as a float64 array.

    Raises:
        ImageError: If the array is not 2-D, smaller than 2x2 or holds NaN/Inf.
    """
    img = np.asarray(data, dtype=np.float64)
    if img.ndim != 2:
        raise ImageError(f"{name} must be a 2-D grid, got shape {img.shape}")
    if img.shape[0] < 2 or img.shape[1] < 2:
        raise ImageError(f"{name} must be at least 2x2, got {img.shape[0]}x{img.shape[1]}")
    if not np.all(np.isfinite(img)):
        raise ImageError(f"{name} contains non-finite values")
    return img


def require_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    """Raise ImageError unless both images share their dimensions."""
    if a.shape != b.shape:
        raise ImageError(f"dimension mismatch: {a.shape} vs {b.shape}")


def neighbor_gradient(img: np.ndarray, i: Pixel, j: Pixel) -> float:
    """Return ``I_j - I_i`` for a pixel ``i`` and one of its 8 neighbors ``j``.

    A neighbor outside the grid is replicated from pixel ``i`` itself, so the
    gradient (and the flux) across the image border is zero.
    """
    img = as_image(img)
    height, width = img.shape
    r, c = i
    if not (0 <= r < height and 0 <= c < width):
        raise ImageError(f"pixel {i} is outside a {height}x{width} image")
    jr, jc = j
    if max(abs(jr - r), abs(jc - c)) != 1:
        raise ImageError(f"{j} is not a neighbor of {i}")
    if not (0 <= jr < height and 0 <= jc < width):
        return 0.0
    return float(img[jr, jc] - img[r, c])


def neighbor_differences(img: np.ndarray, offset: Pixel) -> np.ndarray:
    """Vectorized ``neighbor_gradient`` for every pixel and one neighbor offset."""
    dr, dc = offset
    height, width = img.shape
    padded = np.pad(img, 1, mode="edge")
    diff = padded[1 + dr : 1 + dr + height, 1 + dc : 1 + dc + width] - img

    # zero flux across the border
    if dr == -1:
        diff[0, :] = 0.0
    elif dr == 1:
        diff[-1, :] = 0.0
    if dc == -1:
        diff[:, 0] = 0.0
    elif dc == 1:
        diff[:, -1] = 0.0
    return diff


def forward_diff_x(img: np.ndarray) -> np.ndarray:
    """Horizontal forward difference; the last column is zero."""
    return np.diff(img, axis=1, append=img[:, -1:])


def forward_diff_y(img: np.ndarray) -> np.ndarray:
    """Vertical forward difference; the last row is zero."""
    return np.diff(img, axis=0, append=img[-1:, :])


def _difference_1d(n: int) -> sp.csr_matrix:
    # -1 on the diagonal, +1 above it, last row empty
    main = -np.ones(n)
    main[-1] = 0.0
    upper = np.ones(n - 1)
    return sp.diags([main, upper], [0, 1], shape=(n, n), format="csr")


def gradient_operator_matrices(height: int, width: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Sparse forward-difference operators acting on row-major image vectors.

    Returns:
        ``(G_x, G_y)``, each ``(H*W) x (H*W)``, such that ``G_x @ img.ravel()``
        equals ``forward_diff_x(img).ravel()``.
    """
    if height < 2 or width < 2:
        raise ImageError(f"gradient operators need at least 2x2 pixels, got {height}x{width}")
    g_x = sp.kron(sp.identity(height, format="csr"), _difference_1d(width), format="csr")
    g_y = sp.kron(_difference_1d(height), sp.identity(width, format="csr"), format="csr")
    g_x.eliminate_zeros()
    g_y.eliminate_zeros()
    return g_x, g_y
