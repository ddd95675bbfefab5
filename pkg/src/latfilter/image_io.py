"""Image file input and output.

PGM (P2 ASCII, P5 binary) and binary PPM (P6) with maxval 255 are read and
written bit-exactly; PNG goes through Pillow. Reading never rescales: a byte
value of 37 becomes the real intensity 37.0.
"""

import logging
from pathlib import Path
from typing import Literal

import numpy as np
from PIL import Image as PILImage

from .errors import ImageFormatError

logger = logging.getLogger(__name__)

ColorMode = Literal["luma", "channels"]
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])
MAXVAL = 255


def _tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments.

    Returns the tokens and the offset just past the single whitespace byte that
    ends the last token, or past the comment line that directly follows it.
    """
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < count:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise ImageFormatError("truncated header")
        if data[pos : pos + 1] == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    if data[pos : pos + 1] == b"#":
        end = data.find(b"\n", pos)
        return tokens, len(data) if end < 0 else end + 1
    return tokens, pos + 1


def _parse_netpbm(data: bytes, path: Path) -> np.ndarray:
    magic = data[:2]
    if magic not in (b"P2", b"P5", b"P6"):
        raise ImageFormatError(f"{path}: unsupported magic number {magic!r}")
    channels = 3 if magic == b"P6" else 1

    header, offset = _tokens(data[2:], 3)
    try:
        width, height, maxval = (int(token) for token in header)
    except ValueError as e:
        raise ImageFormatError(f"{path}: malformed header {header!r}") from e
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: invalid dimensions {width}x{height}")
    if maxval != MAXVAL:
        raise ImageFormatError(f"{path}: unsupported maxval {maxval} (only 255 is supported)")

    count = width * height * channels
    payload = data[2 + offset :]
    if magic == b"P2":
        try:
            values = np.array(payload.split()[:count], dtype=np.int64)
        except ValueError as e:
            raise ImageFormatError(f"{path}: malformed ASCII payload") from e
        if values.size < count:
            raise ImageFormatError(f"{path}: truncated payload ({values.size} of {count} samples)")
        if values.min() < 0 or values.max() > MAXVAL:
            raise ImageFormatError(f"{path}: sample outside [0, {MAXVAL}]")
    else:
        if len(payload) < count:
            raise ImageFormatError(f"{path}: truncated payload ({len(payload)} of {count} bytes)")
        values = np.frombuffer(payload[:count], dtype=np.uint8)

    shape = (height, width) if channels == 1 else (height, width, channels)
    return values.reshape(shape).astype(np.float64)


def to_luma(img: np.ndarray) -> np.ndarray:
    """BT.601 luma of an ``H x W x C`` image (alpha is ignored)."""
    return img[:, :, :3] @ LUMA_WEIGHTS


def read_image(path: str | Path, color: ColorMode = "luma") -> np.ndarray:
    """Read a PGM/PPM/PNG file into a float64 array.

    Grayscale files give ``H x W`` arrays. Colour files give luma (``color="luma"``)
    or an ``H x W x C`` array (``color="channels"``).
    """
    path = Path(path)
    data = path.read_bytes()
    if data[:2] in (b"P2", b"P5", b"P6"):
        img = _parse_netpbm(data, path)
    else:
        try:
            with PILImage.open(path) as pil:
                if pil.mode not in ("L", "RGB", "RGBA"):
                    raise ImageFormatError(f"{path}: unsupported image mode {pil.mode}")
                img = np.asarray(pil, dtype=np.float64)
        except (OSError, SyntaxError) as e:
            if isinstance(e, ImageFormatError):
                raise
            raise ImageFormatError(f"{path}: cannot decode image: {e}") from e

    if img.ndim == 3 and color == "luma":
        img = to_luma(img)
    logger.debug(f"Read {path} with shape {img.shape}")
    return img


def quantize(img: np.ndarray) -> np.ndarray:
    """Clamp to ``[0, 255]`` and round half away from zero to 8 bits."""
    return np.floor(np.clip(img, 0.0, MAXVAL) + 0.5).astype(np.uint8)


def write_image(img: np.ndarray, path: str | Path) -> None:
    """Write ``img`` as 8 bits; the format follows the file suffix.

    ``.pgm`` writes P5, ``.ppm`` writes P6, anything else goes through Pillow.
    """
    path = Path(path)
    pixels = quantize(img)
    suffix = path.suffix.lower()

    if suffix == ".pgm":
        if pixels.ndim != 2:
            raise ImageFormatError(f"{path}: PGM holds one channel, got shape {pixels.shape}")
        header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n{MAXVAL}\n".encode()
        path.write_bytes(header + pixels.tobytes())
    elif suffix == ".ppm":
        if pixels.ndim != 3 or pixels.shape[2] != 3:
            raise ImageFormatError(f"{path}: PPM holds three channels, got shape {pixels.shape}")
        header = f"P6\n{pixels.shape[1]} {pixels.shape[0]}\n{MAXVAL}\n".encode()
        path.write_bytes(header + pixels.tobytes())
    else:
        try:
            PILImage.fromarray(pixels).save(path)
        except (OSError, ValueError, KeyError) as e:
            raise ImageFormatError(f"{path}: cannot encode image: {e}") from e
    logger.debug(f"Wrote {path} with shape {pixels.shape}")
