"""Tests for image file reading and writing."""

import numpy as np
import pytest
from PIL import Image as PILImage

from src.latfilter.errors import ImageFormatError
from src.latfilter.image_io import quantize, read_image, to_luma, write_image


def test_quantize_rounds_half_up_and_clamps():
    """Test clamping and round-half-away-from-zero."""
    values = np.array([[-3.0, 0.49, 127.5, 254.6, 300.0]])
    np.testing.assert_array_equal(quantize(values), [[0, 0, 128, 255, 255]])
    assert quantize(values).dtype == np.uint8


def test_pgm_binary_round_trip(tmp_path):
    """Test that integer images survive a P5 write and read."""
    img = np.arange(12, dtype=np.float64).reshape(3, 4) * 20.0
    path = tmp_path / "ramp.pgm"
    write_image(img, path)

    assert path.read_bytes().startswith(b"P5\n4 3\n255\n")
    np.testing.assert_array_equal(read_image(path), img)


def test_ascii_pgm_with_comments(tmp_path):
    """Test the P2 reader with header comments."""
    path = tmp_path / "ascii.pgm"
    path.write_bytes(b"P2\n# made by hand\n3 2\n# max\n255\n0 10 20\n30 40 255\n")
    np.testing.assert_array_equal(read_image(path), [[0, 10, 20], [30, 40, 255]])


def test_unsupported_maxval(tmp_path):
    """Test that 16-bit netpbm is refused."""
    path = tmp_path / "deep.pgm"
    path.write_bytes(b"P5\n2 2\n65535\n" + bytes(8))
    with pytest.raises(ImageFormatError, match="maxval"):
        read_image(path)


def test_truncated_payload(tmp_path):
    """Test that a short payload is reported."""
    path = tmp_path / "short.pgm"
    path.write_bytes(b"P5\n4 4\n255\n" + bytes(10))
    with pytest.raises(ImageFormatError, match="truncated"):
        read_image(path)


def test_garbage_file(tmp_path):
    """Test that undecodable files raise a format error."""
    path = tmp_path / "noise.png"
    path.write_bytes(b"definitely not an image")
    with pytest.raises(ImageFormatError):
        read_image(path)


def test_missing_file(tmp_path):
    """Test that a missing file surfaces as an OS error."""
    with pytest.raises(OSError):
        read_image(tmp_path / "missing.pgm")


def test_ppm_luma_and_channels(tmp_path):
    """Test colour handling of a P6 file."""
    rgb = np.zeros((2, 2, 3))
    rgb[0, 0] = [255.0, 0.0, 0.0]
    rgb[1, 1] = [100.0, 100.0, 100.0]
    path = tmp_path / "colour.ppm"
    write_image(rgb, path)

    channels = read_image(path, color="channels")
    np.testing.assert_array_equal(channels, rgb)

    luma = read_image(path, color="luma")
    assert luma.shape == (2, 2)
    assert luma[0, 0] == pytest.approx(0.299 * 255.0)
    assert luma[1, 1] == pytest.approx(100.0)


def test_to_luma_ignores_alpha():
    """Test that an alpha channel does not change luma."""
    rgba = np.full((1, 1, 4), 50.0)
    rgba[0, 0, 3] = 0.0
    assert to_luma(rgba)[0, 0] == pytest.approx(50.0)


def test_png_round_trip(tmp_path):
    """Test the Pillow path for grayscale PNG."""
    img = np.array([[0.0, 64.4], [128.5, 255.0]])
    path = tmp_path / "tiny.png"
    write_image(img, path)

    with PILImage.open(path) as pil:
        assert pil.mode == "L"
    np.testing.assert_array_equal(read_image(path), [[0.0, 64.0], [129.0, 255.0]])


def test_pgm_rejects_colour(tmp_path):
    """Test that a three-channel array cannot be written as PGM."""
    with pytest.raises(ImageFormatError):
        write_image(np.zeros((2, 2, 3)), tmp_path / "colour.pgm")


def test_ascii_unsupported_maxval(tmp_path):
    """Test that a 16-bit ASCII header is refused too."""
    path = tmp_path / "deep_ascii.pgm"
    path.write_bytes(b"P2\n2 1\n65535\n0 65535\n")
    with pytest.raises(ImageFormatError, match="maxval"):
        read_image(path)


def test_binary_pgm_bytes_survive_read_and_write(tmp_path, rng):
    """Test that re-writing an 8-bit P5 file reproduces it byte for byte."""
    pixels = rng.integers(0, 256, size=(7, 9), dtype=np.uint8)
    source, copy = tmp_path / "source.pgm", tmp_path / "copy.pgm"
    source.write_bytes(b"P5\n9 7\n255\n" + pixels.tobytes())

    write_image(read_image(source), copy)
    assert copy.read_bytes() == source.read_bytes()


@pytest.mark.parametrize(
    "data",
    [
        b"P5\n2 2\n255#made by hand\n\x01\x02\x03\x04",
        b"P2\n2 2\n255#made by hand 9 9\n1 2\n3 4\n",
    ],
)
def test_comment_right_after_maxval(tmp_path, data):
    """Test that a comment glued to the maxval token is not read as pixels."""
    path = tmp_path / "glued.pgm"
    path.write_bytes(data)
    np.testing.assert_array_equal(read_image(path), [[1.0, 2.0], [3.0, 4.0]])
