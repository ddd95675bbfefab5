"""Tests for PSNR, discrete TV, seeded noise and synthetic images."""

import hashlib
import math

import numpy as np
import pytest

from src.latfilter.errors import ImageError
from src.latfilter.metrics_noise import (
    PLATEAU_VALUES,
    add_gaussian_noise,
    discrete_tv,
    gaussian_stream,
    psnr,
    splitmix64,
    synth_piecewise,
    synth_ringing_step,
    uniform_stream,
)
from src.latfilter.models import NoiseSpec


class TestPsnr:
    """Test the PSNR metric."""

    def test_unit_mse(self):
        a = np.zeros((4, 4))
        b = np.ones((4, 4))
        assert psnr(a, b) == pytest.approx(48.1308, abs=1e-4)

    def test_full_scale_error(self):
        assert psnr(np.zeros((3, 3)), np.full((3, 3), 255.0)) == pytest.approx(0.0, abs=1e-12)

    def test_identical_images(self, random_image):
        img = random_image(5, 5)
        assert psnr(img, img.copy()) == math.inf

    def test_symmetric(self, random_image):
        a, b = random_image(6, 6), random_image(6, 6)
        assert psnr(a, b) == psnr(b, a)

    def test_shape_mismatch(self):
        with pytest.raises(ImageError):
            psnr(np.zeros((4, 4)), np.zeros((4, 5)))


def test_discrete_tv():
    """Test TV on constant and step images."""
    assert discrete_tv(np.full((5, 5), 9.0)) == 0.0
    assert discrete_tv(synth_piecewise("step", 8, 8)) == pytest.approx(8 * 200.0)
    assert discrete_tv(np.zeros((3, 4)), eps=2.0) == pytest.approx(24.0)


class TestGenerator:
    """Test the SplitMix64 / Box-Muller noise source."""

    def test_splitmix64_reference_values(self):
        expected = [
            6457827717110365317,
            3203168211198807973,
            9817491932198370423,
            4593380528125082431,
            16408922859458223821,
        ]
        assert [int(v) for v in splitmix64(1234567, 5)] == expected

    def test_uniform_histogram_reference(self):
        u = uniform_stream(987654321, 100_000)
        counts = np.bincount(np.floor(u * 5).astype(int), minlength=5)
        assert counts.tolist() == [20027, 19892, 20073, 19978, 20030]

    def test_gaussian_reference_stream(self):
        expected = [
            0.88224890622226881,
            1.3884732852877071,
            -0.45084987571886009,
            0.67071644090242910,
            0.18835263411593151,
            -0.20510403042316847,
            0.21958637919076099,
            -0.66679792184324482,
            -0.67037146554210925,
            -0.61759535623917772,
            -0.67652798671905401,
            0.029820514076535708,
            -1.1907770929543502,
            -0.15053122505891589,
            0.42664665906935234,
            1.4163947385506759,
        ]
        np.testing.assert_allclose(gaussian_stream(42, 16), expected, rtol=1e-12, atol=1e-15)

    def test_uniform_range(self):
        u = uniform_stream(7, 10_000)
        assert u.min() >= 0.0 and u.max() < 1.0

    def test_box_muller_pairs(self):
        u = uniform_stream(11, 4)
        normals = gaussian_stream(11, 4)
        radius = math.sqrt(-2.0 * math.log(1.0 - u[0]))
        assert normals[0] == pytest.approx(radius * math.cos(2 * math.pi * u[1]))
        assert normals[1] == pytest.approx(radius * math.sin(2 * math.pi * u[1]))

    def test_prefix_stable(self):
        np.testing.assert_array_equal(gaussian_stream(3, 7), gaussian_stream(3, 8)[:7])

    def test_moments(self):
        normals = gaussian_stream(2024, 200_000)
        assert abs(normals.mean()) < 0.01
        assert normals.std() == pytest.approx(1.0, abs=0.01)


class TestNoise:
    """Test additive noise on images."""

    def test_standard_deviation(self):
        clean = np.full((256, 256), 128.0)
        noisy = add_gaussian_noise(clean, NoiseSpec(sigma=13.0, seed=42, clip=False))
        assert (noisy - clean).std() == pytest.approx(13.0, abs=0.5)

    def test_deterministic(self, random_image):
        img = random_image(16, 16)
        spec = NoiseSpec(sigma=20.0, seed=5)
        np.testing.assert_array_equal(add_gaussian_noise(img, spec), add_gaussian_noise(img, spec))
        other = add_gaussian_noise(img, NoiseSpec(sigma=20.0, seed=6))
        assert not np.array_equal(add_gaussian_noise(img, spec), other)

    def test_clipping(self):
        clean = np.zeros((32, 32))
        clean[:, 16:] = 255.0
        noisy = add_gaussian_noise(clean, NoiseSpec(sigma=40.0, seed=1))
        assert noisy.min() == 0.0 and noisy.max() == 255.0

        unclipped = add_gaussian_noise(clean, NoiseSpec(sigma=40.0, seed=1, clip=False))
        assert unclipped.min() < 0.0 and unclipped.max() > 255.0

    def test_zero_sigma_is_identity(self, random_image):
        img = random_image(8, 8)
        noisy = add_gaussian_noise(img, NoiseSpec(sigma=0.0, seed=9))
        np.testing.assert_array_equal(noisy, img)
        assert psnr(noisy, img) == math.inf


class TestSynthetic:
    """Test the synthetic test images."""

    def test_step(self):
        img = synth_piecewise("step", 8, 10)
        assert set(np.unique(img[:, :5])) == {0.0}
        assert set(np.unique(img[:, 5:])) == {200.0}

    @pytest.mark.parametrize("kind", ["blocks", "clipart"])
    def test_plateau_levels(self, kind):
        img = synth_piecewise(kind, 32, 32, seed=3)
        assert set(np.unique(img)) <= set(PLATEAU_VALUES)

    def test_clipart_fixture_bytes(self):
        img = synth_piecewise("clipart", 64, 64, seed=7)
        digest = hashlib.sha256(np.ascontiguousarray(img, dtype="<f8").tobytes()).hexdigest()
        assert digest == "141db6c0cf890821e61633d4c3f32cb722f4acf3ab9ad768e3bf501b96b8e55a"
        assert set(np.unique(img)) == {80.0, 112.0, 144.0, 240.0}
        assert int((img == 80.0).sum()) == 576

    def test_ramp(self):
        img = synth_piecewise("ramp", 8, 16)
        assert img[0, 0] == 0.0 and img[-1, -1] == 255.0
        assert np.all(np.diff(img, axis=1) > 0)

    def test_seeded(self):
        for kind in ("blocks", "clipart", "texture"):
            a = synth_piecewise(kind, 16, 16, seed=4)
            np.testing.assert_array_equal(a, synth_piecewise(kind, 16, 16, seed=4))
        assert not np.array_equal(
            synth_piecewise("texture", 16, 16, seed=4), synth_piecewise("texture", 16, 16, seed=5)
        )

    def test_rejects_small_and_unknown(self):
        with pytest.raises(ValueError):
            synth_piecewise("step", 4, 16)
        with pytest.raises(ValueError):
            synth_piecewise("spiral", 16, 16)

    def test_ringing_step(self):
        clean, degraded = synth_ringing_step(8, 16)
        edge = 8
        assert set(np.unique(clean[:, :edge])) == {40.0}
        assert set(np.unique(clean[:, edge:])) == {140.0}
        # undershoot and overshoot next to the edge
        assert degraded[0, edge - 1] == 36.0 and degraded[0, edge] == 144.0
        assert degraded[0, edge - 2] == 44.0 and degraded[0, edge + 1] == 136.0
        # zero mean perturbation on each side
        assert degraded[:, :edge].mean() == pytest.approx(40.0)
        assert degraded[:, edge:].mean() == pytest.approx(140.0)
        np.testing.assert_array_equal(synth_piecewise("ringing", 8, 16), degraded)
