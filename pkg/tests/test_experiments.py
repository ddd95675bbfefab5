"""Tests for the benchmark experiments."""

import math

import numpy as np
import pytest

from src.latfilter.experiments import (
    BenchmarkRecord,
    BenchmarkReport,
    plateau_drift,
    run_artifact_benchmark,
    run_denoising_benchmark,
    run_smoothing_benchmark,
)
from src.latfilter.metrics_noise import synth_ringing_step
from src.latfilter.models import DENOISE_RTV


def test_report_summary():
    """Test per-method means."""
    report = BenchmarkReport(experiment="demo")
    report.records.extend(
        [
            BenchmarkRecord(method="a", image="x", metrics={"psnr": 30.0}, wall_time_ms=1.0),
            BenchmarkRecord(method="a", image="y", metrics={"psnr": 34.0}, wall_time_ms=1.0),
            BenchmarkRecord(method="b", image="x", metrics={"psnr": 20.0}, wall_time_ms=1.0),
        ]
    )

    assert report.methods() == ["a", "b"]
    assert report.mean_metric("a", "psnr") == 32.0
    assert math.isnan(report.mean_metric("c", "psnr"))
    assert report.summary() == {"a": {"psnr": 32.0}, "b": {"psnr": 20.0}}


def test_plateau_drift():
    """Test drift on the ringing fixture."""
    clean, degraded = synth_ringing_step(8, 16)
    assert plateau_drift(clean, degraded) == pytest.approx(0.0, abs=1e-12)
    shifted = clean.copy()
    shifted[:, 8:] += 3.0
    assert plateau_drift(clean, shifted) == pytest.approx(3.0)


def test_artifact_benchmark():
    """Test that linear-activity diffusion removes ringing without moving plateaus."""
    report = run_artifact_benchmark(variants=("pm_exp", "flat_i", "plat_i"))
    baseline = report.mean_metric("input", "psnr")

    assert report.methods() == ["input", "pm_exp", "flat_i", "plat_i"]
    for variant in ("flat_i", "plat_i"):
        assert report.mean_metric(variant, "psnr") >= baseline + 2.0
        assert report.mean_metric(variant, "plateau_drift") < 1.0


def test_denoising_benchmark_records():
    """Test the record layout of a small denoising run."""
    report = run_denoising_benchmark(
        sigmas=(13.0,), seeds=(0, 1), size=32, methods=("tv", "lat_rtvd")
    )

    assert report.methods() == ["noisy", "tv", "lat_rtvd"]
    assert report.params["iterations"] == DENOISE_RTV.iterations
    assert len(report.records) == 2 * 3
    for record in report.records:
        assert np.isfinite(record.metrics["psnr"])
        if record.method != "noisy":
            assert "gain" in record.metrics
            assert record.wall_time_ms >= 0.0


def test_smoothing_benchmark():
    """Test that LAT-RTV leaves less total variation than RTV on most textures."""
    report = run_smoothing_benchmark()
    by_image: dict[str, dict[str, float]] = {}
    for record in report.records:
        by_image.setdefault(record.image, {})[record.method] = record.metrics["tv"]

    assert len(by_image) == 10
    wins = sum(1 for tv in by_image.values() if tv["lat_rtv"] < tv["rtv"])
    assert wins >= 8
    assert all(tv["rtv"] < tv["input"] for tv in by_image.values())
    assert all(tv["lat_rtv"] < tv["input"] for tv in by_image.values())


@pytest.mark.parametrize("sigma, min_gain", [(13.0, 3.0), (26.0, 4.0)])
def test_lat_rtvd_gain_on_every_image(sigma, min_gain):
    """Test the LAT-RTVd PSNR gain on five seeded piecewise images."""
    report = run_denoising_benchmark(sigmas=(sigma,), methods=("lat_rtvd",))
    gains = [r.metrics["gain"] for r in report.records if r.method == "lat_rtvd"]

    assert len(gains) == 5
    assert min(gains) >= min_gain
