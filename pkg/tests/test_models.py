"""Tests for data models and settings."""

import pytest
from pydantic import ValidationError

from src.latfilter.config import Settings
from src.latfilter.models import DiffusionConfig, NoiseSpec, RtvConfig, TvConfig


def test_diffusion_config_defaults():
    """Test the documented diffusion defaults."""
    cfg = DiffusionConfig()

    assert cfg.lambda_ == 0.25
    assert cfg.rho == 30.0
    assert cfg.iterations == 11
    assert cfg.variant == "plat"
    assert cfg.clip_high == 30.0
    assert cfg.update_interval == 5
    assert cfg.neighborhood == "four_connected"


def test_lambda_alias():
    """Test that ``lambda`` and ``lambda_`` both populate the step weight."""
    assert DiffusionConfig(**{"lambda": 0.1}).lambda_ == 0.1
    assert DiffusionConfig(lambda_=0.2).lambda_ == 0.2
    assert RtvConfig(**{"lambda": 0.02}).model_dump(by_alias=True)["lambda"] == 0.02


def test_diffusion_config_invalid_values():
    """Test that out-of-range parameters raise validation errors."""
    with pytest.raises(ValidationError):
        DiffusionConfig(rho=0.0)
    with pytest.raises(ValidationError):
        DiffusionConfig(iterations=-1)
    with pytest.raises(ValidationError):
        DiffusionConfig(clip_high=0.5)
    with pytest.raises(ValidationError):
        DiffusionConfig(variant="heat")


def test_configs_are_frozen():
    """Test that configurations cannot be changed after validation."""
    cfg = RtvConfig()
    with pytest.raises(ValidationError):
        cfg.lambda_ = 1.0


def test_rtv_config():
    """Test RTV defaults and ranges."""
    cfg = RtvConfig()

    assert cfg.lambda_ == 0.01
    assert cfg.sigma == 3.0
    assert cfg.eps == 1e-3
    assert cfg.mode == "lat_rtv"
    assert cfg.fidelity == "previous_iterate"
    assert cfg.solver == "pcg"
    assert RtvConfig(**{"lambda": 0.0}).lambda_ == 0.0

    with pytest.raises(ValidationError):
        RtvConfig(**{"lambda": -0.01})
    with pytest.raises(ValidationError):
        RtvConfig(sigma=0.0)
    with pytest.raises(ValidationError):
        RtvConfig(fidelity="clean")


def test_tv_config_and_noise_spec():
    """Test the TV and noise models."""
    assert TvConfig().iterations == 50
    with pytest.raises(ValidationError):
        TvConfig(dt=0.0)

    spec = NoiseSpec()
    assert (spec.sigma, spec.seed, spec.clip) == (13.0, 42, True)
    with pytest.raises(ValidationError):
        NoiseSpec(sigma=-1.0)
    with pytest.raises(ValidationError):
        NoiseSpec(seed=-5)


def test_settings_from_environment(monkeypatch):
    """Test that LATFILTER_* variables override the defaults."""
    monkeypatch.setenv("LATFILTER_PCG_TOLERANCE", "1e-8")
    monkeypatch.setenv("LATFILTER_COLOR_MODE", "channels")

    settings = Settings(_env_file=None)
    assert settings.pcg_tolerance == 1e-8
    assert settings.color_mode == "channels"
    settings.validate_solver_config()


def test_settings_validation():
    """Test the solver settings check."""
    with pytest.raises(ValueError):
        Settings(_env_file=None, pcg_tolerance=0.0).validate_solver_config()
    with pytest.raises(ValueError):
        Settings(_env_file=None, pcg_max_iter_factor=0).validate_solver_config()
