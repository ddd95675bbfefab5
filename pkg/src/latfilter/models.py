"""Data models for filter configuration."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

Neighborhood = Literal["four_connected", "eight_connected"]
DiffusionVariant = Literal[
    "pm_exp", "pm_frac", "flat", "tlat", "plat", "flat_i", "tlat_i", "plat_i"
]
PM_VARIANTS: tuple[str, ...] = ("pm_exp", "pm_frac")
LAT_VARIANTS: tuple[str, ...] = ("flat", "tlat", "plat", "flat_i", "tlat_i", "plat_i")

RHO_DEFAULT = 30.0
RHO2_SQ_DEFAULT = 300.0

_FOUR = ((-1, 0), (1, 0), (0, -1), (0, 1))
_DIAGONALS = ((-1, -1), (-1, 1), (1, -1), (1, 1))


class NeighborOffsets(BaseModel):
    """Neighborhood used by the diffusion sums."""

    model_config = ConfigDict(frozen=True)

    mode: Neighborhood = "four_connected"

    @computed_field
    @property
    def offsets(self) -> tuple[tuple[int, int], ...]:
        if self.mode == "four_connected":
            return _FOUR
        return _FOUR + _DIAGONALS


class ActivityConfig(BaseModel):
    """Clip bound and refresh schedule of the local activity map."""

    model_config = ConfigDict(frozen=True)

    clip_high: float = Field(30.0, gt=0.5, description="Upper clip bound h (intensity units)")
    update_interval: int = Field(5, ge=1, description="Refresh interval l (iterations)")
    max_iterations: int = Field(11, ge=1, description="Maximal number of iterations m")

    @model_validator(mode="after")
    def _interval_within_run(self) -> "ActivityConfig":
        if self.update_interval > self.max_iterations:
            raise ValueError(
                f"update_interval ({self.update_interval}) must not exceed "
                f"max_iterations ({self.max_iterations})"
            )
        return self


class DiffusionConfig(BaseModel):
    """Parameters of Perona-Malik and local activity-tuned diffusion."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lambda_: float = Field(0.25, alias="lambda", gt=0, description="Step weight")
    rho: float = Field(
        RHO_DEFAULT,
        gt=0,
        description="Edge-stop scale: rho for PM, rho1 for flat/tlat/plat, rho2^2 for *_i",
    )
    iterations: int = Field(11, ge=0, description="Number of explicit iterations m")
    variant: DiffusionVariant = "plat"
    clip_high: float = Field(30.0, gt=0.5, description="Activity clip bound h")
    update_interval: int = Field(5, ge=1, description="Activity refresh interval l (plat*)")
    neighborhood: Neighborhood = "four_connected"

    @model_validator(mode="before")
    @classmethod
    def _default_rho(cls, data):
        # rho2^2 defaults to 300 for the *_i variants, every other variant uses 30
        if isinstance(data, dict) and data.get("rho") is None:
            variant = str(data.get("variant", "plat"))
            data = {**data, "rho": RHO2_SQ_DEFAULT if variant.endswith("_i") else RHO_DEFAULT}
        return data

    @model_validator(mode="after")
    def _stable_step(self) -> "DiffusionConfig":
        bound = 1.0 / len(self.neighbors.offsets)
        if self.lambda_ > bound:
            raise ValueError(
                f"lambda={self.lambda_} exceeds the explicit-scheme bound {bound} "
                f"for a {self.neighborhood} neighborhood"
            )
        if (
            self.variant.startswith("plat")
            and self.iterations >= 1
            and self.update_interval > self.iterations
        ):
            raise ValueError(
                f"update_interval ({self.update_interval}) must not exceed "
                f"iterations ({self.iterations})"
            )
        return self

    @property
    def neighbors(self) -> NeighborOffsets:
        return NeighborOffsets(mode=self.neighborhood)

    @property
    def activity(self) -> ActivityConfig:
        """Activity schedule implied by the variant: fixed, per-iteration or periodic."""
        m = max(self.iterations, 1)
        if self.variant.startswith("flat"):
            interval = m
        elif self.variant.startswith("tlat"):
            interval = 1
        else:
            interval = min(self.update_interval, m)
        return ActivityConfig(
            clip_high=self.clip_high, update_interval=interval, max_iterations=m
        )


class TvConfig(BaseModel):
    """Explicit descent on the classic TV model."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lambda_: float = Field(0.25, alias="lambda", gt=0, description="Fidelity weight")
    dt: float = Field(0.2, gt=0, description="Time step; stable while dt <= eps / 4")
    eps: float = Field(1.0, gt=0, description="Gradient magnitude regularizer (intensity units)")
    iterations: int = Field(50, ge=0)


class RtvConfig(BaseModel):
    """Parameters of the RTV / LAT-RTV / LAT-RTVd solvers."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lambda_: float = Field(
        0.01, alias="lambda", ge=0, description="Smoothing weight; 0 gives the identity system"
    )
    sigma: float = Field(3.0, gt=0, description="Gaussian window scale (pixels)")
    eps: float = Field(1e-3, gt=0, description="Stabilizer for every denominator")
    iterations: int = Field(4, ge=0, description="Outer iterations")
    mode: Literal["rtv", "lat_rtv", "lat_rtvd"] = "lat_rtv"
    fidelity: Literal["previous_iterate", "original_image"] = "previous_iterate"
    clip_high: float = Field(30.0, gt=0.5, description="Activity clip bound h")
    solver: Literal["pcg", "dense"] = "pcg"
    intensity_scale: float = Field(
        255.0, gt=0, description="Gradients are measured on image / intensity_scale"
    )


# Denoising regime: one outer solve at half the smoothing weight.
DENOISE_RTV = RtvConfig(mode="lat_rtvd", iterations=1, lambda_=0.005)


class NoiseSpec(BaseModel):
    """Additive white Gaussian noise."""

    model_config = ConfigDict(frozen=True)

    sigma: float = Field(13.0, ge=0, description="Standard deviation (intensity units)")
    seed: int = Field(42, ge=0, lt=2**64)
    clip: bool = Field(True, description="Clamp to [0, 255] after adding the noise")
