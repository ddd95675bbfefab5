"""Local activity-tuned anisotropic diffusion and relative total variation filters."""

__version__ = "0.1.0"
