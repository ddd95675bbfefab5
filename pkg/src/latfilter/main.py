"""Command line entry point for latfilter.

Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
3 numeric or solver error. ``--json`` prints one record
``{"command", "params", "metrics", "wall_time_ms"}`` to stdout.
"""

import argparse
import json
import logging
import sys
import time
from collections.abc import Callable
from typing import Any

import numpy as np
from pydantic import ValidationError

from . import __version__
from .activity import compute_activity
from .config import settings
from .diffusion import diffuse, diffuse_tv
from .errors import ImageFormatError, LatFilterError, NumericError, SolverError
from .experiments import (
    BenchmarkReport,
    run_artifact_benchmark,
    run_denoising_benchmark,
    run_smoothing_benchmark,
)
from .image_io import read_image, write_image
from .logging_config import setup_logging
from .metrics_noise import SYNTH_KINDS, add_gaussian_noise, psnr, synth_piecewise
from .models import (
    LAT_VARIANTS,
    PM_VARIANTS,
    DiffusionConfig,
    NoiseSpec,
    RtvConfig,
    TvConfig,
)
from .rtv import rtv_filter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERIC = 3


class CliUsageError(LatFilterError, ValueError):
    """The command line could not be parsed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise CliUsageError(message)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print a machine-readable record")
    common.add_argument("--log-level", default=None, help="Console log level")
    common.add_argument(
        "--color",
        choices=["luma", "channels"],
        default=settings.color_mode,
        help="Colour input: BT.601 luma or per-channel filtering",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser; every default mirrors the model defaults."""
    ad = DiffusionConfig()
    tv = TvConfig()
    rtv = RtvConfig()
    noise = NoiseSpec()
    common = _common_options()

    parser = _Parser(prog="latfilter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter-ad", parents=[common], help="Anisotropic diffusion")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--variant", choices=list(PM_VARIANTS + LAT_VARIANTS), default=ad.variant)
    p.add_argument("--lambda", dest="lam", type=float, default=ad.lambda_)
    p.add_argument("--rho", type=float, default=None, help="Edge-stop scale (any variant)")
    p.add_argument("--rho1", type=float, default=None, help="rho1 of flat/tlat/plat")
    p.add_argument("--rho2-sq", dest="rho2_sq", type=float, default=None, help="rho2^2 of *_i")
    p.add_argument("--iters", type=int, default=ad.iterations)
    p.add_argument("--h", dest="clip_high", type=float, default=ad.clip_high)
    p.add_argument("--interval", type=int, default=ad.update_interval)
    p.add_argument(
        "--neighborhood", choices=["four_connected", "eight_connected"], default=ad.neighborhood
    )
    p.add_argument("--reference", default=None, help="Clean image for a PSNR metric")

    p = sub.add_parser("filter-rtv", parents=[common], help="RTV / LAT-RTV / LAT-RTVd")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--mode", choices=["rtv", "lat_rtv", "lat_rtvd"], default=rtv.mode)
    p.add_argument("--lambda", dest="lam", type=float, default=rtv.lambda_)
    p.add_argument("--sigma", type=float, default=rtv.sigma)
    p.add_argument("--eps", type=float, default=rtv.eps)
    p.add_argument("--iters", type=int, default=rtv.iterations)
    p.add_argument(
        "--fidelity", choices=["previous_iterate", "original_image"], default=rtv.fidelity
    )
    p.add_argument("--h", dest="clip_high", type=float, default=rtv.clip_high)
    p.add_argument("--solver", choices=["pcg", "dense"], default=rtv.solver)
    p.add_argument("--reference", default=None, help="Clean image for a PSNR metric")

    p = sub.add_parser("filter-tv", parents=[common], help="Classic TV descent")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--lambda", dest="lam", type=float, default=tv.lambda_)
    p.add_argument("--dt", type=float, default=tv.dt)
    p.add_argument("--eps", type=float, default=tv.eps)
    p.add_argument("--iters", type=int, default=tv.iterations)
    p.add_argument("--reference", default=None, help="Clean image for a PSNR metric")

    p = sub.add_parser("noise", parents=[common], help="Add seeded Gaussian noise")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--sigma", type=float, default=noise.sigma)
    p.add_argument("--seed", type=int, default=noise.seed)
    p.add_argument("--clip", action=argparse.BooleanOptionalAction, default=noise.clip)

    p = sub.add_parser("psnr", parents=[common], help="PSNR between two images")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("synth", parents=[common], help="Write a synthetic test image")
    p.add_argument("kind", choices=list(SYNTH_KINDS))
    p.add_argument("output")
    p.add_argument("--height", type=int, default=128)
    p.add_argument("--width", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("activity", parents=[common], help="Write the local activity map")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--h", dest="clip_high", type=float, default=ad.clip_high)

    p = sub.add_parser("benchmark", parents=[common], help="Run a desk-scale experiment")
    p.add_argument("experiment", choices=["artifact", "denoise", "smooth"])
    p.add_argument("--seeds", type=int, default=5, help="Number of seeded images")
    p.add_argument("--size", type=int, default=None, help="Image side length")
    return parser


def diffusion_config(args: argparse.Namespace) -> DiffusionConfig:
    """Map ``filter-ad`` flags onto a DiffusionConfig."""
    if args.variant.endswith("_i"):
        rho = args.rho2_sq if args.rho2_sq is not None else args.rho
    else:
        rho = args.rho1 if args.rho1 is not None else args.rho
    return DiffusionConfig(
        lambda_=args.lam,
        rho=rho,
        iterations=args.iters,
        variant=args.variant,
        clip_high=args.clip_high,
        update_interval=args.interval,
        neighborhood=args.neighborhood,
    )


def rtv_config(args: argparse.Namespace) -> RtvConfig:
    """Map ``filter-rtv`` flags onto an RtvConfig."""
    return RtvConfig(
        lambda_=args.lam,
        sigma=args.sigma,
        eps=args.eps,
        iterations=args.iters,
        mode=args.mode,
        fidelity=args.fidelity,
        clip_high=args.clip_high,
        solver=args.solver,
    )


def tv_config(args: argparse.Namespace) -> TvConfig:
    """Map ``filter-tv`` flags onto a TvConfig."""
    return TvConfig(lambda_=args.lam, dt=args.dt, eps=args.eps, iterations=args.iters)


def noise_spec(args: argparse.Namespace) -> NoiseSpec:
    """Map ``noise`` flags onto a NoiseSpec."""
    return NoiseSpec(sigma=args.sigma, seed=args.seed, clip=args.clip)


def _per_channel(filter_fn: Callable[[np.ndarray], np.ndarray], img: np.ndarray) -> np.ndarray:
    if img.ndim == 2:
        return filter_fn(img)
    return np.stack([filter_fn(img[:, :, c]) for c in range(img.shape[2])], axis=-1)


def _psnr_any(a: np.ndarray, b: np.ndarray) -> float:
    # colour images: one PSNR over all channels
    return psnr(a.reshape(a.shape[0], -1), b.reshape(b.shape[0], -1))


def _print_report(report: BenchmarkReport) -> None:
    print(f"{report.experiment}: {report.params}")
    for method, means in report.summary().items():
        records = [r for r in report.records if r.method == method]
        summary = ", ".join(f"{m}={value:.4f}" for m, value in sorted(means.items()))
        elapsed = sum(r.wall_time_ms for r in records) / len(records)
        print(f"  {method:<10} {summary}  ({elapsed:.1f} ms/run)")


def _execute(args: argparse.Namespace) -> tuple[dict[str, Any], dict[str, Any]]:
    """Run one subcommand; returns ``(params, metrics)``."""
    command = args.command
    params: dict[str, Any] = {}
    metrics: dict[str, Any] = {}

    if command in ("filter-ad", "filter-rtv", "filter-tv"):
        img = read_image(args.input, color=args.color)
        if command == "filter-ad":
            cfg = diffusion_config(args)
            output = _per_channel(lambda channel: diffuse(channel, cfg), img)
        elif command == "filter-rtv":
            cfg = rtv_config(args)
            output = _per_channel(lambda channel: rtv_filter(channel, cfg), img)
        else:
            cfg = tv_config(args)
            output = _per_channel(lambda channel: diffuse_tv(channel, channel, cfg), img)
        write_image(output, args.output)
        params = {"input": args.input, "output": args.output, **cfg.model_dump(by_alias=True)}
        if args.reference:
            metrics["psnr"] = _psnr_any(output, read_image(args.reference, color=args.color))

    elif command == "noise":
        spec = noise_spec(args)
        img = read_image(args.input, color=args.color)
        noisy = _per_channel(lambda channel: add_gaussian_noise(channel, spec), img)
        write_image(noisy, args.output)
        params = {"input": args.input, "output": args.output, **spec.model_dump()}

    elif command == "psnr":
        a = read_image(args.a, color=args.color)
        b = read_image(args.b, color=args.color)
        value = _psnr_any(a, b)
        params = {"a": args.a, "b": args.b}
        metrics["psnr"] = value
        if not args.json:
            print(f"{value:.4f}")

    elif command == "synth":
        img = synth_piecewise(args.kind, args.height, args.width, seed=args.seed)
        write_image(img, args.output)
        params = {"kind": args.kind, "height": args.height, "width": args.width, "seed": args.seed}

    elif command == "activity":
        img = read_image(args.input, color="luma")
        activity = compute_activity(img, args.clip_high)
        write_image(activity.normalized * 255.0, args.output)
        params = {"input": args.input, "output": args.output, "clip_high": args.clip_high}
        metrics["mean_activity"] = float(activity.normalized.mean())

    elif command == "benchmark":
        seeds = range(args.seeds)
        if args.experiment == "artifact":
            report = run_artifact_benchmark()
        elif args.experiment == "denoise":
            report = run_denoising_benchmark(seeds=seeds, size=args.size or 128)
        else:
            report = run_smoothing_benchmark(seeds=seeds, size=args.size or 32)
        params = {"experiment": args.experiment, **report.params}
        metrics = report.summary()
        if not args.json:
            _print_report(report)

    return params, metrics


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not np.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    return value


def validate_configuration() -> bool:
    """Check the process-wide settings; logs every problem and returns False if any."""
    errors = []

    try:
        settings.validate_solver_config()
    except ValueError as e:
        errors.append(str(e))

    if errors:
        logger.error("Configuration validation failed:")
        for error in errors:
            logger.error(f"  - {error}")
        return False
    return True


def run(argv: list[str] | None = None) -> int:
    """Parse ``argv``, execute the command and return the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except CliUsageError as e:
        print(f"latfilter: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if args.log_level:
        setup_logging(args.log_level)

    if not validate_configuration():
        return EXIT_USAGE

    start = time.perf_counter()
    try:
        params, metrics = _execute(args)
    except (SolverError, NumericError, FloatingPointError) as e:
        logger.error(f"Numeric failure: {e}")
        return EXIT_NUMERIC
    except (ImageFormatError, OSError) as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_IO
    except (ValidationError, ValueError) as e:
        logger.error(f"Invalid arguments: {e}")
        return EXIT_USAGE
    except LatFilterError as e:
        logger.error(f"Internal error: {e}", exc_info=True)
        return EXIT_NUMERIC

    wall_time_ms = (time.perf_counter() - start) * 1000.0
    if args.json:
        record = {
            "command": args.command,
            "params": _json_safe(params),
            "metrics": _json_safe(metrics),
            "wall_time_ms": round(wall_time_ms, 3),
        }
        print(json.dumps(record, indent=settings.json_indent, sort_keys=True))
    logger.info(f"{args.command} finished in {wall_time_ms:.1f} ms")
    return EXIT_OK


def main() -> None:
    """Main entry point for the command line tool."""
    setup_logging()
    logger.debug("Starting latfilter")

    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logger.info("Interrupted")
        sys.exit(130)


if __name__ == "__main__":
    main()
