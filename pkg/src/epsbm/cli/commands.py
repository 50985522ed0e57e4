"""Subcommand implementations; each returns a report payload and an exit code."""

import argparse
import logging
import math
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel

from epsbm.config.settings import (
    ConcentrationConfig,
    DiscretizationConfig,
    VerifierConfig,
    concentration_config,
    discretization_config,
    verifier_config,
)
from epsbm.core.errors import EpsBMError
from epsbm.core.models import MetricMeasureSpace, Subset
from epsbm.formats.space_file import parse_space, read_space_metadata, write_space_file
from epsbm.geometry.sets import intermediate_set
from epsbm.services.bm_verifier import (
    BMParams,
    bm_check_pair,
    bm_verify_exhaustive,
    bm_verify_sampled,
    uniform_t_grid,
)
from epsbm.services.bounds import bounds_table
from epsbm.services.concentration import concentration_profile
from epsbm.services.discretize import discretize_sphere
from epsbm.services.theorem_report import lemma_diameter_check, theorem_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2

CommandResult = tuple[dict[str, Any], BaseModel, int]


class SpaceSummary(BaseModel):
    """What `validate` reports about a space file."""

    size: int
    labels: list[str]
    diameter: float
    min_weight: float
    max_weight: float
    metadata: dict[str, str]


class IntermediateResult(BaseModel):
    """Members and mass of one intermediate set."""

    a0: list[int]
    a1: list[int]
    t: float
    eps: float
    members: list[int]
    size: int
    mass: float


def parse_index_list(text: str) -> list[int]:
    """Parse "0,2,5" into [0, 2, 5]."""
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise EpsBMError(
            f"index list {text!r} must be comma-separated integers"
        ) from None


def parse_r_grid(text: str) -> list[float]:
    """Parse "lo:hi:steps" into steps evenly spaced radii from lo to hi."""
    parts = text.split(":")
    if len(parts) != 3:
        raise EpsBMError(f"r grid {text!r} must look like lo:hi:steps")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise EpsBMError(f"r grid {text!r} must look like lo:hi:steps") from None
    if steps < 0:
        raise EpsBMError(f"r grid needs a nonnegative step count, got {steps}")
    return [float(r) for r in np.linspace(lo, hi, steps)]


def _load_space(args: argparse.Namespace) -> tuple[MetricMeasureSpace, dict[str, str]]:
    if not args.space:
        raise EpsBMError("--space FILE is required for this command")
    try:
        text = Path(args.space).read_text(encoding="utf-8")
    except OSError as e:
        raise EpsBMError(f"cannot read space file: {e}") from None
    return parse_space(text), read_space_metadata(text)


def _verifier_cfg(args: argparse.Namespace) -> VerifierConfig:
    return verifier_config.model_copy(update={"workers": args.workers})


def _concentration_cfg(args: argparse.Namespace) -> ConcentrationConfig:
    return concentration_config.model_copy(update={"workers": args.workers})


def _discretization_cfg(args: argparse.Namespace) -> DiscretizationConfig:
    return discretization_config.model_copy(update={"workers": args.workers})


def _t_values(args: argparse.Namespace) -> Optional[list[float]]:
    if args.t_grid is not None:
        return uniform_t_grid(args.t_grid)
    return list(args.t) if args.t else None


def _r_values(args: argparse.Namespace) -> list[float]:
    values = list(args.r or [])
    if args.r_grid:
        values.extend(parse_r_grid(args.r_grid))
    return sorted(set(values))


def _eps(args: argparse.Namespace, meta: dict[str, str]) -> float:
    """--eps, or --cover-multiple times the effective eps of a discretization."""
    if args.cover_multiple is None:
        return args.eps
    if "effective_eps" not in meta:
        raise EpsBMError(
            "--cover-multiple needs a space file with an effective_eps entry"
        )
    return args.cover_multiple * float(meta["effective_eps"])


def _mc_samples(meta: dict[str, str]) -> Optional[int]:
    """Sample count behind Monte Carlo weights, if the space file records one."""
    if "mc_samples" in meta:
        return int(meta["mc_samples"])
    return None


def cmd_validate(args: argparse.Namespace) -> CommandResult:
    space, meta = _load_space(args)
    summary = SpaceSummary(
        size=space.size,
        labels=list(space.labels),
        diameter=space.max_distance,
        min_weight=float(space.weights.min()),
        max_weight=float(space.weights.max()),
        metadata=meta,
    )
    return {"space": args.space}, summary, EXIT_OK


def cmd_diameter(args: argparse.Namespace) -> CommandResult:
    space, _ = _load_space(args)
    return {"space": args.space}, lemma_diameter_check(space), EXIT_OK


def cmd_intermediate(args: argparse.Namespace) -> CommandResult:
    space, _ = _load_space(args)
    a0, a1 = Subset.of(parse_index_list(args.a0)), Subset.of(parse_index_list(args.a1))
    t = args.t[0] if args.t else 0.5
    members = intermediate_set(space, a0, a1, t, args.eps)
    idx = space.indices_of(members)
    result = IntermediateResult(
        a0=list(a0.indices),
        a1=list(a1.indices),
        t=t,
        eps=args.eps,
        members=list(members.indices),
        size=len(members),
        mass=math.fsum(space.weights[idx]),
    )
    params = {
        "space": args.space,
        "a0": result.a0,
        "a1": result.a1,
        "t": t,
        "eps": args.eps,
    }
    return params, result, EXIT_OK


def cmd_bm_check(args: argparse.Namespace) -> CommandResult:
    space, meta = _load_space(args)
    t = args.t[0] if args.t else 0.5
    eps = _eps(args, meta)
    tol = args.tol
    mc_samples = _mc_samples(meta)
    a0, a1 = Subset.of(parse_index_list(args.a0)), Subset.of(parse_index_list(args.a1))
    result = bm_check_pair(
        space, a0, a1, BMParams(eps=eps, n=args.n, t=t), tol, mc_samples=mc_samples
    )
    params = {
        "space": args.space,
        "a0": result.a0,
        "a1": result.a1,
        "eps": eps,
        "n": args.n,
        "t": t,
        "tol": verifier_config.tol_report if tol is None else tol,
        "mc_samples": mc_samples,
    }
    return params, result, EXIT_OK if result.satisfied else EXIT_VIOLATION


def cmd_bm_verify(args: argparse.Namespace) -> CommandResult:
    space, meta = _load_space(args)
    eps = _eps(args, meta)
    tol = args.tol
    mc_samples = _mc_samples(meta)
    params = BMParams(eps=eps, n=args.n)
    t_values = _t_values(args)
    config = _verifier_cfg(args)
    method = args.method
    if method == "auto":
        small = space.size <= config.exhaustive_max_points
        method = "exhaustive" if small else "sampled"
    if method == "exhaustive":
        report = bm_verify_exhaustive(space, params, t_values, tol, config, mc_samples)
    else:
        report = bm_verify_sampled(
            space, params, t_values, args.pairs,
            args.sampler,
            args.seed,
            tol,
            config,
            mc_samples,
        )
    echo = {
        "space": args.space,
        "eps": eps,
        "n": args.n,
        "t_values": report.t_values,
        "method": method,
        "pairs": args.pairs,
        "sampler": args.sampler,
        "seed": args.seed,
        "tol": report.tol_report,
        "mc_samples": mc_samples,
    }
    return echo, report, EXIT_OK if report.satisfied else EXIT_VIOLATION


def cmd_concentration(args: argparse.Namespace) -> CommandResult:
    space, _ = _load_space(args)
    r_values = _r_values(args)
    profile = concentration_profile(
        space, r_values, args.n, args.strategy, _concentration_cfg(args)
    )
    params = {
        "space": args.space,
        "n": args.n,
        "r_values": r_values,
        "strategy": args.strategy,
    }
    return params, profile, EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> CommandResult:
    r_values = _r_values(args)
    return {"n": args.n, "r_values": r_values}, bounds_table(args.n, r_values), EXIT_OK


def cmd_theorem_report(args: argparse.Namespace) -> CommandResult:
    space, meta = _load_space(args)
    eps = _eps(args, meta)
    tol = args.tol
    mc_samples = _mc_samples(meta)
    r_values = _r_values(args)
    report = theorem_report(
        space,
        BMParams(eps=eps, n=args.n),
        r_values,
        t_values=_t_values(args),
        strategy=args.strategy,
        pair_count=args.pairs,
        sampler=args.sampler,
        seed=args.seed,
        tol_report=tol,
        verifier_cfg=_verifier_cfg(args),
        concentration_cfg=_concentration_cfg(args),
        mc_samples=mc_samples,
    )
    params = {
        "space": args.space,
        "eps": eps,
        "n": args.n,
        "t_values": report.verification.t_values,
        "r_values": r_values,
        "strategy": args.strategy,
        "pairs": args.pairs,
        "sampler": args.sampler,
        "seed": args.seed,
        "tol": report.verification.tol_report,
        "mc_samples": mc_samples,
    }
    ok = report.verification.satisfied and report.gaussian_holds
    return params, report, EXIT_OK if ok else EXIT_VIOLATION


def cmd_discretize_sphere(args: argparse.Namespace) -> CommandResult:
    if not args.out:
        raise EpsBMError("discretize-sphere needs --out FILE for the space file")
    result = discretize_sphere(
        args.m,
        args.centers,
        args.samples,
        args.seed,
        cloud_size=args.cloud_size,
        config=_discretization_cfg(args),
    )
    summary = result.summary()
    metadata = {
        "m": result.m,
        "seed": result.seed,
        "mc_samples": result.mc_samples,
        "cloud_size": result.cloud_size,
        "covering_radius": repr(result.covering_radius),
        "sample_covering_radius": repr(result.sample_covering_radius),
        "effective_eps": repr(result.effective_eps),
        "max_stderr": repr(summary.max_stderr),
    }
    try:
        write_space_file(args.out, result.space, metadata)
    except OSError as e:
        raise EpsBMError(f"cannot write space file {args.out}: {e}") from e
    params = {
        "m": args.m,
        "centers": args.centers,
        "samples": args.samples,
        "seed": args.seed,
        "cloud_size": result.cloud_size,
        "out": args.out,
    }
    return params, summary, EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "diameter": cmd_diameter,
    "intermediate": cmd_intermediate,
    "bm-check": cmd_bm_check,
    "bm-verify": cmd_bm_verify,
    "concentration": cmd_concentration,
    "bounds": cmd_bounds,
    "theorem-report": cmd_theorem_report,
    "discretize-sphere": cmd_discretize_sphere,
}
