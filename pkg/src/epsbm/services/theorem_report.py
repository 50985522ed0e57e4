"""Step-by-step evaluation of the Gaussian concentration argument on a finite space."""

import logging
import math
from typing import Optional

from pydantic import BaseModel

from epsbm.config.settings import (
    ConcentrationConfig,
    VerifierConfig,
    concentration_config,
    verifier_config,
)
from epsbm.core.errors import EpsBMError
from epsbm.core.models import ExtendedReal, MetricMeasureSpace, Subset
from epsbm.geometry.coefficients import distortion_coefficient, inf_coefficient
from epsbm.geometry.sets import farthest_pair, neighborhood, set_distance

from .bm_verifier import (
    BMCheckResult,
    BMParams,
    BMVerifyReport,
    bm_check_pair,
    bm_verify_exhaustive,
    bm_verify_sampled,
)
from .bounds import BoundsTable, bounds_table, gaussian_bound
from .concentration import (
    HALF_MASS,
    ConcentrationProfile,
    Strategy,
    concentration_profile,
)

logger = logging.getLogger(__name__)

REL_TOL = 1e-12


class DiameterCheck(BaseModel):
    """Diameter with the pair attaining it."""

    diameter: float
    i: int
    j: int
    within_pi: bool


def lemma_diameter_check(space: MetricMeasureSpace) -> DiameterCheck:
    """Diameter of the space and whether it is at most pi."""
    i, j = farthest_pair(space)
    diam = float(space.dist[i, j])
    return DiameterCheck(diameter=diam, i=i, j=j, within_pi=diam <= math.pi)


class ProofTrace(BaseModel):
    """Every quantity the concentration argument produces for one set A and radius r."""

    a: list[int]
    b: list[int]
    r: float
    n: float
    eps: float
    mass_a: float
    mass_b: float
    trivial: bool
    set_distance: ExtendedReal
    distance_ok: bool
    coefficient_floor: ExtendedReal
    inf_coefficient: ExtendedReal
    coefficient_ok: bool
    instance: Optional[BMCheckResult] = None
    amgm_bound: Optional[ExtendedReal] = None
    amgm_ok: bool = True
    conclusion_bound: Optional[float] = None
    conclusion_holds: bool = True


def proof_trace(
    space: MetricMeasureSpace,
    a: Subset,
    r: float,
    params: BMParams,
    tol_report: Optional[float] = None,
    mc_samples: Optional[int] = None,
) -> ProofTrace:
    """
    Run the concentration argument on a concrete half-mass set.

    With B = X minus A_r: d(A, B) >= r, so the infimum of the t = 1/2
    coefficient over A x B is at least its value at r. The inequality for
    (A, B, 1/2), the identity sin r = 2 sin(r/2) cos(r/2) and the AM-GM step
    then bound its right-hand side below by
    sqrt(mu(A)^(1/n) mu(B)^(1/n)) / cos(r/2)^((n-1)/n), and since the
    left-hand side is at most 1 and mu(A) >= 1/2, mu(B) <= 2 cos(r/2)^(2(n-1)).

    Args:
        space: Validated space
        a: Set with mu(A) >= 1/2
        r: Radius > 0
        params: eps and n; params.t is replaced by 1/2
        tol_report: Slack for the inequality instance
        mc_samples: Samples behind Monte Carlo weights, for the instance slack

    Returns:
        ProofTrace; with B empty every step holds trivially

    Raises:
        EpsBMError: If mu(A) < 1/2
        NonpositiveR: If r <= 0
    """
    rows = space.indices_of(a, nonempty=True)
    mass_a = math.fsum(space.weights[rows])
    if mass_a < HALF_MASS:
        raise EpsBMError(f"A must carry at least half the mass, has {mass_a!r}")
    n = params.n
    reach = neighborhood(space, a, r)
    b = Subset.from_bool(~space.membership(reach))
    floor = distortion_coefficient(r, 0.5, n)

    if b.is_empty():
        return ProofTrace(
            a=list(a.indices),
            b=[],
            r=r,
            n=n,
            eps=params.eps,
            mass_a=mass_a,
            mass_b=0.0,
            trivial=True,
            set_distance=math.inf,
            distance_ok=True,
            coefficient_floor=floor,
            inf_coefficient=math.inf,
            coefficient_ok=True,
        )

    mass_b = math.fsum(space.weights[space.indices_of(b)])
    gap_ab = set_distance(space, a, b)
    coeff, _ = inf_coefficient(space, a, b, 0.5, n)
    instance = bm_check_pair(
        space, a, b, params.at(0.5), tol_report, mc_samples=mc_samples
    )

    amgm = None
    conclusion = None
    if r < math.pi:
        half_cos = math.cos(r / 2.0)
        amgm = math.sqrt(mass_a ** (1.0 / n) * mass_b ** (1.0 / n)) / half_cos ** (
            (n - 1.0) / n
        )
        conclusion = 2.0 * half_cos ** (2.0 * (n - 1.0))
    amgm_ok = amgm is None or instance.rhs >= amgm * (1.0 - REL_TOL)
    holds = True
    # the conclusion needs lhs >= rhs exactly, not within reporting slack
    if instance.gap >= 0.0:
        holds = conclusion is not None and mass_b <= conclusion + REL_TOL

    trace = ProofTrace(
        a=list(a.indices),
        b=list(b.indices),
        r=r,
        n=n,
        eps=params.eps,
        mass_a=mass_a,
        mass_b=mass_b,
        trivial=False,
        set_distance=gap_ab,
        distance_ok=gap_ab >= r,
        coefficient_floor=floor,
        inf_coefficient=coeff,
        coefficient_ok=coeff >= floor * (1.0 - REL_TOL),
        instance=instance,
        amgm_bound=amgm,
        amgm_ok=amgm_ok,
        conclusion_bound=conclusion,
        conclusion_holds=holds,
    )
    logger.debug("trace at r=%r: mu(B)=%r, bound %r", r, mass_b, conclusion)
    return trace


class TheoremReport(BaseModel):
    """Diameter check, inequality verification, concentration profile and bounds."""

    lemma: DiameterCheck
    verification: BMVerifyReport
    profile: ConcentrationProfile
    bounds: BoundsTable
    traces: list[ProofTrace]
    gaussian_holds: bool
    gaussian_violations: list[float]

    @property
    def consistent(self) -> bool:
        """A verified inequality must come with the Gaussian bound holding."""
        return not self.verification.satisfied or self.gaussian_holds


def theorem_report(
    space: MetricMeasureSpace,
    params: BMParams,
    r_values: list[float],
    t_values: Optional[list[float]] = None,
    strategy: Strategy = "auto",
    pair_count: int = 1000,
    sampler: str = "balls",
    seed: int = 0,
    tol_report: Optional[float] = None,
    verifier_cfg: Optional[VerifierConfig] = None,
    concentration_cfg: Optional[ConcentrationConfig] = None,
    mc_samples: Optional[int] = None,
) -> TheoremReport:
    """
    Run every check between the inequality and Gaussian concentration.

    Verification is exhaustive when the space is small enough, sampled
    otherwise. A proof trace is recorded for each radius below pi, on the
    half-mass set the concentration search returned.

    Args:
        space: Validated space
        params: eps and n
        r_values: Strictly increasing positive radii
        t_values: Interpolation grid for verification
        strategy: Concentration strategy
        pair_count: Pairs for sampled verification
        sampler: Pair sampler for sampled verification
        seed: Sampler seed
        tol_report: Reporting slack
        verifier_cfg: Verifier config; defaults to the global one
        concentration_cfg: Concentration config; defaults to the global one
        mc_samples: Samples behind Monte Carlo weights, for the per-instance slack

    Returns:
        TheoremReport
    """
    verifier_cfg = verifier_cfg or verifier_config
    concentration_cfg = concentration_cfg or concentration_config

    lemma = lemma_diameter_check(space)
    if space.size <= verifier_cfg.exhaustive_max_points:
        verification = bm_verify_exhaustive(
            space, params, t_values, tol_report, verifier_cfg, mc_samples
        )
    else:
        verification = bm_verify_sampled(
            space,
            params,
            t_values,
            pair_count,
            sampler,
            seed,
            tol_report,
            verifier_cfg,
            mc_samples,
        )

    profile = concentration_profile(
        space, r_values, params.n, strategy, concentration_cfg
    )
    violations = [
        r
        for r, alpha in zip(profile.r_values, profile.alpha_values, strict=True)
        if alpha > gaussian_bound(params.n, r) + REL_TOL
    ]
    traces = [
        proof_trace(space, Subset.of(witness), r, params, tol_report, mc_samples)
        for r, witness in zip(profile.r_values, profile.witnesses, strict=True)
        if r < math.pi
    ]
    logger.info(
        "theorem report: verified=%s, gaussian bound %s",
        verification.satisfied,
        "holds" if not violations else f"fails at {len(violations)} radii",
    )
    return TheoremReport(
        lemma=lemma,
        verification=verification,
        profile=profile,
        bounds=bounds_table(params.n, list(r_values)),
        traces=traces,
        gaussian_holds=not violations,
        gaussian_violations=violations,
    )
