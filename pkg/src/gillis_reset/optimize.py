"""Optimal and threshold resetting probabilities.

The general minimizer works on the exact dressed mean through the
hypergeometric layer; the boundary-bias equations (closed generating
function at bias 1, limiting equation toward bias -1) are exposed as
scalar root problems of elementary functions and double as golden
values for the general path.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gillis import GillisHittingGf, WalkSpec, free_mean_fht, snap_epsilon
from .hypergeom import DEFAULT_POLICY, EvalPolicy
from .resetting import ResetParams, mean_fht, moment_summary
from .asymptotics import coeff_calB

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_R_EDGE = 1e-8
_SCAN_POINTS = 64


class Benefit(enum.Enum):
    ALWAYS_BENEFICIAL = "always-beneficial"
    BENEFICIAL_BELOW_THRESHOLD = "beneficial-below-threshold"
    NEVER_BENEFICIAL = "never-beneficial"


@dataclass(frozen=True)
class OptimizationResult:
    """Located minimum of the dressed mean over r, or the explicit
    no-interior-minimum marker (r_star None with a reason)."""

    r_star: float | None
    mean_at_star: float | None
    bracket: tuple[float, float] | None
    iterations: int
    converged: bool
    reason: str | None = None
    non_monotone_scan: bool = False


@dataclass(frozen=True)
class ThresholdResult:
    """Resetting probability at which the dressed mean crosses the
    reset-free mean, or the none-marker when resetting never helps."""

    r_th: float | None
    free_mean: float
    reason: str | None = None


def _mean_curve(spec: WalkSpec, policy: EvalPolicy):
    free = GillisHittingGf(spec.epsilon, policy)

    def mean_of(r: float) -> float:
        return mean_fht(free, spec, ResetParams(r))

    return mean_of


def find_optimal_r(spec: WalkSpec, tol: float = 1e-8,
                   policy: EvalPolicy = DEFAULT_POLICY) -> OptimizationResult:
    """Golden-section minimization of log mean over r in
    [1e-8, 1-1e-8] after a coarse log-spaced bracketing scan."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    mean_of = _mean_curve(spec, policy)
    grid = np.geomspace(_R_EDGE, 1.0 - _R_EDGE, _SCAN_POINTS)
    values = np.array([math.log(mean_of(r)) for r in grid])
    idx = int(np.argmin(values))
    diffs = np.diff(values)
    sign_changes = int(np.sum(np.abs(np.diff(np.sign(diffs))) > 0))
    non_monotone = sign_changes > 1
    if idx == 0:
        return OptimizationResult(
            r_star=None, mean_at_star=None, bracket=None,
            iterations=0, converged=True,
            reason="monotone-increasing mean",
            non_monotone_scan=non_monotone,
        )
    if idx == len(grid) - 1:
        raise DomainError(
            "mean decreasing at r -> 1; inconsistent with the universal "
            "large-r divergence"
        )
    lo, hi = float(grid[idx - 1]), float(grid[idx + 1])
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = math.log(mean_of(x1))
    f2 = math.log(mean_of(x2))
    iterations = 0
    while hi - lo > tol:
        iterations += 1
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = math.log(mean_of(x1))
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = math.log(mean_of(x2))
        if iterations > 200:
            break
    r_star = 0.5 * (lo + hi)
    return OptimizationResult(
        r_star=r_star,
        mean_at_star=mean_of(r_star),
        bracket=(lo, hi),
        iterations=iterations,
        converged=bool(hi - lo <= tol),
        non_monotone_scan=non_monotone,
    )


def _bisect(f, lo: float, hi: float, f_lo: float, tol: float) -> float:
    """Plain bisection on a bracketed sign change."""
    for _ in range(400):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan_bracket(f, lo: float, hi: float, points: int):
    """First sign change of f on a uniform grid, or None."""
    zs = np.linspace(lo, hi, points)
    prev_z = zs[0]
    prev_f = f(prev_z)
    for z in zs[1:]:
        cur = f(z)
        if prev_f == 0.0:
            return prev_z, prev_z, prev_f
        if (cur > 0) != (prev_f > 0):
            return prev_z, z, prev_f
        prev_z, prev_f = z, cur
    return None


def h_bias_one(t: float, k: int) -> float:
    """Combination whose k-th root equals z at the bias-1 optimum:
    h = (1-s)^k (1+ks) t(1+ks) / (t(1+ks) - k(1-t)(k+s)), s = sqrt(1-t^2).

    Derived by setting the z-derivative of the dressed mean to zero for
    the closed generating function F(z) = (1-s)^k (1+ks) / z^k and
    eliminating F through the stationarity relation (1-z) F'/F = 1 - F.
    (The extracted source text of this equation is corrupted; this form
    reproduces the quoted optimum values, the corrupted one does not.)
    """
    s = math.sqrt(1.0 - t * t)
    weight = t * (1.0 + k * s)
    denom = weight - k * (1.0 - t) * (k + s)
    if denom <= 0.0:
        raise DomainError(f"stationarity combination undefined at t={t}")
    return (1.0 - s) ** k * (1.0 + k * s) * weight / denom


def optimal_r_eps1(x0: int, tol: float = 1e-10) -> float:
    """Optimal resetting probability at bias 1 from the closed-form
    generating function; defined for |x0| >= 2 (the one-step walk has
    no interior optimum).  Returns r* = 1 - z*.

    Solves z = h_bias_one(z, k)^(1/k) through the equivalent pole-free
    residual z^k (t(1+ks) - k(1-t)(k+s)) - (1-s)^k (1+ks) t(1+ks),
    whose only roots on (0, 1) are z* and the trivial boundary z = 1.
    """
    k = abs(x0)
    if k < 2:
        raise DomainError("bias-1 optimum requires |x0| >= 2")

    def residual(z: float) -> float:
        s = math.sqrt(1.0 - z * z)
        weight = z * (1.0 + k * s)
        denom = weight - k * (1.0 - z) * (k + s)
        return z**k * denom - (1.0 - s) ** k * (1.0 + k * s) * weight

    # stop short of the trivial root at z = 1 (the r -> 0 boundary)
    bracket = _scan_bracket(residual, 0.3, 1.0 - 1e-6, 8192)
    if bracket is None:
        raise DomainError(f"no optimum root found for x0={x0}")
    lo, hi, f_lo = bracket
    z_star = _bisect(residual, lo, hi, f_lo, tol)
    return 1.0 - z_star


def optimal_r_eps_minus1(x0: int, tol: float = 1e-10) -> float:
    """Optimal resetting probability in the limiting equation toward
    bias -1 (the small prefactor of the generating function dropped).
    Returns r* = 1 - z*."""
    k = abs(x0)
    if k < 1:
        raise DomainError("x0 must be nonzero")

    def residual(z: float) -> float:
        lhs = z * z * math.sqrt((1.0 - z) / (1.0 + z))
        rhs = (1.0 - math.sqrt(1.0 - z * z)) * (1.0 - z + z / k)
        return lhs - rhs

    bracket = _scan_bracket(residual, 1e-6, 1.0 - 1e-10, 4096)
    if bracket is None:
        raise DomainError(f"no optimum root found for x0={x0}")
    lo, hi, f_lo = bracket
    z_star = _bisect(residual, lo, hi, f_lo, tol)
    return 1.0 - z_star


def find_threshold_r(spec: WalkSpec, tol: float = 1e-10,
                     policy: EvalPolicy = DEFAULT_POLICY) -> ThresholdResult:
    """Resetting probability above which the dressed mean exceeds the
    reset-free mean; meaningful only in the positive-recurrent range."""
    if not spec.epsilon > 0.5:
        raise DomainError(
            "threshold needs a finite reset-free mean (epsilon > 1/2)"
        )
    free_mean = free_mean_fht(spec.epsilon, spec.x0)
    opt = find_optimal_r(spec, tol=max(tol, 1e-8), policy=policy)
    if opt.r_star is None:
        return ThresholdResult(r_th=None, free_mean=free_mean,
                               reason=opt.reason)
    if opt.mean_at_star >= free_mean:
        return ThresholdResult(
            r_th=None, free_mean=free_mean,
            reason="interior minimum does not undercut the reset-free mean",
        )
    mean_of = _mean_curve(spec, policy)

    def residual(r: float) -> float:
        return mean_of(r) - free_mean

    lo = opt.r_star
    hi = 1.0 - _R_EDGE
    f_lo = residual(lo)
    if residual(hi) <= 0.0:
        raise DomainError("mean does not exceed the free mean before r -> 1")
    r_th = _bisect(residual, lo, hi, f_lo, tol)
    return ThresholdResult(r_th=r_th, free_mean=free_mean)


def threshold_eps1(x0: int, tol: float = 1e-10) -> float:
    """Threshold probability at bias 1 from the closed-form generating
    function; defined for |x0| >= 2.  Returns r_th = 1 - z_th."""
    k = abs(x0)
    if k < 2:
        raise DomainError("bias-1 threshold requires |x0| >= 2")

    def residual(z: float) -> float:
        s = math.sqrt(1.0 - z * z)
        lhs = (1.0 + s) / z
        rhs = ((1.0 + k * s) * (1.0 + k * k * (1.0 - z))) ** (1.0 / k)
        return lhs - rhs

    bracket = _scan_bracket(residual, 0.05, 1.0 - 1e-6, 8192)
    if bracket is None:
        raise DomainError(f"no threshold root found for x0={x0}")
    lo, hi, f_lo = bracket
    z_th = _bisect(residual, lo, hi, f_lo, tol)
    return 1.0 - z_th


def resetting_beneficial(spec: WalkSpec) -> Benefit:
    """Whether resetting can reduce the mean first-hitting time: always
    (infinite free mean), only below a threshold (finite mean, heavy
    tail), or never (the deterministic one-step walk)."""
    eps = snap_epsilon(spec.epsilon)
    if eps <= 0.5:
        return Benefit.ALWAYS_BENEFICIAL
    if coeff_calB(eps, spec.x0) > 0.0:
        return Benefit.BENEFICIAL_BELOW_THRESHOLD
    # Finite-variance residue: compare xi_0^2 + 1 against the
    # first-moment criterion (deterministic one-step walk only).
    mu1_x0 = free_mean_fht(eps, spec.x0)
    mu1_xr = free_mean_fht(eps, spec.xr)
    cv0_sq = 0.0  # zero variance in the only finite-variance case
    if cv0_sq + 1.0 > (2.0 * mu1_xr + 1.0) / mu1_x0:
        return Benefit.BENEFICIAL_BELOW_THRESHOLD
    return Benefit.NEVER_BENEFICIAL


def cv_optimality_residual(spec: WalkSpec, r: float,
                           policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Residual of the optimality condition relating the squared
    coefficient of variation to the mean from the reset site; zero at
    r*, negative where the mean is rising, positive where it is
    falling."""
    free = GillisHittingGf(spec.epsilon, policy)
    p = ResetParams(r)
    summary = moment_summary(free, spec, p)
    mean_rr = mean_fht(free, WalkSpec(spec.epsilon, spec.xr, spec.xr), p)
    return summary.cv**2 + 1.0 - (2.0 * mean_rr + 1.0) / summary.mean
