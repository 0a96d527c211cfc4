"""Walk-agnostic renewal layer for geometric resetting.

Given any free-process first-hitting generating function (value and
z-derivative), dresses it with a per-step relocation probability r:
each time step is either a reset (probability r) or a walk move, both
consuming one time unit, and a hit registers only when a walk move
lands on the target.  Everything below is expressed through the free
generating function evaluated at the rescaled argument (1-r)z, so the
layer works for any nearest-neighbour process supplying the evaluator
contract, not just the Gillis walk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .errors import DomainError, InsufficientPrefixError, NegativeVarianceError
from .gillis import GenFunPoint, PmfPrefix, WalkSpec

# Variance may round slightly below zero; anything below this multiple
# of mean^2 signals a numerics bug instead.
_VARIANCE_SLACK = 1e-9


class FreeProcessGf(Protocol):
    """Evaluator contract: (source, z) -> GenFunPoint for the fixed target."""

    def __call__(self, source: int, z: float) -> GenFunPoint: ...


@dataclass(frozen=True)
class ResetParams:
    """Per-step resetting probability."""

    r: float

    def __post_init__(self):
        if not 0.0 <= self.r < 1.0:
            raise DomainError(f"resetting probability r={self.r} outside [0, 1)")

    def require_positive(self):
        if self.r == 0.0:
            raise DomainError("dressed moments require r in (0, 1)")


@dataclass(frozen=True)
class MomentSummary:
    """First two moments of the dressed first-hitting time with the
    derived standard deviation and coefficient of variation."""

    mean: float
    second_moment: float
    std_dev: float
    cv: float


def reset_gf(free: FreeProcessGf, spec: WalkSpec, p: ResetParams,
             z: float) -> float:
    """Generating function of the dressed first-hitting time."""
    if not 0.0 <= z < 1.0:
        raise DomainError(f"z={z} outside [0, 1)")
    if z == 0.0:
        return 0.0
    zeta = (1.0 - p.r) * z
    f0 = free(spec.x0, zeta).value
    if p.r == 0.0:
        return f0
    fr = f0 if spec.xr == spec.x0 else free(spec.xr, zeta).value
    return ((1.0 - z) * f0 + p.r * z * fr) / (1.0 - z + p.r * z * fr)


def mean_fht(free: FreeProcessGf, spec: WalkSpec, p: ResetParams) -> float:
    """Mean dressed first-hitting time, finite for every r in (0, 1)."""
    p.require_positive()
    z = 1.0 - p.r
    f0 = free(spec.x0, z).value
    fr = f0 if spec.xr == spec.x0 else free(spec.xr, z).value
    if fr == 0.0:
        return math.inf
    return (1.0 - f0) / (p.r * fr)


def second_moment_fht(free: FreeProcessGf, spec: WalkSpec,
                      p: ResetParams) -> float:
    """Second moment of the dressed first-hitting time."""
    p.require_positive()
    r = p.r
    z = 1.0 - r
    g0 = free(spec.x0, z)
    gr = g0 if spec.xr == spec.x0 else free(spec.xr, z)
    if gr.value == 0.0:
        return math.inf
    mean = (1.0 - g0.value) / (r * gr.value)
    bracket = (
        0.5
        - z * gr.derivative / gr.value
        + (1.0 - r * gr.value) / (r * gr.value)
        - z * g0.derivative / (1.0 - g0.value)
    )
    return 2.0 * mean * bracket


def moment_summary(free: FreeProcessGf, spec: WalkSpec,
                   p: ResetParams) -> MomentSummary:
    """Mean, second moment, standard deviation and coefficient of
    variation of the dressed first-hitting time."""
    mean = mean_fht(free, spec, p)
    m2 = second_moment_fht(free, spec, p)
    var = m2 - mean * mean
    if var < -_VARIANCE_SLACK * mean * mean:
        raise NegativeVarianceError(
            f"variance {var} below the rounding band at r={p.r}"
        )
    var = max(var, 0.0)
    std = math.sqrt(var)
    return MomentSummary(mean=mean, second_moment=m2, std_dev=std,
                         cv=std / mean)


def _dr_step(r: float) -> float:
    """Central-difference step for d/dr, keeping r +- h inside (0, 1)."""
    h = max(1e-6, 1e-4 * r * (1.0 - r))
    return min(h, 0.5 * r, 0.5 * (1.0 - r))


def cv_identity_residual(free: FreeProcessGf, spec: WalkSpec,
                         p: ResetParams) -> float:
    """Residual of the dressed coefficient-of-variation identity
    relating xi_r^2 + 1 to the mean from the reset point and the
    r-derivative of the reciprocal mean; should vanish identically."""
    p.require_positive()
    summary = moment_summary(free, spec, p)
    spec_r = WalkSpec(spec.epsilon, spec.xr, spec.xr)
    mean_rr = mean_fht(free, spec_r, p)
    h = _dr_step(p.r)
    inv_plus = 1.0 / mean_fht(free, spec, ResetParams(p.r + h))
    inv_minus = 1.0 / mean_fht(free, spec, ResetParams(p.r - h))
    d_inv = (inv_plus - inv_minus) / (2.0 * h)
    lhs = summary.cv**2 + 1.0
    rhs = (2.0 * mean_rr + 1.0) / summary.mean + 2.0 * (1.0 - p.r) * d_inv
    return lhs - rhs


def survival_gf(free: FreeProcessGf, source: int, z: float) -> float:
    """Generating function of the survival probability,
    (1 - F(z)) / (1 - z)."""
    if not 0.0 <= z < 1.0:
        raise DomainError(f"z={z} outside [0, 1)")
    return (1.0 - free(source, z).value) / (1.0 - z)


def reset_pmf_prefix(free_pmf: PmfPrefix, spec: WalkSpec, p: ResetParams,
                     n_max: int, free_pmf_xr: PmfPrefix | None = None) -> PmfPrefix:
    """Dressed pmf prefix by the explicit renewal convolution.

    free_pmf covers the start site; when the reset site differs, its
    prefix must be supplied separately.  Both prefixes must reach n_max.
    """
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    if free_pmf_xr is None:
        if spec.xr != spec.x0:
            raise InsufficientPrefixError(
                "x0 != xr requires the reset-site pmf prefix as well"
            )
        free_pmf_xr = free_pmf
    if free_pmf.n_max < n_max or free_pmf_xr.n_max < n_max:
        raise InsufficientPrefixError(
            f"pmf prefixes ({free_pmf.n_max}, {free_pmf_xr.n_max}) shorter "
            f"than requested n_max={n_max}"
        )
    r = p.r
    # 1-indexed working arrays; index 0 is the (empty) step-0 slot.
    f0 = np.concatenate(([0.0], free_pmf.probs[:n_max]))
    fr = np.concatenate(([0.0], free_pmf_xr.probs[:n_max]))
    q0 = np.concatenate(([1.0], 1.0 - np.cumsum(f0[1:])))
    qr = np.concatenate(([1.0], 1.0 - np.cumsum(fr[1:])))
    decay = (1.0 - r) ** np.arange(n_max + 1)
    # weight of a first reset at step k: r (1-r)^{k-1} Q(k-1)
    k = np.arange(1, n_max + 1)
    w_from_r = r * decay[k - 1] * qr[k - 1]
    w_from_0 = r * decay[k - 1] * q0[k - 1]
    dressed_r = np.zeros(n_max + 1)
    for n in range(1, n_max + 1):
        conv = np.dot(w_from_r[:n], dressed_r[n - 1::-1][:n])
        dressed_r[n] = decay[n] * fr[n] + conv
    out = np.empty(n_max)
    for n in range(1, n_max + 1):
        conv = np.dot(w_from_0[:n], dressed_r[n - 1::-1][:n])
        out[n - 1] = decay[n] * f0[n] + conv
    return PmfPrefix(probs=out, n_max=n_max)


def reset_gf_coefficients(free_coeffs_x0: np.ndarray,
                          free_coeffs_xr: np.ndarray,
                          r: float, n_max: int) -> np.ndarray:
    """Power-series coefficients of the dressed generating function,
    assembled from the free coefficient sequences by rescaling the
    argument and dividing the numerator series by the denominator
    series.  An independent route to the same pmf as the renewal
    convolution."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r={r} outside [0, 1)")
    if len(free_coeffs_x0) < n_max + 1 or len(free_coeffs_xr) < n_max + 1:
        raise InsufficientPrefixError("free coefficient arrays shorter than n_max+1")
    decay = (1.0 - r) ** np.arange(n_max + 1)
    a0 = free_coeffs_x0[: n_max + 1] * decay     # F(zeta | x0) in powers of z
    ar = free_coeffs_xr[: n_max + 1] * decay     # F(zeta | xr)
    num = np.copy(a0)
    num[1:] -= a0[:-1]                            # (1 - z) F(zeta | x0)
    num[1:] += r * ar[:-1]                        # + r z F(zeta | xr)
    den = np.zeros(n_max + 1)
    den[0] = 1.0
    den[1] = -1.0
    den[1:] += r * ar[:-1]                        # 1 - z + r z F(zeta | xr)
    quot = np.empty(n_max + 1)
    for n in range(n_max + 1):
        quot[n] = num[n] - np.dot(quot[:n], den[n:0:-1])
    return quot
