"""Closed-form asymptotic coefficients and limit laws for the dressed
first-hitting time in the r -> 0 and r -> 1 regimes.

The small-r laws depend on the recurrence regime of the reset-free
walk; the large-r law is universal and controlled only by the reset
site.  Every coefficient below is an explicit gamma/digamma expression;
the slowly-varying two-term expansions give the leading corrections the
laws carry at finite r.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import hypergeom as hg
from .errors import DomainError, PoleError
from .gillis import WalkSpec, hit_probability, hitting_gf, snap_epsilon

_G = hg.gamma


class LogForm(enum.Enum):
    """Slowly-varying factor attached to the power law."""

    NONE = "none"
    ONE_OVER_LOG = "one-over-log"          # 1 / log(1/r)
    ONE_OVER_SQRT_LOG = "one-over-sqrt-log"  # 1 / sqrt(log(1/r))
    LOG = "log"                              # log(1/r)


class TailCase(enum.Enum):
    """Moment structure of the reset-free hitting time at rho = 1."""

    DIVERGENT_MEAN = "divergent-mean"
    FINITE_MEAN_INFINITE_VARIANCE = "finite-mean-infinite-variance"
    FINITE_VARIANCE = "finite-variance"


@dataclass(frozen=True)
class AsymptoteLaw:
    """One asymptotic law prefactor * base^exponent * logfactor, with
    base = r (small-r laws) or base = 1-r (large-r law)."""

    regime: str
    prefactor: float
    exponent: float
    log_form: LogForm = LogForm.NONE
    in_one_minus_r: bool = False

    def evaluate(self, r: float) -> float:
        if not 0.0 < r < 1.0:
            raise DomainError(f"r={r} outside (0, 1)")
        base = (1.0 - r) if self.in_one_minus_r else r
        value = self.prefactor * base**self.exponent
        if self.log_form is LogForm.ONE_OVER_LOG:
            value /= math.log(1.0 / r)
        elif self.log_form is LogForm.ONE_OVER_SQRT_LOG:
            value /= math.sqrt(math.log(1.0 / r))
        elif self.log_form is LogForm.LOG:
            value *= math.log(1.0 / r)
        return value


# --------------------------------------------------------------------------
# coefficients
# --------------------------------------------------------------------------

def coeff_A(x0: int) -> float:
    """Mean-law coefficient at the transience boundary (digamma sums)."""
    if x0 == 0:
        raise DomainError("x0 must be nonzero")
    k = abs(x0)
    return (
        hg.digamma(0.25 + k / 2.0) - hg.digamma(0.25)
        + hg.digamma(0.75 + k / 2.0) - hg.digamma(0.75)
    )


def _bracket(epsilon: float, k: int) -> float:
    """Common gamma-ratio bracket of the B-family coefficients."""
    first = 0.0
    if 1.0 - epsilon > 0.0:
        first = epsilon * _G(1.0 + epsilon) / _G(1.0 - epsilon)
    return first + _G(1.0 + epsilon + k) / _G(k - epsilon)


def coeff_B(epsilon: float, x0: int) -> float:
    """Mean-law coefficient in the power-law recurrent ranges; negative
    in the positive-recurrent range."""
    epsilon = snap_epsilon(epsilon)
    if x0 == 0:
        raise DomainError("x0 must be nonzero")
    if epsilon == 0.5:
        raise PoleError("B has a gamma pole at epsilon = 1/2")
    if not (-0.5 < epsilon <= 1.0):
        raise DomainError(f"B defined for epsilon in (-1/2, 1], got {epsilon}")
    k = abs(x0)
    return (
        2.0 ** (-0.5 - epsilon)
        * _G(0.5 - epsilon) / _G(1.5 + epsilon)
        * _bracket(epsilon, k)
    )


def coeff_calB(epsilon: float, x0: int) -> float:
    """Standard-deviation coefficient; half the quoted 2*calB
    expression.  Continuous through epsilon = 1/2 and vanishing only in
    the deterministic one-step case."""
    epsilon = snap_epsilon(epsilon)
    if x0 == 0:
        raise DomainError("x0 must be nonzero")
    if not (-0.5 < epsilon <= 1.0):
        raise DomainError(f"calB defined for epsilon in (-1/2, 1], got {epsilon}")
    k = abs(x0)
    if epsilon == 1.0 and k == 1:
        return 0.0
    return 0.5 * (
        2.0 ** (0.5 - epsilon)
        * _G(1.5 - epsilon) / _G(1.5 + epsilon)
        * _bracket(epsilon, k)
    )


def coeff_C(epsilon: float, x0: int, xr: int) -> float:
    """Transient mean-law coefficient, (1 - R(0|x0)) / R(0|xr)."""
    epsilon = snap_epsilon(epsilon)
    if not -1.0 < epsilon < -0.5:
        raise DomainError(f"C defined for transient epsilon, got {epsilon}")
    if x0 == 0 or xr == 0:
        raise DomainError("x0 and xr must be nonzero")
    k0, kr = abs(x0), abs(xr)
    inv_r = hg.pochhammer(-epsilon, kr) / hg.pochhammer(1.0 + epsilon, kr)
    cross = math.exp(
        hg.log_gamma(1.0 + epsilon + k0) + hg.log_gamma(kr - epsilon)
        - hg.log_gamma(1.0 + epsilon + kr) - hg.log_gamma(k0 - epsilon)
    )
    return inv_r - cross


def coeff_small_c(epsilon: float, x0: int, xr: int) -> float:
    """Transient standard-deviation coefficient."""
    epsilon = snap_epsilon(epsilon)
    if not -1.0 < epsilon < -0.5:
        raise DomainError(f"c defined for transient epsilon, got {epsilon}")
    r0 = hit_probability(epsilon, x0)
    rr = hit_probability(epsilon, xr)
    return math.sqrt((1.0 - r0 * r0) / (rr * rr))


def coeff_K(epsilon: float, xr: int) -> float:
    """Large-r coefficient: reciprocal of the fastest-hit probability
    from the reset site."""
    epsilon = snap_epsilon(epsilon)
    if xr == 0:
        raise DomainError("xr must be nonzero")
    k = abs(xr)
    return math.exp(
        k * math.log(2.0) + math.lgamma(k + 1.0)
        + hg.log_gamma(1.0 + epsilon) - hg.log_gamma(1.0 + epsilon + k)
    )


# --------------------------------------------------------------------------
# limit laws
# --------------------------------------------------------------------------

def small_r_mean_law(spec: WalkSpec) -> AsymptoteLaw:
    """Leading small-r law of the dressed mean, one row per regime."""
    eps = spec.epsilon
    if eps < -0.5:
        return AsymptoteLaw("transient", coeff_C(eps, spec.x0, spec.xr), -1.0)
    if eps == -0.5:
        return AsymptoteLaw("boundary-transient", coeff_A(spec.x0), -1.0,
                            LogForm.ONE_OVER_LOG)
    if eps < 0.5:
        return AsymptoteLaw("null-recurrent", coeff_B(eps, spec.x0),
                            -(0.5 - eps))
    if eps == 0.5:
        return AsymptoteLaw("boundary-positive", spec.x0**2 / 2.0, 0.0,
                            LogForm.LOG)
    return AsymptoteLaw("positive-recurrent",
                        spec.x0**2 / (2.0 * eps - 1.0), 0.0)


def small_r_std_law(spec: WalkSpec) -> AsymptoteLaw:
    """Leading small-r law of the dressed standard deviation."""
    eps = spec.epsilon
    if eps < -0.5:
        return AsymptoteLaw("transient",
                            coeff_small_c(eps, spec.x0, spec.xr), -1.0)
    if eps == -0.5:
        return AsymptoteLaw("boundary-transient",
                            math.sqrt(2.0 * coeff_A(spec.x0)), -1.0,
                            LogForm.ONE_OVER_SQRT_LOG)
    if eps == 0.5:
        return AsymptoteLaw("boundary-positive", abs(spec.x0), -0.5)
    if eps == 1.0 and abs(spec.x0) == 1:
        return AsymptoteLaw("deterministic", 0.0, 0.0)
    label = "null-recurrent" if eps < 0.5 else "positive-recurrent"
    return AsymptoteLaw(label, math.sqrt(2.0 * coeff_calB(eps, spec.x0)),
                        -(1.5 - eps) / 2.0)


def large_r_mean_law(spec: WalkSpec) -> AsymptoteLaw:
    """Universal large-r law K (1-r)^(-|xr|); the standard deviation
    follows the same law (exponential limit)."""
    return AsymptoteLaw("large-r", coeff_K(spec.epsilon, spec.xr),
                        -float(abs(spec.xr)), in_one_minus_r=True)


def appendix_b_case(epsilon: float, x0: int | None = None) -> TailCase:
    """Moment structure of the reset-free hitting time in the rho = 1
    range; the deterministic one-step walk is the only finite-variance
    member."""
    epsilon = snap_epsilon(epsilon)
    if not 0.5 <= epsilon <= 1.0:
        raise DomainError(f"tail classification needs epsilon in [1/2, 1], got {epsilon}")
    if epsilon == 0.5:
        return TailCase.DIVERGENT_MEAN
    if epsilon == 1.0 and x0 is not None and abs(x0) == 1:
        return TailCase.FINITE_VARIANCE
    return TailCase.FINITE_MEAN_INFINITE_VARIANCE


# --------------------------------------------------------------------------
# slowly-varying expansions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SlowlyVaryingExpansion:
    """Two-term expansion of the slowly-varying factor at argument t:
    L(t) ~ leading + subleading, with |subleading| ~ t^(-subleading_exponent)."""

    leading: float
    subleading: float
    subleading_exponent: float

    def total(self) -> float:
        return self.leading + self.subleading


def log_case_constant(x0: int, t: float = 1e6) -> tuple[float, float]:
    """Additive constant of the logarithmic mean law at the rho = 1
    boundary, probed numerically as (x0^2/2) log t - t (1 - F(1 - 1/t)),
    with a drift estimate from a decade-lower probe."""
    if x0 == 0:
        raise DomainError("x0 must be nonzero")

    def probe(tt: float) -> float:
        z = 1.0 - 1.0 / tt
        return x0 * x0 / 2.0 * math.log(tt) - tt * (1.0 - hitting_gf(0.5, x0, z))

    k_hi = probe(t)
    k_lo = probe(t / 10.0)
    return k_hi, abs(k_hi - k_lo)


def slowly_varying_L(epsilon: float, x0: int, t: float) -> SlowlyVaryingExpansion:
    """Two-term expansion of the slowly-varying factor of the hitting
    generating function near z = 1, at t = 1/(1-z).

    The subleading coefficient in the range (-1/2, 0) follows the
    quoted inline expression; its exponent and sign are the reliable
    content (the exact prefactor is checked numerically, not trusted).
    """
    epsilon = snap_epsilon(epsilon)
    if x0 == 0:
        raise DomainError("x0 must be nonzero")
    if epsilon < -0.5:
        raise DomainError(f"slowly-varying form needs epsilon >= -1/2, got {epsilon}")
    if t <= 1.0:
        raise DomainError("t must exceed 1")
    k = abs(x0)
    if epsilon == -0.5:
        return SlowlyVaryingExpansion(
            leading=coeff_A(x0) / math.log(t),
            subleading=-(k * k / 2.0) / t,
            subleading_exponent=1.0,
        )
    if epsilon < 0.0:
        b = coeff_B(epsilon, x0)
        coef = (
            -epsilon * b / 2.0 ** (0.5 + epsilon)
            * _G(0.5 - epsilon) * _G(1.0 + epsilon)
            / (_G(1.5 + epsilon) * _G(1.0 - epsilon))
        )
        return SlowlyVaryingExpansion(
            leading=b,
            subleading=coef * t ** (-(0.5 + epsilon)),
            subleading_exponent=0.5 + epsilon,
        )
    if epsilon < 0.5:
        b = coeff_B(epsilon, x0)
        return SlowlyVaryingExpansion(
            leading=b,
            subleading=-(k * k / (1.0 - 2.0 * epsilon)) * t ** (-(0.5 - epsilon)),
            subleading_exponent=0.5 - epsilon,
        )
    if epsilon == 0.5:
        k_const, _ = log_case_constant(x0)
        return SlowlyVaryingExpansion(
            leading=k * k / 2.0 * math.log(t) - k_const,
            subleading=0.0,
            subleading_exponent=0.0,
        )
    b = coeff_B(epsilon, x0)
    return SlowlyVaryingExpansion(
        leading=k * k / (2.0 * epsilon - 1.0),
        subleading=b * t ** (-(epsilon - 0.5)),
        subleading_exponent=epsilon - 0.5,
    )
