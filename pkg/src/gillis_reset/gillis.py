"""Exact reset-free quantities for the centrally biased lattice walk.

The walk lives on the integers, jumps to nearest neighbours only, and
from site y != 0 moves toward the origin with probability (1 + eps/y)/2
possibly exceeding or undershooting 1/2 depending on the sign of eps.
The target site is fixed at the origin.  This module provides the
transition rule, the recurrence classification, the generating functions
of first-return / first-hitting / occupation probabilities, hit
probabilities, the reset-free mean first-hitting time, exact power-series
coefficients of the hitting generating function, and an exact
lattice-propagation pmf oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import hypergeom as hg
from .errors import DomainError, ResourceLimitError
from .hypergeom import DEFAULT_POLICY, EvalPolicy, HypergeomParams

# Bias values within this distance of +-1/2 are snapped onto the exact
# boundary so the logarithmic hypergeometric cases are used there.
EPSILON_SNAP_BAND = 1e-9

# Cap on the lattice-propagation oracle (cost grows as n_max^2).
MAX_PMF_STEPS = 10_000


def snap_epsilon(epsilon: float) -> float:
    """Snap a bias within EPSILON_SNAP_BAND of +-1/2 onto the boundary."""
    for boundary in (-0.5, 0.5):
        if abs(epsilon - boundary) <= EPSILON_SNAP_BAND:
            return boundary
    return epsilon


def _check_epsilon(epsilon: float) -> float:
    if not -1.0 < epsilon <= 1.0:
        raise DomainError(
            f"bias epsilon must lie in (-1, 1], got {epsilon} "
            "(at -1 the origin is never hit)"
        )
    return snap_epsilon(epsilon)


class RegimeKind(Enum):
    TRANSIENT = "transient"
    NULL_RECURRENT = "null-recurrent"
    POSITIVE_RECURRENT = "positive-recurrent"


@dataclass(frozen=True)
class WalkSpec:
    """Model parameters: bias, start site, reset site, target fixed at 0."""

    epsilon: float
    x0: int
    xr: int
    target: int = 0

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _check_epsilon(self.epsilon))
        if self.target != 0:
            raise DomainError("only the origin target is supported")
        if self.x0 == 0:
            raise DomainError("x0 must be nonzero (start on the target)")
        if self.xr == 0:
            raise DomainError(
                "xr must be nonzero (resetting onto the target is undefined)"
            )


@dataclass(frozen=True)
class RegimeClass:
    """Recurrence classification with the associated exponents.

    rho is defined only for recurrent walks, delta only for the
    positive-recurrent range, return_probability only for transient
    walks and mean_return_time only where it is finite.
    """

    kind: RegimeKind
    rho: float | None
    delta: float | None
    return_probability: float | None
    mean_return_time: float | None


@dataclass(frozen=True)
class GenFunPoint:
    """Value and z-derivative of a generating function at one argument."""

    value: float
    derivative: float


@dataclass(frozen=True)
class PmfPrefix:
    """First n_max first-hitting probabilities, probs[n-1] = P(tau = n)."""

    probs: np.ndarray
    n_max: int

    def __post_init__(self):
        if len(self.probs) != self.n_max:
            raise DomainError("probs length must equal n_max")

    def prob(self, n: int) -> float:
        """P(tau = n) for 1 <= n <= n_max."""
        if not 1 <= n <= self.n_max:
            raise DomainError(f"step {n} outside stored prefix 1..{self.n_max}")
        return float(self.probs[n - 1])

    def total_mass(self) -> float:
        return float(np.sum(self.probs))

    def gf(self, z: float) -> float:
        """Partial generating sum over the stored prefix."""
        n = np.arange(1, self.n_max + 1)
        return float(np.sum(self.probs * z**n))

    def mean(self) -> float:
        """Mean over the stored prefix (a lower bound for the true mean)."""
        n = np.arange(1, self.n_max + 1)
        return float(np.sum(n * self.probs))


def transition_probability(epsilon: float, y: int) -> tuple[float, float]:
    """Jump probabilities from site y as (toward y-1, toward y+1)."""
    epsilon = _check_epsilon(epsilon)
    if y == 0:
        return 0.5, 0.5
    p_minus = 0.5 * (1.0 + epsilon / y)
    p_plus = 0.5 * (1.0 - epsilon / y)
    if not (0.0 <= p_minus <= 1.0 and 0.0 <= p_plus <= 1.0):
        raise DomainError(f"invalid transition probabilities at y={y}")
    return p_minus, p_plus


def classify_regime(epsilon: float) -> RegimeClass:
    """Transient / null-recurrent / positive-recurrent split with rho,
    delta and the regime-specific constants."""
    epsilon = _check_epsilon(epsilon)
    if epsilon < -0.5:
        return RegimeClass(
            kind=RegimeKind.TRANSIENT,
            rho=None,
            delta=None,
            return_probability=-1.0 - 1.0 / epsilon,
            mean_return_time=None,
        )
    if epsilon <= 0.5:
        return RegimeClass(
            kind=RegimeKind.NULL_RECURRENT,
            rho=0.5 + epsilon,
            delta=None,
            return_probability=None,
            mean_return_time=None,
        )
    return RegimeClass(
        kind=RegimeKind.POSITIVE_RECURRENT,
        rho=1.0,
        delta=epsilon - 0.5,
        return_probability=None,
        mean_return_time=2.0 * epsilon / (2.0 * epsilon - 1.0),
    )


# --------------------------------------------------------------------------
# generating functions
# --------------------------------------------------------------------------

def _hitting_families(epsilon: float, k: int):
    """2F1 parameter triples (argument z^2) of the hitting-gf numerator
    and denominator."""
    num = ((1.0 + epsilon + k) / 2.0, (2.0 + epsilon + k) / 2.0, 1.0 + k)
    den = ((1.0 + epsilon) / 2.0, 1.0 + epsilon / 2.0, 1.0)
    return num, den


def _hitting_prefactor(epsilon: float, k: int) -> float:
    """Gamma(1+eps+k) / (k! 2^k Gamma(1+eps)), via log-gamma."""
    return math.exp(
        hg.log_gamma(1.0 + epsilon + k)
        - hg.log_gamma(1.0 + epsilon)
        - math.lgamma(k + 1.0)
        - k * math.log(2.0)
    )


def return_gf(epsilon: float, z: float,
              policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Generating function of the first-return probability to the origin.

    Near z = 1 the numerator family degenerates at eps = -1/2 into an
    integer case outside the supported set; evaluate at z <= sqrt(switch)
    there.
    """
    epsilon = _check_epsilon(epsilon)
    if not 0.0 <= z < 1.0:
        raise DomainError(f"z={z} outside [0, 1)")
    if z == 0.0:
        return 0.0
    t = z * z
    num = hg.gauss_2f1(epsilon / 2.0, 0.5 + epsilon / 2.0, 1.0, t, policy)
    den = hg.gauss_2f1(0.5 + epsilon / 2.0, 1.0 + epsilon / 2.0, 1.0, t, policy)
    return 1.0 - num / den


def hitting_gf(epsilon: float, x0: int, z: float,
               policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Generating function of the first-hitting probability of the
    origin from x0 != 0; symmetric in the sign of x0."""
    epsilon = _check_epsilon(epsilon)
    if x0 == 0:
        raise DomainError("x0 must be nonzero")
    if not 0.0 <= z < 1.0:
        raise DomainError(f"z={z} outside [0, 1)")
    if z == 0.0:
        return 0.0
    k = abs(x0)
    t = z * z
    (an, bn, cn), (ad, bd, cd) = _hitting_families(epsilon, k)
    num = hg.gauss_2f1(an, bn, cn, t, policy)
    den = hg.gauss_2f1(ad, bd, cd, t, policy)
    return _hitting_prefactor(epsilon, k) * z**k * num / den


def hitting_gf_point(epsilon: float, x0: int, z: float,
                     policy: EvalPolicy = DEFAULT_POLICY) -> GenFunPoint:
    """Value and z-derivative of the hitting generating function."""
    epsilon = _check_epsilon(epsilon)
    if x0 == 0:
        raise DomainError("x0 must be nonzero")
    if not 0.0 <= z < 1.0:
        raise DomainError(f"z={z} outside [0, 1)")
    k = abs(x0)
    pref = _hitting_prefactor(epsilon, k)
    if z == 0.0:
        return GenFunPoint(0.0, pref if k == 1 else 0.0)
    t = z * z
    (an, bn, cn), (ad, bd, cd) = _hitting_families(epsilon, k)
    num = hg.gauss_2f1(an, bn, cn, t, policy)
    den = hg.gauss_2f1(ad, bd, cd, t, policy)
    dnum = hg.gauss_2f1_derivative(HypergeomParams(an, bn, cn, t), policy)
    dden = hg.gauss_2f1_derivative(HypergeomParams(ad, bd, cd, t), policy)
    ratio = num / den
    value = pref * z**k * ratio
    deriv = pref * z ** (k - 1) * (
        k * ratio + 2.0 * t * (dnum * den - num * dden) / (den * den)
    )
    return GenFunPoint(value, deriv)


def occupation_gf(epsilon: float, x0: int, z: float,
                  policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Generating function of the occupation probability of the origin.

    For x0 = 0 this is the classical occupation function whose
    reciprocal gives the return generating function.
    """
    epsilon = _check_epsilon(epsilon)
    if not 0.0 <= z < 1.0:
        raise DomainError(f"z={z} outside [0, 1)")
    k = abs(x0)
    if z == 0.0:
        return 1.0 if k == 0 else 0.0
    t = z * z
    den = hg.gauss_2f1(epsilon / 2.0, 0.5 + epsilon / 2.0, 1.0, t, policy)
    if k == 0:
        num = hg.gauss_2f1(
            (1.0 + epsilon) / 2.0, 1.0 + epsilon / 2.0, 1.0, t, policy
        )
        return num / den
    (an, bn, cn), _ = _hitting_families(epsilon, k)
    num = hg.gauss_2f1(an, bn, cn, t, policy)
    return _hitting_prefactor(epsilon, k) * z**k * num / den


def hit_probability(epsilon: float, x0: int) -> float:
    """Total probability of ever hitting the origin from x0; below 1
    only in the transient range."""
    epsilon = _check_epsilon(epsilon)
    if x0 == 0:
        raise DomainError("x0 must be nonzero")
    if epsilon >= -0.5:
        return 1.0
    k = abs(x0)
    return hg.pochhammer(1.0 + epsilon, k) / hg.pochhammer(-epsilon, k)


def free_mean_fht(epsilon: float, x0: int) -> float:
    """Reset-free mean first-hitting time; infinite outside the
    positive-recurrent range."""
    epsilon = _check_epsilon(epsilon)
    if x0 == 0:
        raise DomainError("x0 must be nonzero")
    if epsilon > 0.5:
        return x0 * x0 / (2.0 * epsilon - 1.0)
    return math.inf


# --------------------------------------------------------------------------
# exact coefficient and propagation oracles
# --------------------------------------------------------------------------

def hitting_gf_coefficients(epsilon: float, x0: int, n_max: int) -> np.ndarray:
    """Power-series coefficients f[0..n_max] of the hitting generating
    function, assembled by dividing the numerator series by the
    denominator series (exact rational-coefficient recurrences evaluated
    in floating point)."""
    epsilon = _check_epsilon(epsilon)
    if x0 == 0:
        raise DomainError("x0 must be nonzero")
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    k = abs(x0)
    out = np.zeros(n_max + 1)
    if n_max < k:
        return out
    m_max = (n_max - k) // 2
    (an, bn, cn), (ad, bd, cd) = _hitting_families(epsilon, k)
    num = np.empty(m_max + 1)
    den = np.empty(m_max + 1)
    tn = td = 1.0
    for m in range(m_max + 1):
        num[m] = tn
        den[m] = td
        tn *= (an + m) * (bn + m) / ((cn + m) * (m + 1.0))
        td *= (ad + m) * (bd + m) / ((cd + m) * (m + 1.0))
    quot = np.empty(m_max + 1)
    for m in range(m_max + 1):
        quot[m] = num[m] - np.dot(quot[:m], den[m:0:-1])
    pref = _hitting_prefactor(epsilon, k)
    out[k::2] = pref * quot
    return out


def hitting_pmf_prefix(epsilon: float, x0: int, n_max: int) -> PmfPrefix:
    """Exact first-hitting pmf up to step n_max by propagating the site
    occupation vector with an absorbing origin.

    The lattice is truncated at |x0| + n_max, which is exact: the walk
    cannot return from beyond that radius within n_max steps.
    """
    epsilon = _check_epsilon(epsilon)
    if x0 == 0:
        raise DomainError("x0 must be nonzero")
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    if n_max > MAX_PMF_STEPS:
        raise ResourceLimitError(
            f"n_max={n_max} exceeds the propagation cap {MAX_PMF_STEPS}"
        )
    k = abs(x0)
    size = k + n_max + 1
    sites = np.arange(size, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        p_down = 0.5 * (1.0 + epsilon / sites)
        p_up = 0.5 * (1.0 - epsilon / sites)
    p_down[0] = p_up[0] = 0.0  # origin is absorbing; never left
    occ = np.zeros(size)
    occ[k] = 1.0
    probs = np.empty(n_max)
    for n in range(n_max):
        new = np.zeros(size)
        new[:-1] = occ[1:] * p_down[1:]
        new[1:] += occ[:-1] * p_up[:-1]
        probs[n] = new[0]
        new[0] = 0.0
        occ = new
    return PmfPrefix(probs=probs, n_max=n_max)


class GillisHittingGf:
    """Evaluator of (source, z) -> GenFunPoint for a fixed bias; the
    free-process contract consumed by the resetting layer."""

    def __init__(self, epsilon: float, policy: EvalPolicy = DEFAULT_POLICY):
        self.epsilon = _check_epsilon(epsilon)
        self.policy = policy

    def __call__(self, source: int, z: float) -> GenFunPoint:
        return hitting_gf_point(self.epsilon, source, z, self.policy)
