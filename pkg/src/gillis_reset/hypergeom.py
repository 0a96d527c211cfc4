"""Gauss hypergeometric evaluation and supporting special functions.

Everything here is real-valued and restricted to the parameter families
produced by the walk generating functions (plus the families used in
tests): argument t in [0, 1), c not a nonpositive integer.  Evaluation
close to t = 1 goes through a connection formula whose two sub-series
have argument 1 - t, with dedicated logarithmic expansions when c - a - b
sits on an integer and a compensated extended-precision path when it is
merely close to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateParameterError,
    DomainError,
    NonConvergenceError,
    PoleError,
)

# Band around an integer value of c - a - b where the generic connection
# formula is evaluated in 80-bit arithmetic to absorb the near-pole
# cancellation of the two Gamma coefficients.
NEAR_DEGENERATE_BAND = 1e-4

# ln Gamma via Stirling after shifting the argument above this point.
_STIRLING_SHIFT = 16.0
# B_{2n} / (2n (2n-1)) for the Stirling series of ln Gamma.
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
# B_{2n} / (2n) for the asymptotic series of the digamma function.
_DIGAMMA_SHIFT = 12.0
_DIGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

_LN_SQRT_2PI = 0.9189385332046727417803297364056176398

_LD = np.longdouble
_PI_LD = _LD("3.14159265358979323846264338327950288419717")
_LN_SQRT_2PI_LD = _LD("0.91893853320467274178032973640561763986140")
_STIRLING_COEFFS_LD = tuple(
    _LD(p) / _LD(q)
    for p, q in (
        (1, 12), (-1, 360), (1, 1260), (-1, 1680), (1, 1188),
        (-691, 360360), (1, 156), (-3617, 122400), (43867, 244188),
        (-174611, 125400),
    )
)


@dataclass(frozen=True)
class HypergeomParams:
    """Series parameters and real argument of a 2F1 evaluation."""

    a: float
    b: float
    c: float
    t: float

    def __post_init__(self):
        if self.c <= 0 and self.c == round(self.c):
            raise DomainError(f"c={self.c} is zero or a negative integer")
        if not 0.0 <= self.t < 1.0:
            raise DomainError(f"t={self.t} outside [0, 1)")


@dataclass(frozen=True)
class EvalPolicy:
    """Truncation and routing controls for the 2F1 evaluation paths."""

    tol: float = 1e-13
    max_terms: int = 10**6
    near_one_switch: float = 0.5
    log_case_band: float = 1e-9

    def __post_init__(self):
        if self.tol <= 0:
            raise DomainError("tol must be positive")
        if not 0.0 < self.near_one_switch < 1.0:
            raise DomainError("near_one_switch must lie in (0, 1)")
        if self.log_case_band < 0:
            raise DomainError("log_case_band must be nonnegative")


DEFAULT_POLICY = EvalPolicy()


# --------------------------------------------------------------------------
# gamma-family primitives
# --------------------------------------------------------------------------

def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0 (Stirling series after an
    upward recurrence shift)."""
    if x <= 0.0 or math.isnan(x):
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    shift = 0.0
    while x < _STIRLING_SHIFT:
        shift += math.log(x)
        x += 1.0
    u = 1.0 / (x * x)
    corr = 0.0
    for coeff in reversed(_STIRLING_COEFFS):
        corr = (corr + coeff) * u
    corr /= u  # leading 1/x factor applied below
    return (x - 0.5) * math.log(x) - x + _LN_SQRT_2PI + corr / x - shift


def _sinpi(x: float) -> float:
    """sin(pi x) computed from the argument reduced to the nearest
    integer, accurate near integer x."""
    n = round(x)
    r = x - n
    s = math.sin(math.pi * r)
    return -s if n % 2 else s


def gamma(x: float) -> float:
    """Gamma(x) for real non-pole x, via reflection for x < 0."""
    if x > 0.0:
        lg = log_gamma(x)
        return math.exp(lg) if lg < 709.0 else math.inf
    if x == round(x):
        raise PoleError(f"gamma pole at x={x}")
    return math.pi / (_sinpi(x) * math.exp(log_gamma(1.0 - x)))


def rgamma(x: float) -> float:
    """1/Gamma(x); zero at the poles instead of raising."""
    if x <= 0.0 and x == round(x):
        return 0.0
    return 1.0 / gamma(x)


def digamma(x: float) -> float:
    """Psi(x) = d/dx log Gamma(x) for x > 0."""
    if x <= 0.0 or math.isnan(x):
        raise DomainError(f"digamma requires x > 0, got {x}")
    acc = 0.0
    while x < _DIGAMMA_SHIFT:
        acc -= 1.0 / x
        x += 1.0
    u = 1.0 / (x * x)
    corr = 0.0
    for coeff in reversed(_DIGAMMA_COEFFS):
        corr = (corr + coeff) * u
    return acc + math.log(x) - 0.5 / x - corr


def pochhammer(x: float, n: int) -> float:
    """Rising factorial (x)_n = Gamma(x+n)/Gamma(x), n >= 0.

    Small n goes through the direct product (exact for the lattice
    walks, including zeros at nonpositive-integer factors); large n with
    positive x through log-gamma differences.
    """
    if n < 0 or n != int(n):
        raise DomainError(f"pochhammer order must be a nonnegative integer, got {n}")
    n = int(n)
    if n == 0:
        return 1.0
    if n <= 32 or x <= 0.0:
        out = 1.0
        for k in range(n):
            out *= x + k
        return out
    lg = log_gamma(x + n) - log_gamma(x)
    return math.exp(lg) if lg < 709.0 else math.inf


# --------------------------------------------------------------------------
# longdouble twins used by the compensated near-degenerate path
# --------------------------------------------------------------------------

def _lgamma_ld(x):
    shift = _LD(0.0)
    while x < _LD(16.0):
        shift += np.log(x)
        x += _LD(1.0)
    u = _LD(1.0) / (x * x)
    corr = _LD(0.0)
    for coeff in reversed(_STIRLING_COEFFS_LD):
        corr = (corr + coeff) * u
    corr /= u
    return (x - _LD(0.5)) * np.log(x) - x + _LN_SQRT_2PI_LD + corr / x - shift


def _sinpi_ld(x):
    n = np.rint(x)
    s = np.sin(_PI_LD * (x - n))
    return -s if int(n) % 2 else s


def _gamma_ld(x):
    if x > 0:
        return np.exp(_lgamma_ld(x))
    if float(x) == round(float(x)):
        raise PoleError(f"gamma pole at x={float(x)}")
    return _PI_LD / (_sinpi_ld(x) * np.exp(_lgamma_ld(_LD(1.0) - x)))


# --------------------------------------------------------------------------
# series and connection-formula evaluation
# --------------------------------------------------------------------------

def _series_sum(a, b, c, t, tol, max_terms, one=1.0):
    """Partial sum of the defining series; generic over float/longdouble
    scalars selected by `one`.  Stops once the running term stays below
    tol * |sum| three times in a row."""
    term = one
    total = one
    small = 0
    for n in range(max_terms):
        term = term * (a + n) * (b + n) / ((c + n) * (n + 1)) * t
        total += term
        if abs(term) <= tol * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NonConvergenceError(
        f"2F1 series did not converge in {max_terms} terms "
        f"(a={a}, b={b}, c={c}, t={t})"
    )


def gauss_2f1_series(p: HypergeomParams, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Direct series evaluation, valid for t in [0, near_one_switch]."""
    if p.t > policy.near_one_switch:
        raise DomainError(
            f"series path called with t={p.t} > near_one_switch={policy.near_one_switch}"
        )
    if p.t == 0.0:
        return 1.0
    return float(_series_sum(p.a, p.b, p.c, p.t, policy.tol, policy.max_terms))


# When the two connection terms cancel by more than this factor the
# double-precision combination is recomputed in 80-bit arithmetic.
_CANCELLATION_LIMIT = 30.0


def _near_one_double(a, b, c, t, policy):
    s = c - a - b
    w = 1.0 - t
    coef1 = gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b)
    coef2 = gamma(c) * gamma(-s) * rgamma(a) * rgamma(b)
    f1 = _series_sum(a, b, 1.0 - s, w, policy.tol, policy.max_terms)
    f2 = _series_sum(c - a, c - b, 1.0 + s, w, policy.tol, policy.max_terms)
    term1 = coef1 * f1
    term2 = math.pow(w, s) * coef2 * f2
    total = term1 + term2
    if abs(term1) + abs(term2) > _CANCELLATION_LIMIT * abs(total):
        return _near_one_longdouble(a, b, c, t, policy)
    return total


def _near_one_longdouble(a, b, c, t, policy):
    a = _LD(a)
    b = _LD(b)
    c = _LD(c)
    w = _LD(1.0) - _LD(t)
    s = c - a - b
    one = _LD(1.0)
    tol = _LD(1e-18)
    coef1 = _gamma_ld(c) * _gamma_ld(s) / (_gamma_ld(c - a) * _gamma_ld(c - b))
    coef2 = _gamma_ld(c) * _gamma_ld(-s) / (_gamma_ld(a) * _gamma_ld(b))
    f1 = _series_sum(a, b, one - s, w, tol, policy.max_terms, one=one)
    f2 = _series_sum(c - a, c - b, one + s, w, tol, policy.max_terms, one=one)
    return float(coef1 * f1 + np.exp(s * np.log(w)) * coef2 * f2)


def gauss_2f1_near_one(p: HypergeomParams, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Evaluation for t above the switch point via the linear
    transformation to argument 1 - t.

    Raises DegenerateParameterError when c - a - b is within
    policy.log_case_band of an integer (the logarithmic expansions must
    be used there); switches to 80-bit accumulation when it is within
    NEAR_DEGENERATE_BAND of an integer but outside the snap band.
    """
    if p.t <= policy.near_one_switch:
        raise DomainError(
            f"near-one path called with t={p.t} <= near_one_switch={policy.near_one_switch}"
        )
    s = p.c - p.a - p.b
    dist = abs(s - round(s))
    if dist <= policy.log_case_band:
        raise DegenerateParameterError(
            f"c-a-b={s} within {policy.log_case_band} of an integer; "
            "use the logarithmic-case evaluations"
        )
    if dist < NEAR_DEGENERATE_BAND:
        return _near_one_longdouble(p.a, p.b, p.c, p.t, policy)
    return float(_near_one_double(p.a, p.b, p.c, p.t, policy))


def gauss_2f1_log_equal(a: float, b: float, t: float,
                        policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """2F1(a, b; a+b; t) through the log(1/(1-t)) expansion, t in (0,1)."""
    if not 0.0 < t < 1.0:
        raise DomainError(f"t={t} outside (0, 1)")
    w = 1.0 - t
    lnw = math.log(w)
    amp = gamma(a + b) * rgamma(a) * rgamma(b)
    k = 1.0
    pn = 2.0 * digamma(1.0) - digamma(a) - digamma(b)
    wn = 1.0
    total = 0.0
    small = 0
    for n in range(policy.max_terms):
        term = k * wn * (pn - lnw)
        total += term
        if abs(term) <= policy.tol * abs(total):
            small += 1
            if small >= 3:
                return amp * total
        else:
            small = 0
        k *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0))
        pn += 2.0 / (n + 1.0) - 1.0 / (a + n) - 1.0 / (b + n)
        wn *= w
    raise NonConvergenceError(f"log-case series (c=a+b) stalled at t={t}")


def _log_equal_deriv(a: float, b: float, t: float,
                     policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """t-derivative of the c = a+b expansion, term by term."""
    w = 1.0 - t
    lnw = math.log(w)
    amp = gamma(a + b) * rgamma(a) * rgamma(b)
    k = 1.0
    pn = 2.0 * digamma(1.0) - digamma(a) - digamma(b)
    wn = 1.0 / w
    total = 0.0
    small = 0
    for n in range(policy.max_terms):
        term = k * wn * (1.0 - n * (pn - lnw))
        total += term
        if abs(term) <= policy.tol * abs(total):
            small += 1
            if small >= 3:
                return amp * total
        else:
            small = 0
        k *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0))
        pn += 2.0 / (n + 1.0) - 1.0 / (a + n) - 1.0 / (b + n)
        wn *= w
    raise NonConvergenceError(f"log-case derivative series (c=a+b) stalled at t={t}")


def gauss_2f1_log_minus_one(a: float, b: float, t: float,
                            policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """2F1(a, b; a+b-1; t) through the (1-t)^{-1}-prefactored expansion,
    t in (0,1).

    Falls back to the direct series when the (a-1)(b-1) prefactor
    vanishes, in which case the expansion carries no information beyond
    its first term.
    """
    if not 0.0 < t < 1.0:
        raise DomainError(f"t={t} outside (0, 1)")
    kappa = (a - 1.0) * (b - 1.0)
    if kappa == 0.0:
        return float(_series_sum(a, b, a + b - 1.0, t, policy.tol, policy.max_terms))
    w = 1.0 - t
    lnw = math.log(w)
    amp = gamma(a + b - 1.0) * rgamma(a) * rgamma(b)
    rho = 1.0
    sn = digamma(a) + digamma(b) - digamma(1.0) - digamma(2.0)
    wn = 1.0
    total = 1.0 / w
    small = 0
    for n in range(policy.max_terms):
        term = kappa * rho * wn * (lnw + sn)
        total += term
        if abs(term) <= policy.tol * abs(total):
            small += 1
            if small >= 3:
                return amp * total
        else:
            small = 0
        rho *= (a + n) * (b + n) / ((n + 1.0) * (n + 2.0))
        sn += 1.0 / (a + n) + 1.0 / (b + n) - 1.0 / (n + 1.0) - 1.0 / (n + 2.0)
        wn *= w
    raise NonConvergenceError(f"log-case series (c=a+b-1) stalled at t={t}")


def _log_minus_one_deriv(a: float, b: float, t: float,
                         policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """t-derivative of the c = a+b-1 expansion, term by term."""
    kappa = (a - 1.0) * (b - 1.0)
    if kappa == 0.0:
        return (a * b / (a + b - 1.0)) * float(
            _series_sum(a + 1.0, b + 1.0, a + b, t, policy.tol, policy.max_terms)
        )
    w = 1.0 - t
    lnw = math.log(w)
    amp = gamma(a + b - 1.0) * rgamma(a) * rgamma(b)
    rho = 1.0
    sn = digamma(a) + digamma(b) - digamma(1.0) - digamma(2.0)
    wn = 1.0 / w
    total = 1.0 / (w * w)
    small = 0
    for n in range(policy.max_terms):
        term = -kappa * rho * wn * (n * (lnw + sn) + 1.0)
        total += term
        if abs(term) <= policy.tol * abs(total):
            small += 1
            if small >= 3:
                return amp * total
        else:
            small = 0
        rho *= (a + n) * (b + n) / ((n + 1.0) * (n + 2.0))
        sn += 1.0 / (a + n) + 1.0 / (b + n) - 1.0 / (n + 1.0) - 1.0 / (n + 2.0)
        wn *= w
    raise NonConvergenceError(f"log-case derivative series (c=a+b-1) stalled at t={t}")


# --------------------------------------------------------------------------
# routed entry points
# --------------------------------------------------------------------------

def gauss_2f1(a: float, b: float, c: float, t: float,
              policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """2F1(a, b; c; t) on [0, 1), routed between the series, the
    connection formula and the logarithmic degenerate cases."""
    p = HypergeomParams(a, b, c, t)
    if p.t <= policy.near_one_switch:
        return gauss_2f1_series(p, policy)
    s = c - a - b
    m = round(s)
    if abs(s - m) <= policy.log_case_band:
        if m == 0:
            return gauss_2f1_log_equal(a, b, t, policy)
        if m == -1:
            return gauss_2f1_log_minus_one(a, b, t, policy)
        raise DegenerateParameterError(
            f"c-a-b = {s} is an unsupported integer case near t=1"
        )
    return gauss_2f1_near_one(p, policy)


def gauss_2f1_derivative(p: HypergeomParams,
                         policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """d/dt 2F1(a, b; c; t) through the contiguous shift
    (a, b, c) -> (a+1, b+1, c+1), with dedicated term-derivatives for
    the logarithmic cases."""
    a, b, c, t = p.a, p.b, p.c, p.t
    scale = a * b / c
    if t <= policy.near_one_switch:
        if t == 0.0:
            return scale
        return scale * float(
            _series_sum(a + 1.0, b + 1.0, c + 1.0, t, policy.tol, policy.max_terms)
        )
    s = c - a - b
    m = round(s)
    if abs(s - m) <= policy.log_case_band:
        if m == 0:
            return _log_equal_deriv(a, b, t, policy)
        if m == -1:
            return _log_minus_one_deriv(a, b, t, policy)
        raise DegenerateParameterError(
            f"c-a-b = {s} is an unsupported integer case near t=1"
        )
    return scale * gauss_2f1_near_one(
        HypergeomParams(a + 1.0, b + 1.0, c + 1.0, t), policy
    )
