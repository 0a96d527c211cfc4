"""End-to-end cross-check suites behind the `validate` CLI command.

Each suite returns a list of (name, passed, detail) tuples so the CLI
can print one line per check and exit nonzero on any failure.  The
checks pit independent computation routes against each other: closed
forms against the hypergeometric path, lattice propagation against
series coefficients, renewal convolution against generating-function
division, exact curves against their asymptotes, and simulation against
analytics.
"""

from __future__ import annotations

import math

import numpy as np

from . import asymptotics as asy
from . import gillis as gw
from . import montecarlo as mc
from . import resetting as rs

SUITES = ("closed-forms", "pmf-oracle", "renewal", "asymptotes", "montecarlo")

Check = tuple[str, bool, str]


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def closed_forms() -> list[Check]:
    checks: list[Check] = []
    worst = 0.0
    for z in (0.1, 0.3, 0.5, 0.7, 0.9, 0.99):
        s = math.sqrt(1.0 - z * z)
        for k in range(1, 9):
            worst = max(worst, _rel(gw.hitting_gf(1.0, k, z),
                                    (z / (1.0 + s)) ** k * (1.0 + k * s)))
            worst = max(worst, _rel(gw.hitting_gf(0.0, k, z),
                                    ((1.0 - s) / z) ** k))
    checks.append(("hitting-gf-closed-forms", worst < 1e-10,
                   f"max rel err {worst:.3e} (tol 1e-10)"))
    worst = max(
        _rel(gw.return_gf(0.0, z), 1.0 - math.sqrt(1.0 - z * z))
        for z in (0.2, 0.5, 0.8, 0.95)
    )
    checks.append(("return-gf-simple-walk", worst < 1e-12,
                   f"max rel err {worst:.3e}"))
    free = gw.GillisHittingGf(1.0)
    spec = gw.WalkSpec(1.0, 1, 1)
    worst = 0.0
    for r in (0.25, 0.5, 0.75):
        summ = rs.moment_summary(free, spec, rs.ResetParams(r))
        worst = max(worst, _rel(summ.mean, 1.0 / (1.0 - r)),
                    _rel(summ.std_dev, math.sqrt(r) / (1.0 - r)))
    checks.append(("geometric-certificates", worst < 1e-12,
                   f"max rel err {worst:.3e}"))
    return checks


def pmf_oracle() -> list[Check]:
    checks: list[Check] = []
    worst = 0.0
    for eps in (-0.85, -0.25, 0.5, 0.85):
        for x0 in (1, 3, 5):
            coeffs = gw.hitting_gf_coefficients(eps, x0, 30)
            prefix = gw.hitting_pmf_prefix(eps, x0, 30)
            worst = max(worst, float(np.max(np.abs(coeffs[1:] - prefix.probs))))
    checks.append(("series-vs-propagation", worst < 1e-8,
                   f"max abs diff {worst:.3e} (tol 1e-8)"))
    worst = 0.0
    for eps in (-0.85, 0.25, 1.0):
        for x0 in (1, 3, 5):
            lead = gw.hitting_pmf_prefix(eps, x0, abs(x0)).prob(abs(x0))
            worst = max(worst, _rel(lead, 1.0 / asy.coeff_K(eps, x0)))
    checks.append(("leading-coefficient", worst < 1e-12,
                   f"max rel err {worst:.3e}"))
    prefix = gw.hitting_pmf_prefix(0.25, 3, 20)
    parity_ok = all(
        prefix.prob(n) == 0.0
        for n in range(1, 21)
        if n < 3 or (n - 3) % 2 == 1
    )
    checks.append(("parity-zeros", parity_ok, "off-parity entries all zero"))
    return checks


def renewal() -> list[Check]:
    checks: list[Check] = []
    worst = 0.0
    for eps, r, x0, xr in ((0.25, 0.3, 3, 5), (-0.85, 0.5, 2, 4)):
        spec = gw.WalkSpec(eps, x0, xr)
        conv = rs.reset_pmf_prefix(
            gw.hitting_pmf_prefix(eps, x0, 40), spec, rs.ResetParams(r), 40,
            gw.hitting_pmf_prefix(eps, xr, 40),
        )
        coeffs = rs.reset_gf_coefficients(
            gw.hitting_gf_coefficients(eps, x0, 40),
            gw.hitting_gf_coefficients(eps, xr, 40), r, 40,
        )
        worst = max(worst, float(np.max(np.abs(conv.probs - coeffs[1:]))))
    checks.append(("convolution-vs-series", worst < 1e-10,
                   f"max abs diff {worst:.3e} (tol 1e-10)"))
    worst = 0.0
    for eps in (-0.85, 0.0, 0.85):
        free = gw.GillisHittingGf(eps)
        spec = gw.WalkSpec(eps, 3, 3)
        for z in (0.3, 0.7, 0.95):
            general = rs.reset_gf(free, spec, rs.ResetParams(0.4), z)
            zeta = 0.6 * z
            f0 = free(3, zeta).value
            single = (1.0 - zeta) * f0 / (1.0 - z + 0.4 * z * f0)
            worst = max(worst, abs(general - single))
    checks.append(("same-site-reduction", worst < 1e-14,
                   f"max abs diff {worst:.3e}"))
    # Normalization: the dressed walk is recurrent in every regime, so
    # the pmf mass reaches 0.99 within a horizon of a few means (the
    # dressed tail is asymptotically geometric).
    # Cells are sized so ten means fit the convolution horizon (large r
    # with a distant reset site pushes the mean like (1-r)^-|xr|).
    worst_mass = 1.0
    cells = (
        (-0.85, 3, 1, 0.1), (-0.85, 3, 1, 0.3), (-0.85, 3, 1, 0.6),
        (0.0, 3, 5, 0.1), (0.0, 3, 5, 0.3), (0.0, 3, 2, 0.6),
        (0.85, 3, 5, 0.1), (0.85, 3, 5, 0.3), (0.85, 3, 2, 0.6),
    )
    for eps, x0, xr, r in cells:
        spec = gw.WalkSpec(eps, x0, xr)
        free = gw.GillisHittingGf(eps)
        mean = rs.mean_fht(free, spec, rs.ResetParams(r))
        horizon = min(int(10.0 * mean) + 50, 6000)
        dressed = rs.reset_pmf_prefix(
            gw.hitting_pmf_prefix(eps, x0, horizon), spec,
            rs.ResetParams(r), horizon,
            gw.hitting_pmf_prefix(eps, xr, horizon),
        )
        worst_mass = min(worst_mass, dressed.total_mass())
    checks.append(("normalization", worst_mass >= 0.99,
                   f"min mass at ten means {worst_mass:.6f} (needs >= 0.99)"))
    return checks


def asymptotes() -> list[Check]:
    checks: list[Check] = []
    worst = 0.0
    worst_cv = 0.0
    for eps in (-0.85, 0.25, 1.0):
        free = gw.GillisHittingGf(eps)
        for xr in (1, 3, 5):
            spec = gw.WalkSpec(eps, 3, xr)
            summ = rs.moment_summary(free, spec, rs.ResetParams(0.999))
            k_val = asy.coeff_K(eps, xr)
            worst = max(worst, abs(summ.mean * 0.001 ** abs(xr) / k_val - 1.0))
            worst_cv = max(worst_cv, abs(summ.std_dev / summ.mean - 1.0))
    checks.append(("large-r-coefficient", worst < 0.01,
                   f"max |ratio-1| {worst:.4f} (tol 1%)"))
    checks.append(("large-r-exponential-limit", worst_cv < 0.02,
                   f"max |cv-1| {worst_cv:.4f} (tol 2%)"))
    trend_ok = True
    detail = []
    for eps in (-0.85, -0.5, -0.25, 0.0, 0.25, 0.5):
        spec = gw.WalkSpec(eps, 3, 5)
        free = gw.GillisHittingGf(eps)
        law = asy.small_r_mean_law(spec)
        gaps = [
            abs(rs.mean_fht(free, spec, rs.ResetParams(r)) / law.evaluate(r) - 1.0)
            for r in (1e-4, 1e-5, 1e-6)
        ]
        monotone = gaps[0] > gaps[1] > gaps[2]
        trend_ok &= monotone
        detail.append(f"eps={eps}: {gaps[0]:.3f}>{gaps[1]:.3f}>{gaps[2]:.3f}")
    checks.append(("small-r-ratio-trend", trend_ok, "; ".join(detail)))
    worst = 0.0
    for eps in (-0.85, -0.7, -0.6):
        worst = max(worst, _rel(
            asy.coeff_C(eps, 3, 5),
            (1.0 - gw.hit_probability(eps, 3)) / gw.hit_probability(eps, 5),
        ))
    for eps in (0.6, 0.85, 1.0):
        for k in (2, 3, 5):
            worst = max(worst, _rel(asy.coeff_calB(eps, k),
                                    -(eps - 0.5) * asy.coeff_B(eps, k)))
    checks.append(("coefficient-identities", worst < 1e-10,
                   f"max rel err {worst:.3e}"))
    return checks


def montecarlo(seed: int = 20260809) -> list[Check]:
    checks: list[Check] = []
    spec = gw.WalkSpec(1.0, 1, 1)
    est = mc.estimate(spec, 0.5, mc.McConfig(20000, seed))
    z = (est.mean - 2.0) / est.se_mean
    checks.append(("geometric-mean", abs(z) < 4.0, f"z = {z:+.2f}"))
    spec = gw.WalkSpec(0.25, 3, 5)
    free = gw.GillisHittingGf(0.25)
    p = rs.ResetParams(0.3)
    est = mc.estimate(spec, 0.3, mc.McConfig(20000, seed + 1))
    summ = rs.moment_summary(free, spec, p)
    z_mean = (est.mean - summ.mean) / est.se_mean
    z_std = (est.std_dev - summ.std_dev) / est.se_std
    checks.append(("dressed-mean", abs(z_mean) < 4.0, f"z = {z_mean:+.2f}"))
    checks.append(("dressed-std", abs(z_std) < 4.0, f"z = {z_std:+.2f}"))
    emp = mc.empirical_pmf(spec, 0.3, mc.McConfig(20000, seed + 2), 40)
    dressed = rs.reset_pmf_prefix(
        gw.hitting_pmf_prefix(0.25, 3, 40), spec, p, 40,
        gw.hitting_pmf_prefix(0.25, 5, 40),
    )
    worst_z = 0.0
    for n in range(1, 41):
        expected = dressed.prob(n) * emp.n
        if expected < 50.0:
            continue
        se = math.sqrt(expected * (1.0 - dressed.prob(n)))
        worst_z = max(worst_z, abs(emp.counts[n - 1] - expected) / se)
    checks.append(("empirical-pmf-bins", worst_z < 4.0,
                   f"max |z| over bins {worst_z:.2f}"))
    return checks


def run_suite(name: str, seed: int = 20260809) -> list[Check]:
    if name == "closed-forms":
        return closed_forms()
    if name == "pmf-oracle":
        return pmf_oracle()
    if name == "renewal":
        return renewal()
    if name == "asymptotes":
        return asymptotes()
    if name == "montecarlo":
        return montecarlo(seed)
    raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
