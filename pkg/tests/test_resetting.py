import math

import numpy as np
import pytest

from gillis_reset import gillis as gw
from gillis_reset import resetting as rs
from gillis_reset.errors import DomainError, InsufficientPrefixError


def rel_err(got, want):
    return abs(got - want) / abs(want)


@pytest.fixture(scope="module")
def geometric():
    """Deterministic one-step walk: F(z) = z, dressed time geometric."""
    return gw.GillisHittingGf(1.0), gw.WalkSpec(1.0, 1, 1)


class TestResetGf:
    def test_r_zero_is_identity(self):
        free = gw.GillisHittingGf(0.25)
        spec = gw.WalkSpec(0.25, 3, 5)
        for z in (0.2, 0.6, 0.9):
            assert rs.reset_gf(free, spec, rs.ResetParams(0.0), z) == free(3, z).value

    def test_hand_value(self, geometric):
        free, spec = geometric
        got = rs.reset_gf(free, spec, rs.ResetParams(0.5), 0.5)
        assert got == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_always_recurrent_under_resetting(self):
        # mass tends to one as z -> 1 in every regime, including transient
        for eps in (-0.85, 0.25, 0.85):
            free = gw.GillisHittingGf(eps)
            spec = gw.WalkSpec(eps, 3, 5)
            val = rs.reset_gf(free, spec, rs.ResetParams(0.3), 1.0 - 1e-9)
            assert val == pytest.approx(1.0, abs=1e-5)

    def test_mean_from_leading_expansion(self):
        # (1 - F_r(z)) / (1 - z) -> mean as z -> 1, and the residual at
        # the probe equals the second-order term -(1-z)(m2 - m)/2
        for eps, x0, xr, r in ((-0.85, 3, 1, 0.5), (0.25, 3, 5, 0.5), (0.85, 2, 4, 0.2)):
            free = gw.GillisHittingGf(eps)
            spec = gw.WalkSpec(eps, x0, xr)
            p = rs.ResetParams(r)
            mean = rs.mean_fht(free, spec, p)
            m2 = rs.second_moment_fht(free, spec, p)
            z = 1.0 - 1e-6
            slope = (1.0 - rs.reset_gf(free, spec, p, z)) / (1.0 - z)
            predicted = -(1.0 - z) * (m2 - mean) / 2.0
            assert abs((slope - mean) - predicted) < 0.2 * abs(predicted)

    def test_same_site_reduction(self):
        # generic two-site formula collapses to the single-site one
        for eps in (-0.85, 0.0, 0.85):
            free = gw.GillisHittingGf(eps)
            spec = gw.WalkSpec(eps, 3, 3)
            for z in (0.3, 0.7, 0.95):
                general = rs.reset_gf(free, spec, rs.ResetParams(0.4), z)
                zeta = 0.6 * z
                f0 = free(3, zeta).value
                single = (1.0 - zeta) * f0 / (1.0 - z + 0.4 * z * f0)
                assert abs(general - single) < 1e-14


class TestMeanFht:
    def test_geometric_all_r(self, geometric):
        free, spec = geometric
        for r in (0.1, 0.3, 0.5, 0.7, 0.9):
            got = rs.mean_fht(free, spec, rs.ResetParams(r))
            assert rel_err(got, 1.0 / (1.0 - r)) < 1e-12

    def test_simple_walk_half(self):
        free = gw.GillisHittingGf(0.0)
        spec = gw.WalkSpec(0.0, 1, 1)
        got = rs.mean_fht(free, spec, rs.ResetParams(0.5))
        assert rel_err(got, 2.0 + 2.0 * math.sqrt(3.0)) < 1e-12

    def test_small_r_limit_positive_recurrent(self):
        free = gw.GillisHittingGf(0.85)
        spec = gw.WalkSpec(0.85, 3, 3)
        got = rs.mean_fht(free, spec, rs.ResetParams(1e-10))
        assert rel_err(got, 9.0 / 0.7) < 1e-3

    def test_requires_positive_r(self, geometric):
        free, spec = geometric
        with pytest.raises(DomainError):
            rs.mean_fht(free, spec, rs.ResetParams(0.0))


class TestSecondMomentAndSummary:
    def test_geometric_closed_form(self, geometric):
        free, spec = geometric
        for r in (0.1, 0.25, 0.5, 0.9):
            m2 = rs.second_moment_fht(free, spec, rs.ResetParams(r))
            want = 2.0 / (1.0 - r) ** 2 - 1.0 / (1.0 - r)
            assert rel_err(m2, want) < 1e-12

    def test_geometric_summary(self, geometric):
        free, spec = geometric
        summary = rs.moment_summary(free, spec, rs.ResetParams(0.25))
        assert rel_err(summary.mean, 4.0 / 3.0) < 1e-13
        assert rel_err(summary.std_dev, math.sqrt(0.25) / 0.75) < 1e-12
        assert rel_err(summary.cv, 0.5) < 1e-12

    def test_std_vanishes_with_r(self, geometric):
        free, spec = geometric
        stds = [rs.moment_summary(free, spec, rs.ResetParams(r)).std_dev
                for r in (0.5, 0.1, 0.01, 0.001)]
        assert all(b < a for a, b in zip(stds, stds[1:]))
        assert stds[-1] < 0.05

    def test_derivative_identity_cross_check(self):
        # m2 equals 2 m (m_rr + 1/2) - 2(1-r) dm/dr with a numerical dm/dr
        for eps, x0, xr, r in ((0.25, 3, 5, 0.3), (-0.85, 3, 5, 0.5),
                               (0.85, 3, 5, 0.7), (1.0, 1, 1, 0.5)):
            free = gw.GillisHittingGf(eps)
            spec = gw.WalkSpec(eps, x0, xr)
            h = max(1e-6, 1e-4 * r * (1.0 - r))
            dm = (rs.mean_fht(free, spec, rs.ResetParams(r + h))
                  - rs.mean_fht(free, spec, rs.ResetParams(r - h))) / (2.0 * h)
            m = rs.mean_fht(free, spec, rs.ResetParams(r))
            m_rr = rs.mean_fht(free, gw.WalkSpec(eps, xr, xr), rs.ResetParams(r))
            via_derivative = 2.0 * m * (m_rr + 0.5) - 2.0 * (1.0 - r) * dm
            direct = rs.second_moment_fht(free, spec, rs.ResetParams(r))
            assert rel_err(via_derivative, direct) < 1e-6

    def test_second_moment_vs_pmf_sum(self):
        # truncation bounded by a geometric envelope fitted to the tail
        eps, r = 0.25, 0.5
        spec = gw.WalkSpec(eps, 1, 1)
        free = gw.GillisHittingGf(eps)
        n_max = 120
        dressed = rs.reset_pmf_prefix(
            gw.hitting_pmf_prefix(eps, 1, n_max), spec, rs.ResetParams(r), n_max
        )
        n = np.arange(1, n_max + 1)
        partial = float(np.sum(n**2 * dressed.probs))
        lam = dressed.probs[-1] / dressed.probs[-2]
        assert lam < 1.0
        tail_bound = dressed.probs[-1] * lam / (1 - lam) * (n_max + 1 / (1 - lam)) ** 2
        analytic = rs.second_moment_fht(free, spec, rs.ResetParams(r))
        assert abs(partial - analytic) <= tail_bound + 1e-9 * analytic


class TestCvIdentity:
    def test_geometric(self, geometric):
        free, spec = geometric
        assert abs(rs.cv_identity_residual(free, spec, rs.ResetParams(0.5))) < 1e-6

    @pytest.mark.parametrize("r", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_null_recurrent_grid(self, r):
        free = gw.GillisHittingGf(0.25)
        spec = gw.WalkSpec(0.25, 3, 5)
        assert abs(rs.cv_identity_residual(free, spec, rs.ResetParams(r))) < 1e-6

    def test_transient(self):
        free = gw.GillisHittingGf(-0.85)
        spec = gw.WalkSpec(-0.85, 3, 5)
        assert abs(rs.cv_identity_residual(free, spec, rs.ResetParams(0.3))) < 1e-6


class TestResetPmfPrefix:
    def test_r_zero_unchanged(self):
        base = gw.hitting_pmf_prefix(0.25, 3, 30)
        spec = gw.WalkSpec(0.25, 3, 3)
        dressed = rs.reset_pmf_prefix(base, spec, rs.ResetParams(0.0), 30)
        assert np.array_equal(dressed.probs, base.probs)

    def test_geometric_law(self):
        base = gw.hitting_pmf_prefix(1.0, 1, 40)
        spec = gw.WalkSpec(1.0, 1, 1)
        dressed = rs.reset_pmf_prefix(base, spec, rs.ResetParams(0.25), 40)
        want = 0.25 ** np.arange(40) * 0.75
        assert np.max(np.abs(dressed.probs - want)) < 1e-15

    @pytest.mark.parametrize("eps,r,x0,xr", [(0.25, 0.3, 3, 5), (-0.85, 0.5, 2, 4)])
    def test_matches_gf_coefficients(self, eps, r, x0, xr):
        spec = gw.WalkSpec(eps, x0, xr)
        conv = rs.reset_pmf_prefix(
            gw.hitting_pmf_prefix(eps, x0, 40), spec, rs.ResetParams(r), 40,
            gw.hitting_pmf_prefix(eps, xr, 40),
        )
        coeffs = rs.reset_gf_coefficients(
            gw.hitting_gf_coefficients(eps, x0, 40),
            gw.hitting_gf_coefficients(eps, xr, 40), r, 40,
        )
        assert np.max(np.abs(conv.probs - coeffs[1:])) < 1e-10

    def test_entries_are_probabilities(self):
        spec = gw.WalkSpec(-0.85, 3, 5)
        dressed = rs.reset_pmf_prefix(
            gw.hitting_pmf_prefix(-0.85, 3, 100), spec, rs.ResetParams(0.4), 100,
            gw.hitting_pmf_prefix(-0.85, 5, 100),
        )
        assert np.all(dressed.probs >= 0.0)
        assert np.all(dressed.probs <= 1.0)
        assert dressed.total_mass() <= 1.0 + 1e-12

    def test_missing_reset_prefix(self):
        base = gw.hitting_pmf_prefix(0.25, 3, 30)
        spec = gw.WalkSpec(0.25, 3, 5)
        with pytest.raises(InsufficientPrefixError):
            rs.reset_pmf_prefix(base, spec, rs.ResetParams(0.3), 30)

    def test_short_prefix(self):
        base = gw.hitting_pmf_prefix(0.25, 3, 10)
        spec = gw.WalkSpec(0.25, 3, 3)
        with pytest.raises(InsufficientPrefixError):
            rs.reset_pmf_prefix(base, spec, rs.ResetParams(0.3), 30)

    def test_mean_via_pmf(self):
        # partial mean agrees with the analytic mean within the
        # geometric-envelope bound on the dropped tail
        for eps, r in ((0.85, 0.3), (0.25, 0.5), (-0.85, 0.6)):
            spec = gw.WalkSpec(eps, 3, 5)
            free = gw.GillisHittingGf(eps)
            n_max = 600
            dressed = rs.reset_pmf_prefix(
                gw.hitting_pmf_prefix(eps, 3, n_max), spec, rs.ResetParams(r),
                n_max, gw.hitting_pmf_prefix(eps, 5, n_max),
            )
            analytic = rs.mean_fht(free, spec, rs.ResetParams(r))
            lam = dressed.probs[-1] / dressed.probs[-2]
            assert lam < 1.0
            tail = dressed.probs[-1] * lam / (1 - lam) * (n_max + 1 / (1 - lam))
            assert abs(dressed.mean() - analytic) <= 2.0 * tail + 1e-9 * analytic


class TestSurvivalGf:
    def test_at_zero(self):
        free = gw.GillisHittingGf(0.25)
        assert rs.survival_gf(free, 3, 0.0) == 1.0

    def test_one_step_walk(self, geometric):
        free, _ = geometric
        for z in (0.2, 0.5, 0.8):
            assert rs.survival_gf(free, 1, z) == pytest.approx(1.0, rel=1e-12)

    def test_simple_walk_value(self):
        free = gw.GillisHittingGf(0.0)
        got = rs.survival_gf(free, 1, 0.5)
        want = (1.0 - (1.0 - math.sqrt(0.75)) / 0.5) / 0.5
        assert rel_err(got, want) < 1e-12
