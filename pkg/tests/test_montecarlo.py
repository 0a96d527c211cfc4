import math

import numpy as np
import pytest

from gillis_reset import gillis as gw
from gillis_reset import montecarlo as mc
from gillis_reset import resetting as rs
from gillis_reset.errors import DomainError, ExcessCensoringError

SEED = 20260809


def analytic(eps, x0, xr, r):
    free = gw.GillisHittingGf(eps)
    return rs.moment_summary(free, gw.WalkSpec(eps, x0, xr), rs.ResetParams(r))


class TestPhiloxCore:
    # Known-answer vectors of the Philox4x32-10 block (Random123 kat).
    KAT = [
        ((0, 0, 0, 0), (0, 0),
         (0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8)),
        ((0xFFFFFFFF,) * 4, (0xFFFFFFFF, 0xFFFFFFFF),
         (0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD)),
        ((0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344),
         (0xA4093822, 0x299F31D0),
         (0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1)),
    ]

    @pytest.mark.parametrize("counter,key,expected", KAT)
    def test_known_answer_vectors(self, counter, key, expected):
        c = [np.uint64(w) for w in counter]
        k = [np.uint64(w) for w in key]
        out = mc._philox_block(*c, *k)
        assert tuple(int(w) for w in out) == expected

    def test_uniforms_in_unit_interval(self):
        u1, u2 = mc.step_uniforms(SEED, np.arange(1000), np.uint64(7))
        for u in (u1, u2):
            assert np.all(u >= 0.0)
            assert np.all(u < 1.0)

    def test_uniform_moments(self):
        idx = np.arange(200_000)
        u1, u2 = mc.step_uniforms(SEED, idx, np.uint64(3))
        for u in (u1, u2):
            assert abs(u.mean() - 0.5) < 4.0 * 0.2887 / math.sqrt(u.size)
            assert abs(u.var() - 1.0 / 12.0) < 1e-3

    def test_pairwise_stream_independence_smoke(self):
        # chi-square on 4x4 joint occupancy of (u_i(n), u_j(n)) pairs
        steps = np.arange(1, 4001)
        for i, j in ((0, 1), (5, 97), (1234, 1235)):
            ui, _ = mc.step_uniforms(SEED, np.full_like(steps, i), steps)
            uj, _ = mc.step_uniforms(SEED, np.full_like(steps, j), steps)
            counts, _, _ = np.histogram2d(ui, uj, bins=4, range=[[0, 1], [0, 1]])
            expected = steps.size / 16.0
            chi2 = float(np.sum((counts - expected) ** 2 / expected))
            # df = 15; mean 15, sd sqrt(30); 60 is far beyond any
            # plausible fluctuation and catches gross correlation
            assert chi2 < 60.0

    def test_streams_differ_across_trajectories(self):
        u_a, _ = mc.step_uniforms(SEED, np.uint64(1), np.uint64(5))
        u_b, _ = mc.step_uniforms(SEED, np.uint64(2), np.uint64(5))
        assert u_a != u_b


class TestStreamConsistency:
    def test_scalar_matches_batches(self):
        spec = gw.WalkSpec(0.25, 3, 5)
        batch = mc._run_batch(spec, 0.3, SEED, 0, 64, 10**6)
        lockstep = mc._simulate_batch_numpy(0.25, 3, 5, 0.3, SEED, 0, 64, 10**6)
        scalar = np.array(
            [mc.simulate_one(spec, 0.3, mc.TrajectoryStream(SEED, i))
             for i in range(64)],
            dtype=np.uint64,
        )
        assert np.array_equal(batch, lockstep)
        assert np.array_equal(batch, scalar)

    def test_deterministic_across_chunking(self):
        spec = gw.WalkSpec(0.25, 3, 5)
        whole = mc.sample_hitting_times(spec, 0.3, mc.McConfig(500, SEED))
        parts = np.concatenate([
            mc._run_batch(spec, 0.3, SEED, 0, 125, mc.DEFAULT_MAX_STEPS),
            mc._run_batch(spec, 0.3, SEED, 125, 375, mc.DEFAULT_MAX_STEPS),
        ])
        assert np.array_equal(whole, parts)

    def test_estimate_reproducible(self):
        spec = gw.WalkSpec(0.25, 3, 5)
        a = mc.estimate(spec, 0.3, mc.McConfig(2000, SEED, workers=1))
        b = mc.estimate(spec, 0.3, mc.McConfig(2000, SEED, workers=4))
        assert a == b

    def test_seed_changes_samples(self):
        spec = gw.WalkSpec(0.25, 3, 5)
        a = mc.sample_hitting_times(spec, 0.3, mc.McConfig(200, 1))
        b = mc.sample_hitting_times(spec, 0.3, mc.McConfig(200, 2))
        assert not np.array_equal(a, b)


class TestSimulateOne:
    def test_deterministic_walk(self):
        spec = gw.WalkSpec(1.0, 1, 1)
        for i in range(20):
            assert mc.simulate_one(spec, 0.0, mc.TrajectoryStream(SEED, i)) == 1

    def test_censoring_marker(self):
        spec = gw.WalkSpec(0.0, 5, 5)
        out = mc.simulate_one(spec, 0.0, mc.TrajectoryStream(SEED, 0), max_steps=3)
        assert out is None

    def test_rejects_bad_r(self):
        spec = gw.WalkSpec(0.0, 5, 5)
        with pytest.raises(DomainError):
            mc.simulate_one(spec, 1.0, mc.TrajectoryStream(SEED, 0))


class TestEstimate:
    def test_geometric_law(self):
        spec = gw.WalkSpec(1.0, 1, 1)
        est = mc.estimate(spec, 0.5, mc.McConfig(100_000, SEED))
        assert abs(est.mean - 2.0) < 4.0 * est.se_mean
        assert abs(est.std_dev - math.sqrt(2.0)) < 4.0 * est.se_std
        assert est.censored_count == 0
        assert not est.biased_low

    def test_null_recurrent_cell(self):
        summary = analytic(0.25, 3, 5, 0.3)
        est = mc.estimate(gw.WalkSpec(0.25, 3, 5), 0.3,
                          mc.McConfig(100_000, SEED + 1))
        assert abs(est.mean - summary.mean) < 4.0 * est.se_mean
        assert abs(est.std_dev - summary.std_dev) < 4.0 * est.se_std

    def test_transient_cell(self):
        summary = analytic(-0.85, 3, 5, 0.1)
        est = mc.estimate(gw.WalkSpec(-0.85, 3, 5), 0.1,
                          mc.McConfig(10_000, SEED + 2))
        assert abs(est.mean - summary.mean) < 4.0 * est.se_mean
        assert abs(est.std_dev - summary.std_dev) < 4.0 * est.se_std

    def test_free_positive_recurrent_mean(self):
        # the reset-free mean is finite (12.857...) but the variance is
        # infinite, so the raw sample mean has no usable standard error;
        # compare the capped mean against its exact value instead
        cap = 10_000
        prefix = gw.hitting_pmf_prefix(0.85, 3, cap)
        n = np.arange(1, cap + 1)
        capped_exact = float(
            np.sum(n * prefix.probs) + cap * (1.0 - prefix.total_mass())
        )
        assert abs(capped_exact - 9.0 / 0.7) / (9.0 / 0.7) < 0.06
        raw = mc.sample_hitting_times(
            gw.WalkSpec(0.85, 3, 3), 0.0, mc.McConfig(100_000, SEED + 3)
        )
        capped = np.minimum(np.where(raw == 0, 10**7, raw).astype(float), cap)
        se = capped.std(ddof=1) / math.sqrt(capped.size)
        assert abs(capped.mean() - capped_exact) < 4.0 * se

    def test_excess_censoring_raises(self):
        spec = gw.WalkSpec(-0.85, 3, 3)  # transient, often never hits
        with pytest.raises(ExcessCensoringError):
            mc.estimate(spec, 0.0, mc.McConfig(2000, SEED, max_steps=1000))

    def test_mild_censoring_flagged(self):
        # reset-free simple walk: the hitting-time tail decays like
        # n^(-1/2), so a step cap leaves a small censored fraction
        spec = gw.WalkSpec(0.0, 1, 1)
        est = mc.estimate(spec, 0.0, mc.McConfig(4000, SEED, max_steps=10**6))
        assert 0 < est.censored_count <= 0.01 * 4000
        assert est.biased_low

    def test_coverage_calibration(self):
        spec = gw.WalkSpec(1.0, 1, 1)
        hits = 0
        reps = 200
        for rep in range(reps):
            est = mc.estimate(spec, 0.5, mc.McConfig(2000, SEED + 17 * rep))
            if abs(est.mean - 2.0) <= 2.0 * est.se_mean:
                hits += 1
        assert hits >= 0.92 * reps

    def test_no_censoring_with_resetting(self):
        for eps in (-0.85, 0.25):
            est = mc.estimate(gw.WalkSpec(eps, 3, 5), 0.01,
                              mc.McConfig(3000, SEED))
            assert est.censored_count == 0


class TestEmpiricalPmf:
    def test_geometric_bins(self):
        spec = gw.WalkSpec(1.0, 1, 1)
        emp = mc.empirical_pmf(spec, 0.25, mc.McConfig(100_000, SEED), 12)
        for n in range(1, 13):
            want = 0.25 ** (n - 1) * 0.75
            se = math.sqrt(want * (1.0 - want) / emp.n)
            assert abs(emp.prefix.prob(n) - want) < 4.0 * se

    def test_free_simple_walk_bins(self):
        spec = gw.WalkSpec(0.0, 1, 1)
        emp = mc.empirical_pmf(spec, 0.0, mc.McConfig(100_000, SEED + 5), 9)
        exact = gw.hitting_pmf_prefix(0.0, 1, 9)
        for n in range(1, 10):
            want = exact.prob(n)
            se = math.sqrt(want * (1.0 - want) / emp.n) if want else 0.0
            assert abs(emp.prefix.prob(n) - want) <= 4.0 * se

    def test_matches_renewal_convolution(self):
        spec = gw.WalkSpec(0.25, 3, 5)
        emp = mc.empirical_pmf(spec, 0.3, mc.McConfig(50_000, SEED + 6), 40)
        dressed = rs.reset_pmf_prefix(
            gw.hitting_pmf_prefix(0.25, 3, 40), spec, rs.ResetParams(0.3), 40,
            gw.hitting_pmf_prefix(0.25, 5, 40),
        )
        checked = 0
        for n in range(1, 41):
            expected = dressed.prob(n) * emp.n
            if expected < 50.0:
                continue
            se = math.sqrt(expected * (1.0 - dressed.prob(n)))
            assert abs(emp.counts[n - 1] - expected) < 4.0 * se
            checked += 1
        assert checked > 10

    def test_mass_identity_exact(self):
        spec = gw.WalkSpec(0.25, 3, 5)
        emp = mc.empirical_pmf(spec, 0.3, mc.McConfig(5000, SEED), 20)
        assert int(emp.counts.sum()) + emp.overflow_count == emp.n


class TestSampleDumps:
    def test_round_trip(self, tmp_path):
        steps = mc.sample_hitting_times(
            gw.WalkSpec(0.25, 3, 5), 0.3, mc.McConfig(500, SEED)
        )
        path = tmp_path / "samples.grws"
        mc.write_samples(path, steps)
        assert np.array_equal(mc.read_samples(path), steps)
        raw = path.read_bytes()
        assert raw[:4] == b"GRWS"
        assert len(raw) == 16 + 8 * 500

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "junk.grws"
        path.write_bytes(b"NOPE" + b"\x00" * 12)
        with pytest.raises(DomainError):
            mc.read_samples(path)


class TestConfigValidation:
    def test_bad_values(self):
        with pytest.raises(DomainError):
            mc.McConfig(0, SEED)
        with pytest.raises(DomainError):
            mc.McConfig(10, SEED, max_steps=0)
        with pytest.raises(DomainError):
            mc.McConfig(10, -1)
        with pytest.raises(DomainError):
            mc.McConfig(10, SEED, workers=0)
