"""Trajectory-level simulation of the walk with geometric resetting.

Randomness is counter-based: every (seed, trajectory, step) triple maps
through one Philox4x32-10 block to the pair of uniforms consumed by
that step (reset test first, move test second; the second draw is
simply unused on reset steps).  Streams therefore never depend on
execution order, so the batched kernels, the scalar reference walker
and any worker partitioning produce bit-identical results.

The hot path is a numba kernel when numba is importable; a vectorized
numpy lockstep batch provides the fallback and a cross-check.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExcessCensoringError
from .gillis import PmfPrefix, WalkSpec

try:
    import numba

    _HAVE_NUMBA = True
except Exception:  # pragma: no cover - exercised only without numba
    numba = None
    _HAVE_NUMBA = False

# Philox4x32 round and Weyl constants.
_PHILOX_M0 = np.uint64(0xD2511F53)
_PHILOX_M1 = np.uint64(0xCD9E8D57)
_PHILOX_W0 = np.uint64(0x9E3779B9)
_PHILOX_W1 = np.uint64(0xBB67AE85)
_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)
_SHIFT11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2^-53
_ROUNDS = 10
# Fixed fourth counter word tagging this stream family.
_STREAM_TAG = np.uint64(0x47525753)

_CHUNK = 1 << 16
_SAMPLE_MAGIC = b"GRWS"
_SAMPLE_VERSION = 1
_HEADER = struct.Struct("<4sHHQ")

DEFAULT_MAX_STEPS = 10**7
# Above this censored fraction the estimate is rejected outright.
_CENSOR_LIMIT = 0.01


@dataclass(frozen=True)
class McConfig:
    """Simulation size, seed and per-trajectory step cap."""

    n_trajectories: int
    seed: int
    max_steps: int = DEFAULT_MAX_STEPS
    workers: int = 1

    def __post_init__(self):
        if self.n_trajectories < 1:
            raise DomainError("n_trajectories must be at least 1")
        if self.max_steps < 1:
            raise DomainError("max_steps must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in 64 bits")
        if self.workers < 1:
            raise DomainError("workers must be at least 1")


@dataclass(frozen=True)
class McEstimate:
    """Sample statistics of the simulated hitting times.

    Censored trajectories enter the aggregates at the step cap, so a
    nonzero censored_count flags the mean and std as lower bounds.
    """

    n: int
    mean: float
    std_dev: float
    se_mean: float
    se_std: float
    censored_count: int
    seed: int

    @property
    def biased_low(self) -> bool:
        return self.censored_count > 0


# --------------------------------------------------------------------------
# counter-based uniforms
# --------------------------------------------------------------------------

def _philox_block(c0, c1, c2, c3, k0, k1):
    """One Philox4x32-10 block on uint64 arrays holding 32-bit words."""
    for _ in range(_ROUNDS):
        p0 = _PHILOX_M0 * c0
        p1 = _PHILOX_M1 * c2
        hi0, lo0 = p0 >> _SHIFT32, p0 & _MASK32
        hi1, lo1 = p1 >> _SHIFT32, p1 & _MASK32
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = (k0 + _PHILOX_W0) & _MASK32
        k1 = (k1 + _PHILOX_W1) & _MASK32
    return c0, c1, c2, c3


def step_uniforms(seed: int, trajectory, step):
    """Pair of 53-bit uniforms for the given trajectory indices and
    step number (vectorized over trajectory/step arrays)."""
    trajectory = np.asarray(trajectory, dtype=np.uint64)
    step = np.asarray(step, dtype=np.uint64)
    c0 = step & _MASK32
    c1 = trajectory & _MASK32
    c2 = trajectory >> _SHIFT32
    c3 = np.broadcast_to(_STREAM_TAG, c0.shape).copy()
    k0 = np.uint64(seed) & _MASK32
    k1 = np.uint64(seed) >> _SHIFT32
    w0, w1, w2, w3 = _philox_block(c0, c1, c2, c3, k0, k1)
    u1 = (((w0 << _SHIFT32) | w1) >> _SHIFT11).astype(np.float64) * _INV53
    u2 = (((w2 << _SHIFT32) | w3) >> _SHIFT11).astype(np.float64) * _INV53
    return u1, u2


class TrajectoryStream:
    """Scalar per-trajectory stream view over the counter-based source."""

    def __init__(self, seed: int, trajectory: int):
        self.seed = seed
        self.trajectory = trajectory

    def uniforms(self, step: int) -> tuple[float, float]:
        u1, u2 = step_uniforms(self.seed, self.trajectory, step)
        return float(u1), float(u2)


def simulate_one(spec: WalkSpec, r: float, stream: TrajectoryStream,
                 max_steps: int = DEFAULT_MAX_STEPS) -> int | None:
    """Reference scalar walker; returns the hitting step or None when
    censored at max_steps."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r={r} outside [0, 1)")
    x = spec.x0
    eps = spec.epsilon
    for n in range(1, max_steps + 1):
        u1, u2 = stream.uniforms(n)
        if u1 < r:
            x = spec.xr
        else:
            if u2 < 0.5 * (1.0 + eps / x):
                x -= 1
            else:
                x += 1
            if x == 0:
                return n
    return None


def _simulate_batch_numpy(eps: float, x0: int, xr: int, r: float, seed: int,
                          first_index: int, count: int,
                          max_steps: int) -> np.ndarray:
    """Lockstep batch over trajectories [first_index, first_index+count);
    returns hitting steps with 0 marking censored walks."""
    idx = np.arange(first_index, first_index + count, dtype=np.uint64)
    pos = np.full(count, x0, dtype=np.int64)
    out = np.zeros(count, dtype=np.uint64)
    alive_ids = idx
    alive_pos = pos
    for n in range(1, max_steps + 1):
        u1, u2 = step_uniforms(seed, alive_ids, np.uint64(n))
        is_reset = u1 < r
        alive_pos = np.where(is_reset, xr, alive_pos)
        move = ~is_reset
        down = u2 < 0.5 * (1.0 + eps / alive_pos)
        shift = np.where(down, -1, 1)
        alive_pos = np.where(move, alive_pos + shift, alive_pos)
        hit = move & (alive_pos == 0)
        if hit.any():
            out[(alive_ids[hit] - np.uint64(first_index)).astype(np.int64)] = n
            keep = ~hit
            alive_ids = alive_ids[keep]
            alive_pos = alive_pos[keep]
            if alive_ids.size == 0:
                break
    return out


if _HAVE_NUMBA:

    @numba.njit(cache=True, inline="always")
    def _pair_nb(k0, k1, traj, step):
        m0 = np.uint64(0xD2511F53)
        m1 = np.uint64(0xCD9E8D57)
        w0c = np.uint64(0x9E3779B9)
        w1c = np.uint64(0xBB67AE85)
        mask = np.uint64(0xFFFFFFFF)
        c0 = step & mask
        c1 = traj & mask
        c2 = traj >> np.uint64(32)
        c3 = np.uint64(0x47525753)
        kk0 = k0
        kk1 = k1
        for _ in range(10):
            p0 = m0 * c0
            p1 = m1 * c2
            hi0 = p0 >> np.uint64(32)
            lo0 = p0 & mask
            hi1 = p1 >> np.uint64(32)
            lo1 = p1 & mask
            c0, c1, c2, c3 = hi1 ^ c1 ^ kk0, lo1, hi0 ^ c3 ^ kk1, lo0
            kk0 = (kk0 + w0c) & mask
            kk1 = (kk1 + w1c) & mask
        u1 = np.float64(((c0 << np.uint64(32)) | c1) >> np.uint64(11)) * _INV53
        u2 = np.float64(((c2 << np.uint64(32)) | c3) >> np.uint64(11)) * _INV53
        return u1, u2

    @numba.njit(cache=True, parallel=True)
    def _simulate_batch_nb(eps, x0, xr, r, k0, k1, first_index, count,
                           max_steps, out):
        for i in numba.prange(count):
            traj = np.uint64(first_index + i)
            x = x0
            steps = np.uint64(0)
            for n in range(1, max_steps + 1):
                u1, u2 = _pair_nb(k0, k1, traj, np.uint64(n))
                if u1 < r:
                    x = xr
                else:
                    if u2 < 0.5 * (1.0 + eps / x):
                        x -= 1
                    else:
                        x += 1
                    if x == 0:
                        steps = np.uint64(n)
                        break
            out[i] = steps


def _run_batch(spec: WalkSpec, r: float, seed: int, first_index: int,
               count: int, max_steps: int) -> np.ndarray:
    if _HAVE_NUMBA:
        out = np.zeros(count, dtype=np.uint64)
        _simulate_batch_nb(
            float(spec.epsilon), spec.x0, spec.xr, float(r),
            np.uint64(seed) & _MASK32, np.uint64(seed) >> _SHIFT32,
            first_index, count, max_steps, out,
        )
        return out
    return _simulate_batch_numpy(
        spec.epsilon, spec.x0, spec.xr, r, seed, first_index, count, max_steps
    )


def sample_hitting_times(spec: WalkSpec, r: float, cfg: McConfig) -> np.ndarray:
    """Hitting steps of all trajectories in index order (0 = censored)."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r={r} outside [0, 1)")
    chunks = []
    start = 0
    while start < cfg.n_trajectories:
        count = min(_CHUNK, cfg.n_trajectories - start)
        chunks.append(_run_batch(spec, r, cfg.seed, start, count, cfg.max_steps))
        start += count
    return np.concatenate(chunks)


def estimate(spec: WalkSpec, r: float, cfg: McConfig) -> McEstimate:
    """Sample mean / standard deviation of the hitting time with
    standard errors; deterministic for fixed (seed, n_trajectories)."""
    raw = sample_hitting_times(spec, r, cfg)
    censored = int(np.sum(raw == 0))
    if censored > _CENSOR_LIMIT * cfg.n_trajectories:
        raise ExcessCensoringError(
            f"{censored}/{cfg.n_trajectories} trajectories censored at "
            f"max_steps={cfg.max_steps}"
        )
    values = np.where(raw == 0, cfg.max_steps, raw).astype(np.float64)
    n = cfg.n_trajectories
    mean = math.fsum(values) / n
    centered = values - mean
    var = math.fsum(centered * centered) / (n - 1) if n > 1 else 0.0
    std = math.sqrt(var)
    m4 = math.fsum(centered**4) / n if n > 1 else 0.0
    se_mean = std / math.sqrt(n)
    se_std = 0.0
    if std > 0.0 and n > 1:
        var_of_var = max(m4 - var * var, 0.0) / n
        se_std = 0.5 * math.sqrt(var_of_var) / std
    return McEstimate(
        n=n, mean=mean, std_dev=std, se_mean=se_mean, se_std=se_std,
        censored_count=censored, seed=cfg.seed,
    )


@dataclass(frozen=True)
class EmpiricalPmf:
    """Histogram of hitting times with the exact integer counts kept
    alongside the normalized prefix."""

    prefix: PmfPrefix
    overflow_mass: float
    counts: np.ndarray
    overflow_count: int
    n: int


def empirical_pmf(spec: WalkSpec, r: float, cfg: McConfig,
                  n_max: int) -> EmpiricalPmf:
    """Normalized histogram of hitting times up to n_max; censored and
    later hits both land in the overflow bucket."""
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    raw = sample_hitting_times(spec, r, cfg)
    inside = (raw >= 1) & (raw <= n_max)
    counts = np.bincount(raw[inside].astype(np.int64), minlength=n_max + 1)[1:]
    overflow_count = cfg.n_trajectories - int(counts.sum())
    prefix = PmfPrefix(probs=counts / cfg.n_trajectories, n_max=n_max)
    return EmpiricalPmf(
        prefix=prefix,
        overflow_mass=overflow_count / cfg.n_trajectories,
        counts=counts,
        overflow_count=overflow_count,
        n=cfg.n_trajectories,
    )


# --------------------------------------------------------------------------
# raw-sample dumps
# --------------------------------------------------------------------------

def write_samples(path, steps: np.ndarray) -> None:
    """Binary dump: 16-byte header (magic, version u16, reserved u16,
    count u64) followed by little-endian u64 step counts."""
    arr = np.ascontiguousarray(steps, dtype="<u8")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_SAMPLE_MAGIC, _SAMPLE_VERSION, 0, arr.size))
        fh.write(arr.tobytes())


def read_samples(path) -> np.ndarray:
    """Read a dump produced by write_samples."""
    with open(path, "rb") as fh:
        magic, version, _, count = _HEADER.unpack(fh.read(_HEADER.size))
        if magic != _SAMPLE_MAGIC:
            raise DomainError(f"bad sample-file magic {magic!r}")
        if version != _SAMPLE_VERSION:
            raise DomainError(f"unsupported sample-file version {version}")
        data = np.frombuffer(fh.read(8 * count), dtype="<u8")
        if data.size != count:
            raise DomainError("truncated sample file")
        return data.astype(np.uint64)
