"""
Seeded Monte Carlo engine for detection-error-rate sweeps.

Every trial owns a generator derived from
``(master_seed, scheme, num_signals, snr_index, trial_index)``, so results
do not depend on execution order, batch size or worker count.

A trial draws, in order: the transmitted messages, one fading realization
per transmitter, then the receiver noise. :func:`run_trial` walks the
object-level pipeline one trial at a time; :func:`count_errors` consumes
the same draws and evaluates a whole batch with array operations.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import channel as ch
from .detect import (detect_sequences, detect_sts, symbol_major_codebook, symbol_major_scores,
                     tone_energy_matrix)
from .grid import NUM_SUBCARRIERS, NUM_SYMBOLS, OfdmParams, ResourceGrid, make_grid, normalize_symbol_energy
from .sequences import codebook_grids, map_sequence_to_grid, signature
from .sts import StsConfig, digits_from_message, make_sts_config, map_to_grid, message_scores, sts_encode, top_indices

SCHEMES = ("sts", "walsh", "gold", "zc")
PROFILES = ("epa", "flat")
WILSON_Z = 1.959963984540054


class ConfigError(ValueError):
    pass


def default_snr_list() -> tuple[float, ...]:
    return tuple(float(s) for s in range(-10, 31, 2))


@dataclass(frozen=True)
class StsParams:
    S: int = 71
    K: int = 1
    N: int = 14
    offset: int = 1


@dataclass(frozen=True)
class ChannelParams:
    profile: str = "epa"
    doppler_hz: float = ch.DEFAULT_DOPPLER_HZ
    num_sinusoids: int = ch.DEFAULT_SINUSOIDS
    # power of transmitters 2.. relative to transmitter 1
    power_offset_db: float = 0.0

    def make_profile(self) -> ch.EpaProfile:
        return ch.epa_profile() if self.profile == "epa" else ch.flat_profile()


@dataclass(frozen=True)
class SimConfig:
    scheme: str = "sts"
    num_signals: int = 1
    snr_db_list: tuple[float, ...] = field(default_factory=default_snr_list)
    trials_per_point: int = 20_000
    master_seed: int = 0
    codebook_size: int = 64
    sts: StsParams = field(default_factory=StsParams)
    channel: ChannelParams = field(default_factory=ChannelParams)
    ofdm: OfdmParams = field(default_factory=OfdmParams)
    workers: int = 1
    batch_size: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "snr_db_list", tuple(float(s) for s in self.snr_db_list))
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.trials_per_point < 1:
            raise ConfigError("trials_per_point must be >= 1")
        if not self.snr_db_list:
            raise ConfigError("snr_db_list is empty")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be non-negative")
        if self.workers < 1 or self.batch_size < 1:
            raise ConfigError("workers and batch_size must be >= 1")
        if self.channel.profile not in PROFILES:
            raise ConfigError(f"channel profile must be one of {PROFILES}")
        if self.channel.doppler_hz < 0:
            raise ConfigError("doppler_hz must be >= 0")
        if self.channel.num_sinusoids < 16:
            raise ConfigError("num_sinusoids must be >= 16")
        try:
            sts = self.sts_config()
        except ValueError as e:
            raise ConfigError(f"invalid STS parameters: {e}") from None
        if self.sts.offset < 0 or self.sts.offset + sts.S > NUM_SUBCARRIERS or sts.N > NUM_SYMBOLS:
            raise ConfigError(f"STS band of {sts.S}x{sts.N} at offset {self.sts.offset} "
                              f"does not fit the {NUM_SUBCARRIERS}x{NUM_SYMBOLS} grid")
        if self.scheme != "sts":
            limit = 1024 if self.scheme == "walsh" else 1020 if self.scheme == "zc" else 1025
            if not 1 <= self.codebook_size <= limit:
                raise ConfigError(f"codebook_size must be in [1, {limit}] for {self.scheme}")
        if not 1 <= self.num_signals <= self.num_messages:
            raise ConfigError(f"num_signals must be in [1, {self.num_messages}]")

    def sts_config(self) -> StsConfig:
        return make_sts_config(self.sts.S, self.sts.K, self.sts.N)

    @property
    def num_messages(self) -> int:
        if self.scheme == "sts":
            return self.sts.S ** self.sts.K
        return self.codebook_size


def scheme_configs(cfg: SimConfig, schemes) -> list[SimConfig]:
    return [replace(cfg, scheme=s) for s in schemes]


# --- per-trial randomness -------------------------------------------------

def _point_key(cfg: SimConfig, snr_index: int) -> np.ndarray:
    spawn = (SCHEMES.index(cfg.scheme), cfg.num_signals, snr_index)
    return np.random.SeedSequence(cfg.master_seed, spawn_key=spawn).generate_state(2, np.uint64)


def _trial_counter(trial_index: int) -> np.ndarray:
    # trial index in the top counter word: streams never overlap
    return np.array([0, 0, 0, trial_index], dtype=np.uint64)


def trial_rng(cfg: SimConfig, snr_index: int, trial_index: int) -> np.random.Generator:
    """
    Generator for one trial: Philox keyed by a hash of
    ``(master_seed, scheme, num_signals, snr_index)``, counter set from ``trial_index``.
    """
    bitgen = np.random.Philox(key=_point_key(cfg, snr_index), counter=_trial_counter(trial_index))
    return np.random.Generator(bitgen)


class _TrialStreams:
    """Same streams as :func:`trial_rng`, rewinding one bit generator in place."""

    def __init__(self, cfg: SimConfig, snr_index: int):
        self._bitgen = np.random.Philox(key=_point_key(cfg, snr_index))
        self._state = self._bitgen.state
        self._gen = np.random.Generator(self._bitgen)

    def __getitem__(self, trial_index: int) -> np.random.Generator:
        state = dict(self._state)
        state["state"] = {"counter": _trial_counter(trial_index), "key": self._state["state"]["key"]}
        self._bitgen.state = state
        return self._gen


def messages_from_uniforms(u: np.ndarray, n: int) -> np.ndarray:
    """
    Distinct messages from ``(..., L)`` uniforms by sequential selection:
    the k-th pick is element ``floor(u_k * (n - k))`` of the values still unused.
    """
    u = np.asarray(u, dtype=np.float64)
    L = u.shape[-1]
    picks = np.empty(u.shape, dtype=np.int64)
    for k in range(L):
        v = np.minimum((u[..., k] * (n - k)).astype(np.int64), n - k - 1)
        taken = np.sort(picks[..., :k], axis=-1)
        for j in range(k):
            v = v + (v >= taken[..., j])
        picks[..., k] = v
    return picks


def draw_messages(cfg: SimConfig, rng: np.random.Generator) -> np.ndarray:
    return messages_from_uniforms(rng.random(cfg.num_signals), cfg.num_messages)


def signal_amplitudes(cfg: SimConfig) -> np.ndarray:
    amps = np.full(cfg.num_signals, 10.0 ** (-cfg.channel.power_offset_db / 20.0))
    amps[0] = 1.0
    return amps


# --- transmitters -----------------------------------------------------------

def transmit_grid(cfg: SimConfig, message: int) -> ResourceGrid:
    """Transmitted grid for one message, normalized to unit energy per OFDM symbol."""
    grid = make_grid(NUM_SUBCARRIERS, NUM_SYMBOLS)
    if cfg.scheme == "sts":
        sts = cfg.sts_config()
        codeword = sts_encode(digits_from_message(int(message), sts), sts)
        grid = map_to_grid(codeword, grid, cfg.sts.offset, 1.0)
    else:
        grid = map_sequence_to_grid(signature(cfg.scheme, int(message)), grid)
    return normalize_symbol_energy(grid, 1.0)


@lru_cache(maxsize=32)
def _transmit_table(cfg_key: SimConfig) -> np.ndarray:
    if cfg_key.scheme == "sts":
        table = np.stack([transmit_grid(cfg_key, m).elements for m in range(cfg_key.num_messages)])
    else:
        table = codebook_grids(cfg_key.scheme, cfg_key.codebook_size)
    table.setflags(write=False)
    return table


def _table_key(cfg: SimConfig) -> SimConfig:
    # strip fields that do not affect the transmit table so the cache is shared
    return SimConfig(scheme=cfg.scheme, codebook_size=cfg.codebook_size, sts=cfg.sts,
                     num_signals=1, snr_db_list=(0.0,), trials_per_point=1)


# --- single trial -----------------------------------------------------------

def run_trial(cfg: SimConfig, snr_db: float, rng: np.random.Generator) -> bool:
    """One transmission and detection; True when the detected set is wrong."""
    messages = draw_messages(cfg, rng)
    profile = cfg.channel.make_profile()
    rx = make_grid(NUM_SUBCARRIERS, NUM_SYMBOLS)
    for m, amp in zip(messages, signal_amplitudes(cfg)):
        link = ch.make_epa_channel(rng, cfg.channel.doppler_hz, profile, cfg.channel.num_sinusoids)
        rx = rx + amp * ch.apply_channel(transmit_grid(cfg, m), link, cfg.ofdm)
    rx = ch.add_awgn(rx, snr_db, 1.0, rng)
    L = cfg.num_signals
    if cfg.scheme == "sts":
        report = detect_sts(rx, cfg.sts_config(), L, cfg.sts.offset)
    else:
        codebook = codebook_grids(cfg.scheme, cfg.codebook_size)
        report = detect_sequences(rx, codebook, L, cfg.scheme)
    return report.detected_set != frozenset(int(m) for m in messages)


# --- batched trials ---------------------------------------------------------

def count_errors(cfg: SimConfig, snr_index: int, start: int, stop: int) -> int:
    """Errors among trials ``start..stop-1`` at ``cfg.snr_db_list[snr_index]``."""
    B, L = stop - start, cfg.num_signals
    profile = cfg.channel.make_profile()
    taps, M = profile.num_taps, cfg.channel.num_sinusoids

    # one trial = one run of uniforms: messages | fading per link | noise
    n_fading = ch.fading_uniform_count(taps, M)
    n_noise = NUM_SUBCARRIERS * NUM_SYMBOLS
    raw = np.empty((B, L + L * n_fading + 2 * n_noise))
    streams = _TrialStreams(cfg, snr_index)
    for b in range(B):
        streams[start + b].random(out=raw[b])
    messages = messages_from_uniforms(raw[:, :L], cfg.num_messages)
    fading_u = raw[:, L:L + L * n_fading].reshape(B, L, n_fading)
    weights, cos_angles = ch.fading_from_uniforms(fading_u, taps, M)
    noise_u = raw[:, L + L * n_fading:].reshape(B, 2, NUM_SUBCARRIERS, NUM_SYMBOLS)

    # everything below is laid out (symbol, trial, [signal,] subcarrier)
    t = cfg.ofdm.symbol_mid_times(NUM_SYMBOLS)
    f = cfg.ofdm.subcarrier_offsets(NUM_SUBCARRIERS)
    gains = ch.tap_gains_by_symbol(weights, cos_angles, cfg.channel.doppler_hz, profile, t)
    H = gains @ ch.steering(profile, f).T
    H *= _symbol_major_table(_table_key(cfg))[:, messages]
    H *= signal_amplitudes(cfg)[:, np.newaxis]
    rx = H.sum(axis=2)
    sigma = math.sqrt(ch.noise_variance(cfg.snr_db_list[snr_index], 1.0))
    noise = ch.gaussian_from_uniforms(noise_u[:, 0], noise_u[:, 1])
    noise *= sigma
    rx += noise.transpose(2, 0, 1)

    if cfg.scheme == "sts":
        sts = cfg.sts_config()
        energy = tone_energy_matrix(rx.transpose(1, 2, 0), cfg.sts.offset, sts.S)[..., :sts.N]
        scores = message_scores(energy, sts)
    else:
        scores = symbol_major_scores(rx, _symbol_major_codebook(cfg.scheme, cfg.codebook_size))
    detected = np.sort(top_indices(scores, L), axis=1)
    return int(np.count_nonzero(np.any(detected != np.sort(messages, axis=1), axis=1)))


@lru_cache(maxsize=32)
def _symbol_major_table(cfg_key: SimConfig) -> np.ndarray:
    table = np.ascontiguousarray(_transmit_table(cfg_key).transpose(2, 0, 1))
    table.setflags(write=False)
    return table


@lru_cache(maxsize=8)
def _symbol_major_codebook(scheme: str, size: int) -> np.ndarray:
    cands = symbol_major_codebook(codebook_grids(scheme, size))
    cands.setflags(write=False)
    return cands


# --- results ----------------------------------------------------------------

def wilson_interval(errors: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    if trials <= 0:
        return 0.0, 1.0
    p = errors / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    # exact at the extremes
    lo = 0.0 if errors == 0 else max(0.0, centre - half)
    hi = 1.0 if errors == trials else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class PointResult:
    scheme: str
    num_signals: int
    snr_db: float
    trials: int
    errors: int

    @property
    def error_rate(self) -> float:
        return self.errors / self.trials

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.errors, self.trials)

    def sort_key(self):
        return SCHEMES.index(self.scheme), self.num_signals, self.snr_db


@dataclass
class SweepResult:
    points: list[PointResult] = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.sorted_points())

    def sorted_points(self) -> list[PointResult]:
        return sorted(self.points, key=PointResult.sort_key)

    def merge(self, *others: SweepResult) -> SweepResult:
        pts = list(self.points)
        for o in others:
            pts.extend(o.points)
        return SweepResult(pts)

    def curves(self) -> dict[tuple[str, int], list[PointResult]]:
        out: dict[tuple[str, int], list[PointResult]] = {}
        for p in self.sorted_points():
            out.setdefault((p.scheme, p.num_signals), []).append(p)
        return out

    def curve(self, scheme: str, num_signals: int) -> list[PointResult]:
        return self.curves().get((scheme, num_signals), [])


def _chunks(cfg: SimConfig):
    n = cfg.trials_per_point
    for i in range(len(cfg.snr_db_list)):
        for start in range(0, n, cfg.batch_size):
            yield i, start, min(n, start + cfg.batch_size)


def _count_task(args):
    cfg, i, start, stop = args
    return i, count_errors(cfg, i, start, stop)


def run_sweep(cfg: SimConfig, progress=None) -> SweepResult:
    """
    Error counts for every SNR point of ``cfg``.

    ``progress``, if given, is called with the number of finished trials
    after each batch.
    """
    errors = [0] * len(cfg.snr_db_list)
    tasks = [(cfg, i, a, b) for i, a, b in _chunks(cfg)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            done = pool.map(_count_task, tasks)
            for (_, _, a, b), (i, e) in zip(tasks, done):
                errors[i] += e
                if progress:
                    progress(b - a)
    else:
        for task in tasks:
            i, e = _count_task(task)
            errors[i] += e
            if progress:
                progress(task[3] - task[2])
    return SweepResult([
        PointResult(cfg.scheme, cfg.num_signals, snr, cfg.trials_per_point, e)
        for snr, e in zip(cfg.snr_db_list, errors)
    ])


def snr_at_error_rate(curve: list[PointResult], target: float) -> float:
    """
    SNR where the curve first falls to ``target``, interpolating log10(error rate)
    linearly between sweep points. NaN when it never gets there.
    """
    pts = sorted(curve, key=lambda p: p.snr_db)
    if not pts:
        return math.nan
    if pts[0].error_rate <= target:
        return pts[0].snr_db
    for lo, hi in zip(pts, pts[1:]):
        if hi.error_rate <= target:
            if hi.error_rate == 0:
                return hi.snr_db
            y0, y1 = math.log10(lo.error_rate), math.log10(hi.error_rate)
            frac = (y0 - math.log10(target)) / (y0 - y1)
            return lo.snr_db + frac * (hi.snr_db - lo.snr_db)
    return math.nan
