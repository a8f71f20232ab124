"""
EPA tapped-delay-line Rayleigh fading and AWGN, applied per resource element.

Each tap's gain is a sum of sinusoids with Doppler shifts
``f_d * cos(theta_m)``. The M arrival angles are stratified around the
circle with a random common offset, and each sinusoid gets an independent
complex Gaussian weight, so the gain is exactly complex Gaussian at any
instant and its ensemble autocorrelation is ``J0(2*pi*f_d*tau)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import OfdmParams, ResourceGrid

SPEED_OF_LIGHT = 299_792_458.0

# 3GPP TS 36.101 Annex B.2.1, Extended Pedestrian A
EPA_DELAYS_NS = (0.0, 30.0, 70.0, 90.0, 110.0, 190.0, 410.0)
EPA_POWERS_DB = (0.0, -1.0, -2.0, -3.0, -8.0, -17.2, -20.8)

DEFAULT_CARRIER_HZ = 2.0e9
DEFAULT_SPEED_KMH = 3.0
DEFAULT_SINUSOIDS = 16


def doppler_from_speed(speed_kmh: float = DEFAULT_SPEED_KMH,
                       carrier_hz: float = DEFAULT_CARRIER_HZ) -> float:
    """Maximum Doppler shift in Hz."""
    return speed_kmh / 3.6 * carrier_hz / SPEED_OF_LIGHT


DEFAULT_DOPPLER_HZ = doppler_from_speed()


@dataclass(frozen=True)
class EpaProfile:
    """Power-delay profile; ``tap_delays`` in seconds, ``tap_powers`` in dB."""

    tap_delays: tuple[float, ...]
    tap_powers: tuple[float, ...]

    def __post_init__(self):
        d = np.asarray(self.tap_delays)
        if len(self.tap_delays) != len(self.tap_powers) or not len(d):
            raise ValueError("tap delays and powers must be non-empty and equal length")
        if d[0] != 0 or np.any(np.diff(d) <= 0):
            raise ValueError("tap delays must start at 0 and strictly increase")

    @property
    def num_taps(self) -> int:
        return len(self.tap_delays)

    @property
    def linear_powers(self) -> np.ndarray:
        p = 10.0 ** (np.asarray(self.tap_powers) / 10.0)
        return p / p.sum()


def epa_profile() -> EpaProfile:
    return EpaProfile(tuple(t * 1e-9 for t in EPA_DELAYS_NS), EPA_POWERS_DB)


def flat_profile() -> EpaProfile:
    """Single unit-power tap."""
    return EpaProfile((0.0,), (0.0,))


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """
    Frozen fading state for one transmitter-receiver link.

    ``weights`` and ``cos_angles`` have shape ``(num_taps, num_sinusoids)``;
    weights are unit-power per tap before the profile scaling.
    """

    profile: EpaProfile
    doppler_hz: float
    weights: np.ndarray
    cos_angles: np.ndarray

    def tap_gains(self, t) -> np.ndarray:
        """Complex tap gains at time(s) ``t``; shape ``(num_taps,) + shape(t)``."""
        t = np.asarray(t, dtype=np.float64)
        g = tap_gains_by_symbol(self.weights, self.cos_angles, self.doppler_hz, self.profile, t)
        return g.T.reshape((self.profile.num_taps,) + t.shape)


def cis(x) -> np.ndarray:
    """``exp(1j*x)`` for real ``x`` (cos/sin are much faster than complex exp)."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty(x.shape, dtype=np.complex128)
    np.cos(x, out=out.real)
    np.sin(x, out=out.imag)
    return out


def _phasor_sequence(freqs: np.ndarray, t: np.ndarray):
    """
    Yield ``exp(2j*pi*freqs*t_n)`` for each ``t_n``.

    When the spacing of ``t`` takes at most a few distinct values (OFDM symbol
    times) each phasor is the previous one times a precomputed step rotation.
    """
    d = np.diff(t)
    # group increments equal up to float jitter
    scale = np.max(np.abs(d)) if len(d) else 1.0
    _, first, which = np.unique(np.round(d / scale * 2.0 ** 32), return_index=True, return_inverse=True)
    steps = d[first]
    if len(t) > 32 or len(steps) > 4:
        for tn in t:
            yield cis(2 * np.pi * tn * freqs)
        return
    step_rot = [cis(2 * np.pi * d * freqs) for d in steps]
    rot = cis(2 * np.pi * t[0] * freqs)
    yield rot
    for k in which:
        rot = rot * step_rot[k]
        yield rot


def tap_gains_by_symbol(weights: np.ndarray, cos_angles: np.ndarray, doppler_hz: float,
                        profile: EpaProfile, t) -> np.ndarray:
    """
    Sum-of-sinusoids tap gains for arrays of realizations.

    ``weights``/``cos_angles`` have shape ``(..., num_taps, M)``; returns
    ``(len(t), ..., num_taps)``.
    """
    t = np.asarray(t, dtype=np.float64).reshape(-1)
    g = np.empty((len(t),) + weights.shape[:-1], dtype=np.complex128)
    # sinusoid axis first so the sum runs over contiguous slices
    w = np.ascontiguousarray(np.moveaxis(weights, -1, 0))
    rates = np.ascontiguousarray(np.moveaxis(doppler_hz * cos_angles, -1, 0))
    scratch = np.empty_like(w)
    for n, rot in enumerate(_phasor_sequence(rates, t)):
        np.multiply(rot, w, out=scratch)
        scratch.sum(axis=0, out=g[n])
    g *= np.sqrt(profile.linear_powers)
    return g


def fading_uniform_count(num_taps: int, num_sinusoids: int = DEFAULT_SINUSOIDS) -> int:
    """Uniform variates consumed by one link: an angle offset per tap plus two per sinusoid."""
    return num_taps * (1 + 2 * num_sinusoids)


def fading_from_uniforms(u: np.ndarray, num_taps: int,
                         num_sinusoids: int = DEFAULT_SINUSOIDS) -> tuple[np.ndarray, np.ndarray]:
    """
    Map ``(..., fading_uniform_count)`` uniforms to ``(weights, cos_angles)``,
    each ``(..., num_taps, num_sinusoids)``.

    Layout: ``num_taps`` angle offsets, then the magnitude and phase
    uniforms of the complex Gaussian weights.
    """
    M = num_sinusoids
    size = num_taps * M
    offsets = u[..., :num_taps]
    mag = u[..., num_taps:num_taps + size].reshape(u.shape[:-1] + (num_taps, M))
    phase = u[..., num_taps + size:num_taps + 2 * size].reshape(u.shape[:-1] + (num_taps, M))
    weights = gaussian_from_uniforms(mag, phase) * np.sqrt(1.0 / M)
    angles = 2 * np.pi * (np.arange(M) + offsets[..., np.newaxis]) / M
    return weights, np.cos(angles)


def draw_fading(rng: np.random.Generator, num_taps: int,
                num_sinusoids: int = DEFAULT_SINUSOIDS) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``(weights, cos_angles)`` for one link."""
    u = rng.random(fading_uniform_count(num_taps, num_sinusoids))
    return fading_from_uniforms(u, num_taps, num_sinusoids)


def make_epa_channel(seed, doppler_hz: float = DEFAULT_DOPPLER_HZ,
                     profile: EpaProfile | None = None,
                     num_sinusoids: int = DEFAULT_SINUSOIDS) -> ChannelRealization:
    """
    Draw one fading realization.

    ``seed`` may be an integer or a ``numpy.random.Generator``; a generator
    is advanced in place.
    """
    if doppler_hz < 0:
        raise ValueError("doppler_hz must be >= 0")
    if num_sinusoids < 16:
        raise ValueError("at least 16 sinusoids per tap are required")
    profile = profile or epa_profile()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    weights, cos_angles = draw_fading(rng, profile.num_taps, num_sinusoids)
    return ChannelRealization(profile, float(doppler_hz), weights, cos_angles)


def freq_response(chan: ChannelRealization, t, f_offset) -> np.ndarray:
    """
    ``H(f, t) = sum_l g_l(t) exp(-j 2 pi f tau_l)``.

    Returns shape ``shape(f_offset) + shape(t)``; scalars give a complex scalar.
    """
    f = np.asarray(f_offset, dtype=np.float64)
    g = chan.tap_gains(t)
    H = np.tensordot(steering(chan.profile, f), g, axes=([-1], [0]))
    return H[()] if H.ndim == 0 else H


def steering(profile: EpaProfile, f_offset) -> np.ndarray:
    """``exp(-j 2 pi f tau_l)``, shape ``shape(f_offset) + (num_taps,)``."""
    f = np.asarray(f_offset, dtype=np.float64)
    return cis(-2 * np.pi * f[..., np.newaxis] * np.asarray(profile.tap_delays))


def channel_matrix(chan: ChannelRealization, num_subcarriers: int, num_symbols: int,
                   p: OfdmParams | None = None) -> np.ndarray:
    """Per-RE channel ``(num_subcarriers, num_symbols)``, constant within each symbol."""
    p = p or OfdmParams()
    return freq_response(chan, p.symbol_mid_times(num_symbols), p.subcarrier_offsets(num_subcarriers))


def apply_channel(grid: ResourceGrid, chan: ChannelRealization,
                  p: OfdmParams | None = None) -> ResourceGrid:
    H = channel_matrix(chan, grid.num_subcarriers, grid.num_symbols, p)
    return ResourceGrid(grid.elements * H)


def noise_variance(snr_db: float, E_symbol: float = 1.0) -> float:
    """Per-element noise power for an OFDM-symbol SNR of ``snr_db``."""
    return E_symbol / 10.0 ** (snr_db / 10.0)


def gaussian_from_uniforms(u_mag: np.ndarray, u_phase: np.ndarray) -> np.ndarray:
    """
    Unit-power circularly-symmetric complex Gaussian from two uniforms on [0, 1):
    exponential power ``-ln(1 - u_mag)`` and uniform phase ``2*pi*u_phase``.
    """
    # float32 phases
    phase = (2 * np.pi * np.asarray(u_phase)).astype(np.float32)
    z = np.empty(phase.shape, dtype=np.complex128)
    z.real = np.cos(phase)
    z.imag = np.sin(phase)
    z *= np.sqrt(-np.log(1.0 - np.asarray(u_mag)))
    return z


def complex_gaussian(shape, rng: np.random.Generator) -> np.ndarray:
    """Unit-variance circularly-symmetric complex Gaussian samples."""
    u = rng.random((2,) + tuple(shape))
    return gaussian_from_uniforms(u[0], u[1])


def add_awgn(grid: ResourceGrid, snr_db: float, E_symbol: float,
             rng: np.random.Generator) -> ResourceGrid:
    if E_symbol <= 0:
        raise ValueError("E_symbol must be positive")
    sigma = np.sqrt(noise_variance(snr_db, E_symbol))
    return ResourceGrid(grid.elements + sigma * complex_gaussian(grid.shape, rng))
