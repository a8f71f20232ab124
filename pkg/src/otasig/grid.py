"""
OFDM resource grid and the (optional) time-domain waveform path.

A grid is indexed ``[subcarrier, symbol]``. Subcarriers are contiguous and
centred on DC: with 73 subcarriers, index 36 sits on the DC bin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

NUM_SUBCARRIERS = 73
NUM_SYMBOLS = 14

# longest EPA excess delay; every cyclic prefix must outlast it
MAX_DELAY_SPREAD = 410e-9


class GridTooSmall(ValueError):
    pass


class GridLargerThanFft(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class ResourceGrid:
    """Complex ``(num_subcarriers, num_symbols)`` matrix of resource elements."""

    def __init__(self, elements):
        elements = np.array(elements, dtype=np.complex128)
        if elements.ndim != 2 or 0 in elements.shape:
            raise ValueError(f"grid must be a non-empty 2-D array, got shape {elements.shape}")
        self._elements = elements

    @property
    def elements(self) -> np.ndarray:
        return self._elements

    @property
    def shape(self) -> tuple[int, int]:
        return self._elements.shape

    @property
    def num_subcarriers(self) -> int:
        return self._elements.shape[0]

    @property
    def num_symbols(self) -> int:
        return self._elements.shape[1]

    def _check(self, key):
        s, n = key
        if not (0 <= s < self.num_subcarriers and 0 <= n < self.num_symbols):
            raise IndexError(f"resource element {key} outside {self.shape} grid")

    def __getitem__(self, key):
        self._check(key)
        return self._elements[key]

    def __setitem__(self, key, value):
        self._check(key)
        self._elements[key] = value

    def __add__(self, other: ResourceGrid) -> ResourceGrid:
        if self.shape != other.shape:
            raise ValueError(f"grid shapes differ: {self.shape} vs {other.shape}")
        return ResourceGrid(self._elements + other._elements)

    def __mul__(self, scalar) -> ResourceGrid:
        return ResourceGrid(self._elements * scalar)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ResourceGrid) and np.array_equal(self._elements, other._elements)

    def __repr__(self):
        return f"ResourceGrid({self.num_subcarriers}x{self.num_symbols}, energy={self.energy():.4g})"

    def copy(self) -> ResourceGrid:
        return ResourceGrid(self._elements.copy())

    def energy(self) -> float:
        return float(np.sum(np.abs(self._elements) ** 2))

    def symbol_energies(self) -> np.ndarray:
        return np.sum(np.abs(self._elements) ** 2, axis=0)


def make_grid(subcarriers: int = NUM_SUBCARRIERS, symbols: int = NUM_SYMBOLS) -> ResourceGrid:
    if subcarriers < 1 or symbols < 1:
        raise ValueError("grid dimensions must be >= 1")
    return ResourceGrid(np.zeros((subcarriers, symbols), dtype=np.complex128))


def normalize_symbol_energy(grid: ResourceGrid, E: float = 1.0) -> ResourceGrid:
    """Scale every non-empty OFDM symbol (column) to energy ``E``; empty columns stay zero."""
    col_energy = grid.symbol_energies()
    scale = np.zeros_like(col_energy)
    nz = col_energy > 0
    scale[nz] = np.sqrt(E / col_energy[nz])
    return ResourceGrid(grid.elements * scale[np.newaxis, :])


def _lte_normal_cp() -> tuple[int, ...]:
    # 128-point FFT: 10 samples on the first symbol of each slot, 9 elsewhere
    return (10, 9, 9, 9, 9, 9, 9) * 2


@dataclass(frozen=True)
class OfdmParams:
    """
    Numerology of the OFDM layer.

    ``cp_lengths`` lists per-symbol cyclic-prefix lengths in samples and
    repeats cyclically for grids with more symbols.
    """

    fft_size: int = 128
    subcarrier_spacing: float = 15e3
    cp_lengths: tuple[int, ...] = field(default_factory=_lte_normal_cp)

    def __post_init__(self):
        if self.fft_size < 1 or self.subcarrier_spacing <= 0 or not self.cp_lengths:
            raise ValueError("invalid OFDM numerology")
        min_cp = min(self.cp_lengths) / self.sample_rate
        if min_cp <= MAX_DELAY_SPREAD:
            raise ValueError(
                f"cyclic prefix {min_cp * 1e9:.0f} ns does not exceed the "
                f"{MAX_DELAY_SPREAD * 1e9:.0f} ns delay spread"
            )

    @property
    def sample_rate(self) -> float:
        return self.fft_size * self.subcarrier_spacing

    def cp_length(self, symbol: int) -> int:
        return self.cp_lengths[symbol % len(self.cp_lengths)]

    def symbol_lengths(self, num_symbols: int) -> np.ndarray:
        return np.array([self.fft_size + self.cp_length(n) for n in range(num_symbols)])

    def symbol_mid_times(self, num_symbols: int = NUM_SYMBOLS) -> np.ndarray:
        """Centre of each symbol's useful (post-CP) part, in seconds from subframe start."""
        starts = np.concatenate([[0], np.cumsum(self.symbol_lengths(num_symbols))[:-1]])
        cps = np.array([self.cp_length(n) for n in range(num_symbols)])
        return (starts + cps + self.fft_size / 2) / self.sample_rate

    def subcarrier_offsets(self, num_subcarriers: int = NUM_SUBCARRIERS) -> np.ndarray:
        """Frequency of each grid subcarrier relative to the carrier, in Hz."""
        return (np.arange(num_subcarriers) - num_subcarriers // 2) * self.subcarrier_spacing

    def fft_bins(self, num_subcarriers: int) -> np.ndarray:
        if num_subcarriers > self.fft_size:
            raise GridLargerThanFft(f"{num_subcarriers} subcarriers do not fit a {self.fft_size}-point FFT")
        return (np.arange(num_subcarriers) - num_subcarriers // 2) % self.fft_size


def to_time_domain(grid: ResourceGrid, p: OfdmParams | None = None) -> np.ndarray:
    """OFDM-modulate ``grid`` (unitary IFFT, CP prepended), symbols concatenated."""
    p = p or OfdmParams()
    bins = p.fft_bins(grid.num_subcarriers)
    out = []
    for n in range(grid.num_symbols):
        spectrum = np.zeros(p.fft_size, dtype=np.complex128)
        spectrum[bins] = grid.elements[:, n]
        body = np.fft.ifft(spectrum, norm="ortho")
        cp = p.cp_length(n)
        out.append(body[p.fft_size - cp:] if cp else body[:0])
        out.append(body)
    return np.concatenate(out)


def from_time_domain(samples, p: OfdmParams | None = None,
                     num_subcarriers: int = NUM_SUBCARRIERS) -> ResourceGrid:
    """Inverse of :func:`to_time_domain` for an integer number of symbols."""
    p = p or OfdmParams()
    samples = np.asarray(samples, dtype=np.complex128)
    bins = p.fft_bins(num_subcarriers)
    cols = []
    pos = 0
    n = 0
    while pos < len(samples):
        cp = p.cp_length(n)
        end = pos + cp + p.fft_size
        if end > len(samples):
            raise LengthMismatch(f"{len(samples)} samples is not a whole number of OFDM symbols")
        spectrum = np.fft.fft(samples[pos + cp:end], norm="ortho")
        cols.append(spectrum[bins])
        pos = end
        n += 1
    if not cols:
        raise LengthMismatch("empty sample stream")
    return ResourceGrid(np.stack(cols, axis=1))


def write_iq(path, samples) -> None:
    """Write interleaved little-endian float32 I/Q."""
    samples = np.asarray(samples)
    iq = np.empty(2 * samples.size, dtype="<f4")
    iq[0::2] = samples.real
    iq[1::2] = samples.imag
    Path(path).write_bytes(iq.tobytes())


def read_iq(path) -> np.ndarray:
    iq = np.frombuffer(Path(path).read_bytes(), dtype="<f4")
    if iq.size % 2:
        raise LengthMismatch(f"{path}: odd number of float32 values")
    return iq[0::2].astype(np.float64) + 1j * iq[1::2].astype(np.float64)
