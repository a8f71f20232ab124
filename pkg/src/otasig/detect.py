"""
Pilot-free receivers.

Sequence schemes correlate coherently inside each OFDM symbol and add the
squared magnitudes across symbols, so an unknown channel phase per symbol
costs nothing. STS measures the energy on every tone of its band and hands
the matrix to the codeword-enumeration decoder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import ResourceGrid
from .sts import StsConfig, message_scores, top_indices


class DimensionMismatch(ValueError):
    pass


class BandOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class DetectionReport:
    scheme: str
    ranked_hypotheses: list[tuple[int, float]]
    detected_set: frozenset[int]

    @property
    def detected(self) -> list[int]:
        """Detected messages in rank order."""
        return [m for m, _ in self.ranked_hypotheses[:len(self.detected_set)]]


def _as_array(rx) -> np.ndarray:
    return rx.elements if isinstance(rx, ResourceGrid) else np.asarray(rx)


def _stack_codebook(codebook) -> np.ndarray:
    if isinstance(codebook, np.ndarray):
        return codebook
    return np.stack([_as_array(g) for g in codebook])


def correlation_scores(rx, codebook) -> np.ndarray:
    """
    Non-coherent correlation of ``rx`` against each codebook grid.

    ``score_k = sum_n |<rx[:, n], cand_k[:, n]>|**2``. ``rx`` may carry
    leading batch axes, giving scores of shape ``batch + (len(codebook),)``.
    """
    rx = _as_array(rx)
    cb = _stack_codebook(codebook)
    if cb.shape[1:] != rx.shape[-2:]:
        raise DimensionMismatch(f"rx {rx.shape[-2:]} vs codebook {cb.shape[1:]}")
    batch = rx.shape[:-2]
    S, N = rx.shape[-2:]
    rows = np.moveaxis(rx.reshape((-1, S, N)), -1, 0)
    scores = symbol_major_scores(rows, symbol_major_codebook(cb))
    return scores.reshape(batch + (len(cb),))


def symbol_major_codebook(codebook: np.ndarray) -> np.ndarray:
    """Conjugated codebook laid out ``(symbol, subcarrier, candidate)``."""
    return np.ascontiguousarray(np.transpose(np.conj(codebook), (2, 1, 0)))


def symbol_major_scores(rows: np.ndarray, cands: np.ndarray) -> np.ndarray:
    """
    Scores from symbol-major received data ``rows`` ``(symbol, batch, subcarrier)``
    against ``cands`` from :func:`symbol_major_codebook`; returns ``(batch, candidate)``.
    """
    # one GEMM per OFDM symbol; BLAS needs contiguous operands
    corr = np.ascontiguousarray(rows) @ cands
    power = corr.real ** 2
    power += corr.imag ** 2
    return power.sum(axis=0)


def _report(scheme: str, scores: np.ndarray, L: int) -> DetectionReport:
    order = top_indices(scores, len(scores))
    ranked = [(int(m), float(scores[m])) for m in order]
    return DetectionReport(scheme, ranked, frozenset(int(m) for m in order[:L]))


def detect_sequences(rx, codebook, L: int = 1, scheme: str = "sequence") -> DetectionReport:
    """Closed-set detection of the L best-correlating codebook entries."""
    cb = _stack_codebook(codebook)
    if not 1 <= L <= len(cb):
        raise ValueError(f"L must be in [1, {len(cb)}]")
    return _report(scheme, correlation_scores(rx, cb), L)


def tone_energy_matrix(rx, sts_band_offset: int, S: int) -> np.ndarray:
    """``|rx[offset + s, n]|**2`` over the S-subcarrier STS band."""
    rx = _as_array(rx)
    if sts_band_offset < 0 or sts_band_offset + S > rx.shape[-2]:
        raise BandOutOfRange(
            f"band [{sts_band_offset}, {sts_band_offset + S}) exceeds {rx.shape[-2]} subcarriers"
        )
    band = rx[..., sts_band_offset:sts_band_offset + S, :]
    return band.real ** 2 + band.imag ** 2


def detect_sts(rx, cfg: StsConfig, L: int = 1, sts_band_offset: int = 1) -> DetectionReport:
    """Decode the L most energetic STS codewords in the band starting at ``sts_band_offset``."""
    if not 1 <= L <= cfg.num_messages:
        raise ValueError(f"L must be in [1, {cfg.num_messages}]")
    energy = tone_energy_matrix(rx, sts_band_offset, cfg.S)
    if energy.shape[-1] < cfg.N:
        raise BandOutOfRange(f"rx has {energy.shape[-1]} symbols, code needs {cfg.N}")
    return _report("sts", message_scores(energy[..., :cfg.N], cfg), L)
