"""
Single-tone signaling (STS): in each OFDM symbol exactly one subcarrier of
an S-subcarrier band is energized, and its index carries the code symbol.

A message ``M < S**K`` is split into K base-S digits ``u``; the codeword is
the evaluation of ``p(x) = u_1 x + u_2 x^2 + ... + u_K x^K`` over GF(S) at
the N points ``beta**n``, ``beta = alpha**((S-1)/N)``. Because ``p`` has no
constant term, two distinct messages collide on at most K-1 of the N tones.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .gf import GfElement, GfField, gf_pow, make_field, mult_order
from .grid import GridTooSmall, ResourceGrid


class IncompatibleRate(ValueError):
    pass


class MessageOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class StsConfig:
    """
    Code parameters.

    Parameters
    ----------
    field : GfField
        GF(S); S is also the number of subcarriers in the STS band.
    K : int
        Information symbols per message.
    N : int
        Code symbols, one per OFDM symbol. Must divide S-1.
    """

    field: GfField
    K: int = 1
    N: int = 14

    def __post_init__(self):
        S = self.field.modulus
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if (S - 1) % self.N:
            raise IncompatibleRate(f"N={self.N} does not divide S-1={S - 1}")
        # the padded input [0, u_1..u_K, 0...] needs K+1 slots
        if self.K + 1 > self.N:
            raise IncompatibleRate(f"K={self.K} needs N >= K+1, got N={self.N}")

    @property
    def S(self) -> int:
        return self.field.modulus

    @property
    def beta(self) -> GfElement:
        return gf_pow(self.field.primitive, (self.S - 1) // self.N)

    @property
    def num_messages(self) -> int:
        return self.S ** self.K

    @cached_property
    def codebook(self) -> np.ndarray:
        """``(S**K, N)`` table of codewords, row M encodes message M."""
        digits = _digit_table(self.num_messages, self.S, self.K)
        G = build_generator(self)
        table = (digits @ G[1:self.K + 1, :]) % self.S
        table.setflags(write=False)
        return table


def make_sts_config(S: int = 71, K: int = 1, N: int = 14) -> StsConfig:
    return StsConfig(make_field(S), K, N)


@dataclass(frozen=True)
class StsMessage:
    M: int
    u: tuple[int, ...]


@dataclass(frozen=True)
class StsCodeword:
    c: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.c)

    def elements(self, field: GfField) -> list[GfElement]:
        return [field(v) for v in self.c]


def _digit_table(count: int, S: int, K: int) -> np.ndarray:
    m = np.arange(count, dtype=np.int64)
    return np.stack([(m // S ** k) % S for k in range(K)], axis=1)


def digits_from_message(M: int, cfg: StsConfig) -> StsMessage:
    """Base-S digits of ``M``, least-significant first."""
    if not 0 <= M < cfg.num_messages:
        raise MessageOutOfRange(f"message {M} outside [0, {cfg.num_messages})")
    u = tuple((M // cfg.S ** k) % cfg.S for k in range(cfg.K))
    return StsMessage(M, u)


def message_from_digits(u, cfg: StsConfig) -> StsMessage:
    u = tuple(int(x) for x in u)
    if len(u) != cfg.K or any(not 0 <= x < cfg.S for x in u):
        raise MessageOutOfRange(f"digits {u} invalid for S={cfg.S}, K={cfg.K}")
    return StsMessage(sum(x * cfg.S ** k for k, x in enumerate(u)), u)


def build_generator(cfg: StsConfig) -> np.ndarray:
    """N x N Vandermonde matrix ``G[m, n] = beta**(m*n)`` as integers mod S."""
    beta = cfg.beta
    if mult_order(beta) != cfg.N:
        raise IncompatibleRate(f"beta={beta} has order {mult_order(beta)}, expected {cfg.N}")
    idx = np.arange(cfg.N)
    return np.array([[gf_pow(beta, int(e) % cfg.N).value for e in row]
                     for row in np.outer(idx, idx)], dtype=np.int64)


def sts_encode(msg: StsMessage, cfg: StsConfig) -> StsCodeword:
    """``c = G @ [0, u_1, ..., u_K, 0, ..., 0]`` over GF(S)."""
    if len(msg.u) != cfg.K:
        raise MessageOutOfRange(f"message has {len(msg.u)} digits, config expects K={cfg.K}")
    padded = np.zeros(cfg.N, dtype=np.int64)
    padded[1:cfg.K + 1] = msg.u
    c = (build_generator(cfg) @ padded) % cfg.S
    return StsCodeword(tuple(int(v) for v in c))


def map_to_grid(c: StsCodeword, grid: ResourceGrid, subcarrier_offset: int = 0,
                amplitude: float = 1.0) -> ResourceGrid:
    """Energize subcarrier ``offset + c_n`` of symbol n with a real, unmodulated tone."""
    N = c.N
    S_needed = subcarrier_offset + max(c.c) + 1
    if subcarrier_offset < 0 or grid.num_symbols < N or grid.num_subcarriers < S_needed:
        raise GridTooSmall(
            f"{grid.shape} grid cannot hold {N} tones at offset {subcarrier_offset}"
        )
    out = grid.copy()
    for n, s in enumerate(c.c):
        out[subcarrier_offset + s, n] = amplitude
    return out


def message_scores(scores: np.ndarray, cfg: StsConfig) -> np.ndarray:
    """Soft score of every message: the energy its codeword's tones collected."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape[-2:] != (cfg.S, cfg.N):
        raise ValueError(f"score matrix must be ({cfg.S}, {cfg.N}), got {scores.shape}")
    cols = np.arange(cfg.N)
    return scores[..., cfg.codebook, cols].sum(axis=-1)


def top_indices(values: np.ndarray, L: int) -> np.ndarray:
    """Indices of the L largest values; ties go to the smaller index."""
    return np.argsort(-np.asarray(values), axis=-1, kind="stable")[..., :L]


def sts_decode(scores, cfg: StsConfig, L: int = 1) -> list[StsMessage]:
    """Rank all S**K messages by collected tone energy and return the best L."""
    if not 1 <= L <= cfg.num_messages:
        raise ValueError(f"L must be in [1, {cfg.num_messages}]")
    best = top_indices(message_scores(scores, cfg), L)
    return [digits_from_message(int(m), cfg) for m in best]
