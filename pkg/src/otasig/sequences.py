"""
Baseline signature families: Walsh-1024, Gold-1023 and Zadoff-Chu-1021.

Binary sequences are mapped antipodally (bit 0 -> +1, bit 1 -> -1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import NUM_SUBCARRIERS, NUM_SYMBOLS, ResourceGrid, make_grid, normalize_symbol_energy

WALSH_LENGTH = 1024
GOLD_DEGREE = 10
GOLD_LENGTH = 2 ** GOLD_DEGREE - 1
ZC_LENGTH = 1021

# recurrence taps: a[k+10] = XOR of a[k+t]; x^10+x^3+1 and x^10+x^8+x^3+x^2+1
GOLD_TAPS_1 = (3, 0)
GOLD_TAPS_2 = (8, 3, 2, 0)

SCHEMES = ("walsh", "gold", "zc")


class IndexOutOfRange(ValueError):
    pass


class InvalidRoot(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SignatureSequence:
    scheme: str
    index: int
    chips: np.ndarray

    def __len__(self):
        return len(self.chips)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def walsh(index: int, length: int = WALSH_LENGTH) -> SignatureSequence:
    """Row ``index`` of the Sylvester-ordered Hadamard matrix."""
    if length & (length - 1) or length < 1:
        raise ValueError("Walsh length must be a power of two")
    if not 0 <= index < length:
        raise IndexOutOfRange(f"Walsh index {index} outside [0, {length})")
    j = np.arange(length, dtype=np.uint32)
    parity = np.bitwise_count(j & np.uint32(index)) & 1
    return SignatureSequence("walsh", index, _frozen(1.0 - 2.0 * parity))


@lru_cache(maxsize=None)
def m_sequence(taps: tuple[int, ...], degree: int = GOLD_DEGREE) -> np.ndarray:
    """One period of the LFSR bit sequence seeded with the all-ones state."""
    period = 2 ** degree - 1
    bits = np.ones(period + degree, dtype=np.uint8)
    for k in range(period):
        b = 0
        for t in taps:
            b ^= bits[k + t]
        bits[k + degree] = b
    return _frozen(bits[:period].copy())


def gold(index: int) -> SignatureSequence:
    """
    Member ``index`` of the degree-10 Gold family.

    Indices 0..1022 give ``m1 XOR (m2 advanced by index)``; 1023 and 1024
    return the two parent m-sequences.
    """
    if not 0 <= index < GOLD_LENGTH + 2:
        raise IndexOutOfRange(f"Gold index {index} outside [0, {GOLD_LENGTH + 2})")
    m1 = m_sequence(GOLD_TAPS_1)
    m2 = m_sequence(GOLD_TAPS_2)
    if index == GOLD_LENGTH:
        bits = m1
    elif index == GOLD_LENGTH + 1:
        bits = m2
    else:
        bits = m1 ^ np.roll(m2, -index)
    return SignatureSequence("gold", index, _frozen(1.0 - 2.0 * bits))


def zadoff_chu(root: int, length: int = ZC_LENGTH) -> SignatureSequence:
    """Odd-length Zadoff-Chu sequence ``exp(-j*pi*root*n*(n+1)/length)``."""
    if not 1 <= root < length or np.gcd(root, length) != 1:
        raise InvalidRoot(f"root {root} must be in [1, {length}) and coprime with {length}")
    n = np.arange(length, dtype=np.int64)
    # reduce the phase index modulo 2*length before scaling to keep full precision
    phase = (root * n * (n + 1)) % (2 * length)
    return SignatureSequence("zc", root, _frozen(np.exp(-1j * np.pi * phase / length)))


def signature(scheme: str, message: int) -> SignatureSequence:
    """Codebook entry for ``message``: Walsh/Gold by index, ZC by root ``message + 1``."""
    if scheme == "walsh":
        return walsh(message)
    if scheme == "gold":
        return gold(message)
    if scheme == "zc":
        return zadoff_chu(message + 1)
    raise ValueError(f"unknown sequence scheme {scheme!r}")


def map_sequence_to_grid(seq: SignatureSequence, grid: ResourceGrid,
                         amplitude: float = 1.0) -> ResourceGrid:
    """Place chips frequency-first; extra chips are dropped, missing ones left at zero."""
    num_re = grid.num_subcarriers * grid.num_symbols
    chips = np.asarray(seq.chips)[:num_re]
    flat = grid.elements.T.reshape(-1).copy()
    flat[:len(chips)] = amplitude * chips
    return ResourceGrid(flat.reshape(grid.num_symbols, grid.num_subcarriers).T)


@lru_cache(maxsize=None)
def codebook_grids(scheme: str, size: int = 64, subcarriers: int = NUM_SUBCARRIERS,
                   symbols: int = NUM_SYMBOLS) -> np.ndarray:
    """``(size, subcarriers, symbols)`` stack of mapped signatures, unit energy per symbol."""
    out = np.empty((size, subcarriers, symbols), dtype=np.complex128)
    for m in range(size):
        grid = map_sequence_to_grid(signature(scheme, m), make_grid(subcarriers, symbols))
        out[m] = normalize_symbol_energy(grid, 1.0).elements
    return _frozen(out)
