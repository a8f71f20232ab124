import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from otasig.grid import make_grid
from otasig.sequences import (GOLD_LENGTH, GOLD_TAPS_1, GOLD_TAPS_2, IndexOutOfRange, InvalidRoot, codebook_grids,
                              gold, m_sequence, map_sequence_to_grid, signature, walsh, zadoff_chu)


def periodic_xcorr(a, b):
    """``r[k] = sum_n a[n] * conj(b[n - k])`` via FFT."""
    return np.fft.ifft(np.fft.fft(a) * np.conj(np.fft.fft(b)))


def sylvester(n):
    H = np.array([[1.0]])
    while len(H) < n:
        H = np.block([[H, H], [H, -H]])
    return H


def test_lengths_and_unit_modulus():
    for seq, n in ((walsh(3), 1024), (gold(17), 1023), (zadoff_chu(5), 1021)):
        assert len(seq) == n
        assert np.allclose(np.abs(seq.chips), 1.0, atol=1e-12)


def test_walsh_examples():
    assert np.all(walsh(0).chips == 1)
    assert np.array_equal(walsh(1).chips, np.tile([1.0, -1.0], 512))


def test_walsh_matches_recursive_hadamard():
    H = sylvester(1024)
    for i in range(1024):
        assert np.array_equal(walsh(i).chips, H[i])


def test_walsh_rows_orthogonal():
    W = np.stack([walsh(i).chips for i in range(1024)])
    assert np.array_equal(W @ W.T, 1024 * np.eye(1024))


def test_truncated_walsh_inner_products():
    idx = list(range(64)) + [511, 512, 1022, 1023]
    raw = np.stack([map_sequence_to_grid(walsh(i), make_grid(73, 14)).elements.reshape(-1) for i in idx])
    G = raw @ raw.T
    assert np.max(np.abs(G[~np.eye(len(idx), dtype=bool)])) <= 2
    assert np.any(G[~np.eye(len(idx), dtype=bool)] != 0)


def test_walsh_index_range():
    with pytest.raises(IndexOutOfRange):
        walsh(1024)
    with pytest.raises(IndexOutOfRange):
        walsh(-1)


def test_m_sequences_balanced_and_two_valued():
    for taps in (GOLD_TAPS_1, GOLD_TAPS_2):
        bits = m_sequence(taps)
        assert bits.sum() == 512
        a = 1.0 - 2.0 * bits
        r = np.rint(periodic_xcorr(a, a).real)
        assert r[0] == GOLD_LENGTH
        assert np.all(r[1:] == -1)


def test_gold_parents_and_index_range():
    assert np.array_equal(gold(1023).chips, 1.0 - 2.0 * m_sequence(GOLD_TAPS_1))
    assert np.array_equal(gold(1024).chips, 1.0 - 2.0 * m_sequence(GOLD_TAPS_2))
    with pytest.raises(IndexOutOfRange):
        gold(1025)


def test_gold_family_three_valued_exhaustive():
    X = np.stack([gold(i).chips for i in range(GOLD_LENGTH + 2)])
    F = np.fft.rfft(X, axis=1).astype(np.complex64)
    seen = set()
    for i in range(len(X) - 1):
        c = np.fft.irfft(F[i + 1:] * np.conj(F[i]), n=GOLD_LENGTH, axis=1)
        r = np.rint(c)
        assert np.max(np.abs(c - r)) < 0.05
        seen |= set(np.unique(r).astype(int).tolist())
    assert seen <= {-1, -65, 63}


def test_zc_cazac():
    for root in (1, 2, 25, 64, 1020):
        x = zadoff_chu(root).chips
        r = periodic_xcorr(x, x)
        assert abs(r[0]) == pytest.approx(1021)
        assert np.max(np.abs(r[1:])) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 1020), st.integers(1, 1020))
def test_zc_cross_correlation_magnitude(r1, r2):
    if r1 == r2:
        return
    c = periodic_xcorr(zadoff_chu(r1).chips, zadoff_chu(r2).chips)
    assert np.allclose(np.abs(c), np.sqrt(1021), atol=1e-8)


def test_zc_invalid_roots():
    for root in (0, 1021, -3):
        with pytest.raises(InvalidRoot):
            zadoff_chu(root)


def test_zc_large_index_precision():
    # phase reduced before scaling: compare against exact rational phase from Python ints
    x = zadoff_chu(1019).chips
    n = 1020
    exact = np.exp(-1j * np.pi * ((1019 * n * (n + 1)) % 2042) / 1021)
    assert abs(x[n] - exact) < 1e-15


def test_mapping_rules():
    zc = map_sequence_to_grid(zadoff_chu(1), make_grid(73, 14))
    assert np.count_nonzero(zc.elements) == 1021
    assert zc[72, 13] == 0
    assert zc.energy() == pytest.approx(1021)
    w = map_sequence_to_grid(walsh(5), make_grid(73, 14), amplitude=2.0)
    assert np.array_equal(w.elements.T.reshape(-1), 2.0 * walsh(5).chips[:1022])
    assert w.energy() == pytest.approx(4 * 1022)


def test_frequency_first_order():
    g = map_sequence_to_grid(gold(9), make_grid(73, 14))
    assert np.array_equal(g.elements[:, 0], gold(9).chips[:73])
    assert np.array_equal(g.elements[:, 1], gold(9).chips[73:146])


def test_codebook_entries():
    assert signature("zc", 0).index == 1
    assert signature("gold", 63).index == 63
    for scheme in ("walsh", "gold", "zc"):
        cb = codebook_grids(scheme, 64)
        assert cb.shape == (64, 73, 14)
        assert np.allclose((np.abs(cb) ** 2).sum(axis=1), 1.0)


def test_deterministic():
    assert np.array_equal(gold(100).chips, gold(100).chips)
    assert zadoff_chu(77).chips.tobytes() == zadoff_chu(77).chips.tobytes()
