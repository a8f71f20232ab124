import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from otasig.grid import (GridLargerThanFft, LengthMismatch, OfdmParams, ResourceGrid, from_time_domain,
                         make_grid, normalize_symbol_energy, read_iq, to_time_domain, write_iq)

P = OfdmParams()


def random_grid(seed, shape=(73, 14)):
    rng = np.random.default_rng(seed)
    return ResourceGrid(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def test_make_grid():
    g = make_grid(73, 14)
    assert g.energy() == 0
    assert (g.num_subcarriers, g.num_symbols) == (73, 14)
    assert g[0, 0] == 0j


def test_bounds_checked():
    g = make_grid(73, 14)
    with pytest.raises(IndexError):
        g[73, 0]
    with pytest.raises(IndexError):
        g[0, 14] = 1.0
    with pytest.raises(IndexError):
        g[-1, 0]


def test_default_params():
    assert P.sample_rate == 1.92e6
    assert P.cp_lengths[:7] == (10, 9, 9, 9, 9, 9, 9)
    assert min(P.cp_lengths) / P.sample_rate > 410e-9


def test_short_cp_rejected():
    with pytest.raises(ValueError):
        OfdmParams(cp_lengths=(0,))


def test_normalize_examples():
    sts = make_grid(73, 14)
    for n in range(14):
        sts[(5 * n) % 73, n] = 3.0 - 1j
    out = normalize_symbol_energy(sts, 1.0)
    assert np.allclose(np.abs(out.elements[out.elements != 0]), 1.0)
    seq = ResourceGrid(np.ones((73, 14), dtype=complex))
    assert np.allclose(np.abs(normalize_symbol_energy(seq, 1.0).elements), 1 / np.sqrt(73))


@settings(max_examples=50)
@given(st.integers(0, 2 ** 32 - 1), st.floats(0.01, 100))
def test_normalize_properties(seed, E):
    g = random_grid(seed)
    g.elements[:, 3] = 0
    once = normalize_symbol_energy(g, E)
    e = once.symbol_energies()
    assert e[3] == 0
    assert np.all(np.abs(np.delete(e, 3) / E - 1) <= 1e-12)
    twice = normalize_symbol_energy(once, E)
    assert np.allclose(twice.elements, once.elements, rtol=1e-13, atol=0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_round_trip_and_parseval(seed):
    g = random_grid(seed)
    x = to_time_domain(g, P)
    assert len(x) == P.symbol_lengths(14).sum()
    back = from_time_domain(x, P, 73)
    assert np.max(np.abs(back.elements - g.elements)) / np.max(np.abs(g.elements)) < 1e-10
    # strip CPs and compare energies
    body_energy = 0.0
    pos = 0
    for n in range(14):
        pos += P.cp_length(n)
        body_energy += np.sum(np.abs(x[pos:pos + 128]) ** 2)
        pos += 128
    assert abs(body_energy - g.energy()) <= 1e-10 * g.energy()


def test_single_tone_constant_modulus():
    g = make_grid(73, 14)
    g[40, 0] = 1.0
    x = to_time_domain(g, P)[:138]
    assert np.allclose(np.abs(x), 1 / np.sqrt(128))


def test_zero_and_impulse_streams():
    n = int(P.symbol_lengths(14).sum())
    assert from_time_domain(np.zeros(n), P).energy() == 0
    x = np.zeros(n, dtype=complex)
    x[10 + 5] = 1.0
    full = from_time_domain(x, P, num_subcarriers=128)
    assert full.energy() == pytest.approx(1.0, abs=1e-10)


def test_length_errors():
    with pytest.raises(LengthMismatch):
        from_time_domain(np.zeros(100), P)
    with pytest.raises(LengthMismatch):
        from_time_domain(np.zeros(0), P)
    with pytest.raises(GridLargerThanFft):
        to_time_domain(make_grid(129, 1), P)


@given(arrays(np.complex64, st.integers(1, 64), elements=st.complex_numbers(max_magnitude=1e3, width=64)))
def test_iq_file_round_trip(tmp_path_factory, samples):
    path = tmp_path_factory.mktemp("iq") / "x.iq"
    write_iq(path, samples)
    assert path.stat().st_size == 8 * samples.size
    assert np.array_equal(read_iq(path), samples.astype(np.complex128))


def test_grid_algebra():
    a, b = random_grid(1), random_grid(2)
    assert (a + b) == ResourceGrid(a.elements + b.elements)
    assert (a * 2).energy() == pytest.approx(4 * a.energy())
    c = a.copy()
    c[0, 0] = 99
    assert a[0, 0] != 99
