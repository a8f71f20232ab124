import random

import pytest
from hypothesis import given, strategies as st

from otasig.gf import (DivisionByZero, FieldMismatch, GfElement, GfField, NonPrimeModulus, ZeroElement, gf_arith,
                       gf_pow, is_prime, make_field, mult_order)

FIELDS = (3, 5, 7, 11, 71)


def test_make_field_71():
    F = make_field(71)
    assert F.modulus == 71
    assert F.alpha == 7


def test_make_field_3():
    assert make_field(3).alpha == 2


@pytest.mark.parametrize("S", [0, 1, 2, 4, 9, 15, 69, 72])
def test_non_prime_rejected(S):
    with pytest.raises(NonPrimeModulus):
        make_field(S)


def test_non_primitive_alpha_rejected():
    with pytest.raises(ValueError):
        GfField(71, 2)  # order 35


def test_smallest_generator_matches_bruteforce():
    for S in [p for p in range(3, 200) if is_prime(p)]:
        gens = [g for g in range(2, S) if len({pow(g, e, S) for e in range(1, S)}) == S - 1]
        assert make_field(S).alpha == gens[0]


def test_small_examples():
    F7, F71 = make_field(7), make_field(71)
    assert gf_arith(F7(3), F7(5), "mul") == F7(1)
    assert gf_arith(F7(1), F7(3), "div") == F7(5)
    assert gf_arith(F71(51), F71(51), "mul") == F71(45)
    assert gf_pow(F71(7), 5) == F71(51)


def test_pow_edges():
    F = make_field(11)
    for a in F.elements():
        assert gf_pow(a, 0) == F(1)
        assert gf_pow(a, 1) == a


def test_mult_order_examples():
    F = make_field(71)
    assert mult_order(F(7)) == 70
    assert mult_order(F(51)) == 14
    assert mult_order(F(1)) == 1
    with pytest.raises(ZeroElement):
        mult_order(F(0))


def test_division_by_zero():
    F = make_field(7)
    with pytest.raises(DivisionByZero):
        gf_arith(F(3), F(0), "div")
    with pytest.raises(ZeroDivisionError):
        F(3) / 0


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        gf_arith(make_field(7)(1), make_field(11)(1), "add")


def test_element_range():
    F = make_field(7)
    assert F(9) == F(2) and F(-1) == F(6)
    with pytest.raises(ValueError):
        GfElement(7, F)


@pytest.mark.parametrize("S", FIELDS)
def test_field_axioms_random_triples(S):
    F = make_field(S)
    rnd = random.Random(S)
    zero, one = F(0), F(1)
    for _ in range(10_000):
        a, b, c = (F(rnd.randrange(S)) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + zero == a and a * one == a
        assert a + (-a) == zero
        assert a - b == a + (-b)
        if a != zero:
            assert a * a.inverse() == one
            assert (b / a) * a == b


@pytest.mark.parametrize("S", FIELDS)
def test_fermat_and_primitive_order(S):
    F = make_field(S)
    for a in F.elements()[1:]:
        assert gf_pow(a, S - 1) == F(1)
    assert mult_order(F.primitive) == S - 1


@given(st.sampled_from(FIELDS), st.integers(0, 10_000), st.integers(0, 200))
def test_pow_matches_repeated_multiplication(S, v, e):
    F = make_field(S)
    a = F(v % S)
    acc = F(1)
    for _ in range(e):
        acc = acc * a
    assert gf_pow(a, e) == acc


@given(st.sampled_from(FIELDS), st.integers(1, 10_000))
def test_mult_order_is_minimal(S, v):
    F = make_field(S)
    a = F(1 + v % (S - 1))
    k = mult_order(a)
    assert (S - 1) % k == 0
    assert gf_pow(a, k) == F(1)
    assert all(gf_pow(a, j) != F(1) for j in range(1, k))
