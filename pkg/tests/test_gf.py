import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from listrec.gf import (FieldElement, ModulusMismatch, add, find_primitive_root, inv, inv_mod,
                        is_prime, mul, power, radd, rcmp, rmul, to_rational)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def F(x, q):
    return FieldElement(x, q)


def brute_order(g, q):
    x, k = g % q, 1
    while x != 1:
        x, k = x * g % q, k + 1
    return k


def test_examples():
    assert add(F(3, 7), F(5, 7)) == F(1, 7)
    assert add(F(6, 7), F(1, 7)) == F(0, 7)
    assert mul(F(3, 7), F(5, 7)) == F(1, 7)
    assert inv(F(3, 7)) == F(5, 7)
    assert power(F(2, 13), 4) == F(3, 13)
    assert power(F(2, 37), 36) == F(1, 37)
    assert power(F(0, 5), 0) == F(1, 5)
    with pytest.raises(ZeroDivisionError):
        inv(F(0, 7))


@pytest.mark.parametrize("q", SMALL_PRIMES)
def test_field_axioms_exhaustive(q):
    els = [F(x, q) for x in range(q)]
    zero, one = F(0, q), F(1, q)
    for a in els:
        assert add(a, zero) == a and mul(a, one) == a and mul(a, zero) == zero
        if a != zero:
            assert mul(a, inv(a)) == one
    for a, b in itertools.product(els, repeat=2):
        assert add(a, b) == add(b, a)
        assert mul(a, b) == mul(b, a)
    for a, b, c in itertools.product(els, repeat=3):
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
        assert add(add(a, b), c) == add(a, add(b, c))


@given(st.sampled_from([37, 101, 65537, 2**31 - 1]), st.integers(0, 10**9),
       st.integers(0, 10**9), st.integers(0, 200))
def test_pow_matches_builtin(q, a, b, e):
    x, y = F(a % q, q), F(b % q, q)
    assert power(x, e).value == pow(a % q, e, q)
    assert mul(x, y).value == (a * b) % q
    if a % q:
        assert inv_mod(a, q) * a % q == 1


def test_mixed_moduli_rejected():
    with pytest.raises(ModulusMismatch):
        add(F(1, 7), F(1, 11))


@pytest.mark.parametrize("q,g", [(7, 3), (13, 2), (37, 2)])
def test_primitive_root_examples(q, g):
    assert find_primitive_root(q).value == g


def test_primitive_roots_up_to_200():
    for q in range(3, 200):
        if not is_prime(q):
            continue
        g = find_primitive_root(q).value
        assert brute_order(g, q) == q - 1
        assert all(brute_order(h, q) < q - 1 for h in range(2, g))


@pytest.mark.parametrize("q", [1, 2, 15, 2**31 + 11])
def test_primitive_root_bad_modulus(q):
    with pytest.raises(ValueError):
        find_primitive_root(q)


def test_rationals():
    assert radd(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert rmul(Fraction(1, 4), Fraction(2, 3)) == Fraction(1, 6)
    assert rcmp(Fraction(3, 4), Fraction(6, 8)) == 0
    assert rcmp(Fraction(1, 3), Fraction(1, 2)) == -1
    assert to_rational("3/8") == Fraction(3, 8)
    with pytest.raises(TypeError):
        to_rational(0.5)
