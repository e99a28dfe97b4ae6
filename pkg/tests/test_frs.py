import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from listrec.frs import (FrsCode, agreement_coordinates, encode, interpolate, iter_codeword_blocks,
                         new_frs, relative_distance, symbols, tau_frs, tau_value)


def test_new_frs_examples():
    c = new_frs(13, 3, 2, 2)
    assert c.gamma == 2 and c.alphas == (1, 4, 3)
    c = new_frs(7, 3, 2, 2)
    assert c.gamma == 3 and c.alphas == (1, 2, 4)


@pytest.mark.parametrize("args", [(11, 3, 2, 4), (15, 3, 2, 2), (13, 3, 0, 2), (13, 3, 7, 2)])
def test_new_frs_rejects(args):
    with pytest.raises(ValueError):
        new_frs(*args)


def test_encode_examples():
    code = new_frs(13, 3, 2, 2)
    assert encode(code, [0, 0]) == (0,) * 6
    assert symbols(encode(code, [0, 1]), 2) == [(1, 2), (4, 8), (3, 6)]
    assert encode(code, [5, 0]) == (5,) * 6


def test_json_roundtrip():
    code = new_frs(37, 8, 4, 4)
    assert FrsCode.from_json(code.to_json()) == code


@given(st.lists(st.integers(0, 36), min_size=4, max_size=4),
       st.lists(st.integers(0, 36), min_size=4, max_size=4), st.integers(0, 36))
def test_encode_linear(a, b, lam):
    code = new_frs(37, 8, 4, 4)
    mix = [(x + lam * y) % 37 for x, y in zip(a, b)]
    ea, eb = encode(code, a), encode(code, b)
    assert encode(code, mix) == tuple((x + lam * y) % 37 for x, y in zip(ea, eb))


def test_minimum_distance_exhaustive():
    code = new_frs(13, 3, 2, 2)
    zero = encode(code, [0, 0])
    worst = min(len(set(range(3)) - agreement_coordinates(encode(code, m), zero, 2))
                for m in itertools.product(range(13), repeat=2) if any(m))
    assert Fraction(worst, 3) == relative_distance(code)


def test_agreement_examples():
    code = new_frs(13, 3, 2, 2)
    c = encode(code, [3, 4])
    assert agreement_coordinates(c, c, 2) == {0, 1, 2}


def test_tau_examples():
    assert tau_value(4, Fraction(1, 8), 1) == Fraction(1, 8)
    assert tau_value(4, Fraction(1, 8), 2) == Fraction(1, 6)
    assert tau_value(4, Fraction(1, 8), 5) == 1
    code = new_frs(37, 8, 4, 4)
    taus = [tau_frs(code, r) for r in range(1, 8)]
    assert taus == sorted(taus)
    assert all(t >= code.rate - Fraction(1, code.n) for t in taus)


def test_codeword_blocks_enumerate_code():
    code = new_frs(13, 3, 2, 2)
    rows = np.concatenate(list(iter_codeword_blocks(code, block=50)))
    assert rows.shape == (169, 6)
    got = {tuple(int(x) for x in r) for r in rows}
    assert got == {encode(code, m) for m in itertools.product(range(13), repeat=2)}


@settings(max_examples=50)
@given(st.lists(st.integers(0, 36), min_size=8, max_size=8), st.data())
def test_interpolate_recovers(msg, data):
    code = new_frs(37, 4, 8, 4)
    c = encode(code, msg)
    coords = data.draw(st.lists(st.integers(0, 3), min_size=2, max_size=4, unique=True))
    syms = [c[i * 4:(i + 1) * 4] for i in coords]
    assert interpolate(code, coords, syms) == tuple(msg)
