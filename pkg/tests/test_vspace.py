from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from listrec.frs import EnumerationLimit, encode, new_frs
from listrec.instance import make_instance
from listrec.recovery import code_space
from listrec.vspace import (AffineSpace, Subspace, affine, coordinate_zero_subspace, design_statistic,
                            enumerate_blocks, enumerate_subspace, member, restrict_affine,
                            solve_linear, span, translate_to_linear, zero_space)

V = (1, 0, 0, 0, 2, 3)  # symbols (1,0), (0,0), (2,3) over F_7


def brute_zero(H, i):
    s = H.s
    return {v for v in enumerate_subspace(H) if not any(v[i * s:(i + 1) * s])}


def brute_zero_code(H, i):
    s = H.s
    out = set()
    for block in enumerate_blocks(H):
        for row in block[~block[:, i * s:(i + 1) * s].any(axis=1)]:
            out.add(tuple(int(x) for x in row))
    return out


def test_span_examples():
    v = (1, 2, 3, 4)
    assert span([v, tuple(2 * x % 7 for x in v)], 7, 2, 2).dim == 1
    assert span([], 7, 2, 2).dim == 0
    assert span([(1, 0, 0, 0), (0, 0, 3, 0)], 7, 2, 2).dim == 2


def test_coordinate_zero_examples():
    H = span([V], 7, 3, 2)
    # coordinates are 0-based: the middle symbol is coordinate 1
    assert coordinate_zero_subspace(H, 1) == H
    assert coordinate_zero_subspace(H, 0).dim == 0
    # a nonzero f of degree < 2 cannot vanish at both points of a symbol
    whole = code_space(new_frs(13, 3, 2, 2))
    for i in range(3):
        Z = coordinate_zero_subspace(whole, i)
        assert Z.dim == 0
        assert set(enumerate_subspace(Z)) == brute_zero(whole, i)
    folded = code_space(new_frs(7, 2, 4, 3))
    for i in range(2):
        Z = coordinate_zero_subspace(folded, i)
        assert Z.dim == 1
        assert set(enumerate_subspace(Z)) == brute_zero_code(folded, i)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(0, 3))
def test_coordinate_zero_matches_brute_force(seed, r, i):
    rng = np.random.default_rng(seed)
    vecs = [tuple(int(x) for x in rng.integers(0, 5, size=8)) for _ in range(r)]
    H = span(vecs, 5, 4, 2)
    Z = coordinate_zero_subspace(H, i)
    assert set(enumerate_subspace(Z)) == brute_zero(H, i)


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(0, 6), min_size=6, max_size=6), min_size=1, max_size=4),
       st.integers(1, 6))
def test_rref_canonical(rows, lam):
    H1 = span(rows, 7, 3, 2)
    # a different generating set of the same space gives the same object
    mixed = [tuple((a + lam * b) % 7 for a, b in zip(rows[0], r)) for r in rows[1:]] + [rows[0]]
    H2 = span(list(reversed(mixed)), 7, 3, 2)
    assert H1 == H2 and hash(H1) == hash(H2)
    for row in rows:
        assert member(H1, row)


def test_solve_linear():
    x, null = solve_linear([[1, 2], [3, 4]], [5, 6], 7)
    assert (x[0] + 2 * x[1]) % 7 == 5 and (3 * x[0] + 4 * x[1]) % 7 == 6 and not null
    x, null = solve_linear([[1, 1], [2, 2]], [1, 3], 7)
    assert x is None
    x, null = solve_linear([[1, 1]], [0], 7)
    assert len(null) == 1


def test_member_examples():
    H = span([V], 7, 3, 2)
    assert member(H, (0,) * 6)
    assert not member(H, (1, 1, 0, 0, 2, 3))
    A = affine((1, 1, 1, 1, 1, 1), H)
    assert member(A, (1, 1, 1, 1, 1, 1))
    assert AffineSpace.from_json(A.to_json()) == A
    assert Subspace.from_json(H.to_json()) == H


def test_enumeration_counts():
    assert list(enumerate_subspace(zero_space(3, 2, 1))) == [(0, 0)]
    H = span([(1, 2)], 3, 2, 1)
    assert set(enumerate_subspace(H)) == {(0, 0), (1, 2), (2, 1)}
    H = span([(1, 0), (0, 1)], 5, 2, 1)
    assert len(set(enumerate_subspace(H))) == 25
    rows = np.concatenate(list(enumerate_blocks(H, block=7)))
    assert {tuple(int(x) for x in r) for r in rows} == set(enumerate_subspace(H))
    with pytest.raises(EnumerationLimit):
        list(enumerate_blocks(H, limit=10))


def test_design_statistic_examples():
    code = new_frs(13, 3, 2, 2)
    c = encode(code, [0, 1])  # no zero symbol
    assert design_statistic(span([c], 13, 3, 2)) == 0
    c = encode(code, [12, 1])
    z = sum(not any(c[i * 2:(i + 1) * 2]) for i in range(3))
    assert design_statistic(span([c], 13, 3, 2)) == Fraction(z, 3)
    with pytest.raises(ValueError):
        design_statistic(zero_space(13, 3, 2))


def test_restrict_affine_brute_force():
    code = new_frs(13, 3, 2, 2)
    A = affine((0,) * 6, code_space(code))
    y = encode(code, [4, 7])
    for i in range(3):
        B = restrict_affine(A, i, y[i * 2:(i + 1) * 2])
        assert B.dim == 0
        want = {v for v in enumerate_subspace(code_space(code)) if v[i * 2:(i + 1) * 2] == y[i * 2:(i + 1) * 2]}
        got = {tuple((a + b) % 13 for a, b in zip(B.offset, d)) for d in enumerate_subspace(B.direction)}
        assert got == want
    H = span([V], 7, 3, 2)
    assert restrict_affine(affine((0,) * 6, H), 1, (1, 0)) is None


def test_translate_to_linear():
    H = span([V], 7, 3, 2)
    inst = make_instance([[(1, 0)], [(0, 0)], [(2, 3), (1, 1)]])
    D, shifted, off = translate_to_linear(affine((0,) * 6, H), inst)
    assert D == H and shifted == inst and off == (0,) * 6
    A = affine((1, 1, 0, 0, 0, 0), H)
    D, shifted, off = translate_to_linear(A, inst)
    assert off == (0, 1, 0, 0, 5, 4)  # canonical representative modulo H
    assert shifted.lists[0] == frozenset({(1, 6)})
    assert shifted.lists[2] == frozenset({(4, 6), (3, 4)})
