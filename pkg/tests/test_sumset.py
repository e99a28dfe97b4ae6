
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from listrec.frs import new_frs
from listrec.instance import make_instance
from listrec.sumset import (SumSet, enumerate_sumset, independence_positions, reduce,
                            shift_sumset, sumset_member)
from listrec.verify import structured_subspace
from listrec.vspace import coordinate_zero_subspace, enumerate_subspace, span, zero_space


def agreement_set(H, T, inst):
    s = H.s
    return {v for v in enumerate_subspace(H) if all(v[t * s:(t + 1) * s] in inst.lists[t] for t in T)}


def test_small_example():
    H = span([(1, 1)], 3, 2, 1)
    inst = make_instance([[(1,), (2,)], [(0,)]], ell=2)
    P = reduce(H, {0}, inst)
    assert P.summands == (((1, 1), (2, 2)),)
    assert enumerate_sumset(P) >= agreement_set(H, {0}, inst) == {(1, 1), (2, 2)}


def test_empty_T():
    P = reduce(zero_space(3, 2, 1), (), make_instance([[(0,)], [(0,)]]))
    assert P.summands == () and enumerate_sumset(P) == {(0, 0)}
    assert sumset_member(P, (0, 0)) and not sumset_member(P, (1, 0))


def test_enumerate_examples():
    a, b = (1, 0, 0), (0, 2, 0)
    assert enumerate_sumset(SumSet(((a,),), 1, 1, 5, 3)) == {a}
    assert enumerate_sumset(SumSet(((a,), (b,)), 2, 1, 5, 3)) == {(1, 2, 0)}
    P = SumSet(((a, b), ((0, 0, 1), (0, 0, 2), (0, 0, 3))), 2, 3, 5, 3)
    out = enumerate_sumset(P)
    assert len(out) <= 6
    assert all(sumset_member(P, v) for v in out)
    assert not sumset_member(P, (4, 4, 4))


def test_declared_shape_enforced():
    with pytest.raises(ValueError):
        SumSet((((1,),), ((2,),)), 1, 1, 5, 1)
    with pytest.raises(ValueError):
        SumSet((((1,), (2,)),), 1, 1, 5, 1)


def test_reduce_rejects_large_T():
    H = span([(1, 1)], 3, 2, 1)
    with pytest.raises(ValueError):
        reduce(H, {0, 1}, make_instance([[(1,)], [(1,)]]))


def test_shift():
    P = SumSet((((1, 0),), ((0, 1),)), 2, 1, 5, 2)
    assert enumerate_sumset(shift_sumset(P, (2, 2))) == {(3, 3)}
    Z = SumSet((), 0, 0, 5, 2)
    assert enumerate_sumset(shift_sumset(Z, (1, 4))) == {(1, 4)}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_reduce_contains_agreement_set(seed):
    code = new_frs(13, 4, 6, 3)
    rng = np.random.default_rng(seed)
    r = int(rng.integers(1, 4))
    H = structured_subspace(code, r, rng)
    # choose T greedily so that only 0 vanishes on it
    T, K = [], H
    for i in rng.permutation(code.n):
        Ki = coordinate_zero_subspace(K, int(i))
        if Ki.dim < K.dim:
            T.append(int(i))
            K = Ki
        if K.dim == 0:
            break
    ell = int(rng.integers(1, 4))
    members = list(enumerate_subspace(H))
    lists = []
    for i in range(code.n):
        picks = rng.choice(len(members), size=ell)
        lists.append({members[int(j)][i * 3:(i + 1) * 3] for j in picks})
    inst = make_instance(lists, ell=ell)
    cert = independence_positions(H, T)
    assert sum(len(p) for p in cert.positions) == H.dim
    P = reduce(H, T, inst)
    assert len(P.summands) <= len(T)
    assert all(len(A) <= ell for A in P.summands)
    assert agreement_set(H, T, inst) <= enumerate_sumset(P)
