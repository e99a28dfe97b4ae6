from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from listrec.frs import new_frs
from listrec.instance import make_instance
from listrec.prune import (PruneParams, expected_potential_step, fprune, potential, prune_ahs,
                           prune_uniform, sample_index, trace_length_bound, weight_profile, wt)
from listrec.verify import structured_subspace
from listrec.vspace import affine, span, zero_space

V = (1, 0, 0, 0, 2, 3)
H1 = span([V], 7, 3, 2)
P = PruneParams(Fraction(1, 2), Fraction(1, 4))


def full_lists(c, s=2):
    return make_instance([[c[i * s:(i + 1) * s]] for i in range(len(c) // s)])


def test_wt_examples():
    assert wt(zero_space(7, 3, 2), Fraction(1, 2)) == Fraction(1, 2)
    assert wt(span([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 7, 3, 1), Fraction(1, 4)) == Fraction(13, 4)


def test_params_validated():
    with pytest.raises(ValueError):
        PruneParams(0, Fraction(1, 4))
    with pytest.raises(ValueError):
        PruneParams(Fraction(1, 4), 1)


def test_weight_profile_example():
    prof = weight_profile(H1, P)
    assert prof.qualifying == (0, 2)
    assert prof.probabilities() == (Fraction(1, 2), 0, Fraction(1, 2))
    # eta' = 0 still excludes the coordinate that cannot shrink H
    prof0 = weight_profile(H1, PruneParams(Fraction(1, 2), 0))
    assert prof0.qualifying == (0, 2)


def test_fprune_dim0_and_distribution():
    rng = np.random.default_rng(1)
    assert fprune(zero_space(7, 3, 2), P, rng).pinned == ()
    counts = Counter(fprune(H1, P, rng).pinned for _ in range(4000))
    assert set(counts) == {(0,), (2,)}
    assert abs(counts[(0,)] / 4000 - 0.5) < 0.05


def test_sample_index_exact():
    rng = np.random.default_rng(0)
    draws = Counter(sample_index([Fraction(1, 3), 0, Fraction(2, 3)], rng) for _ in range(6000))
    assert draws[1] == 0
    assert abs(draws[2] / 6000 - 2 / 3) < 0.03
    with pytest.raises(ValueError):
        sample_index([0, 0], rng)


def test_potential_examples():
    c = V
    inst = full_lists(c)
    assert potential(H1, c, (), inst, P) == 1 / wt(H1, P.eta)
    Z = zero_space(7, 3, 2)
    assert potential(Z, c, (0, 2), inst, P) == Fraction(9, 8)
    miss = make_instance([[(5, 5)], [(0, 0)], [(2, 3)]])
    assert potential(Z, c, (0,), miss, P) == 0
    with pytest.raises(ValueError):
        potential(H1, c, (0,), inst, P)


def test_expected_step_hand_example():
    inst = full_lists(V)
    # both qualifying children are {0}: 1/2 * (3/4)/(1/2) twice
    assert expected_potential_step(H1, V, (), inst, P) == Fraction(3, 2)
    assert expected_potential_step(H1, V, (), inst, P) >= potential(H1, V, (), inst, P)
    with pytest.raises(ValueError):
        expected_potential_step(zero_space(7, 3, 2), (0,) * 6, (), inst, P)


def test_trace_length_bound():
    assert trace_length_bound(3, Fraction(1, 8)) == 3
    assert trace_length_bound(32, Fraction(1, 3)) == 11
    assert trace_length_bound(4, 0) == 4
    assert trace_length_bound(1, Fraction(1, 2)) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.sampled_from([0, Fraction(1, 8), Fraction(1, 3)]))
def test_fprune_traces_reach_zero(seed, r, eta_prime):
    code = new_frs(37, 8, 8, 4)
    rng = np.random.default_rng(seed)
    H = structured_subspace(code, r, rng)
    params = PruneParams(Fraction(1, 4), eta_prime)
    tr = fprune(H, params, rng)
    if not tr.failed:
        assert tr.dims[-1] == 0
        assert len(tr.pinned) == len(set(tr.pinned)) <= trace_length_bound(r, eta_prime)
        assert all(a > b for a, b in zip((r,) + tr.dims, tr.dims))


def test_prune_received_word_is_codeword():
    code = new_frs(37, 8, 8, 4)
    rng = np.random.default_rng(5)
    H = structured_subspace(code, 3, rng)
    A = affine((0,) * code.length, H)
    c = H.basis[0]
    for fn in (prune_uniform, prune_ahs):
        for _ in range(50):
            out = fn(A, c, Fraction(1, 4), rng)
            assert out.codeword == c
    Z = affine(c, zero_space(37, 8, 4))
    assert prune_ahs(Z, (0,) * 32, Fraction(1, 4), rng).codeword == c


def test_prune_pinned_agree_with_output():
    code = new_frs(37, 8, 8, 4)
    rng = np.random.default_rng(9)
    H = structured_subspace(code, 3, rng)
    A = affine((0,) * code.length, H)
    y = list(H.basis[1])
    y[0] = (y[0] + 1) % 37
    for fn in (prune_uniform, prune_ahs):
        for _ in range(50):
            out = fn(A, y, Fraction(1, 4), rng)
            if out.codeword is not None:
                for i in out.pinned:
                    assert out.codeword[i * 4:(i + 1) * 4] == tuple(y[i * 4:(i + 1) * 4])
