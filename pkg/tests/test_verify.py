from fractions import Fraction

import numpy as np

from listrec.frs import new_frs, tau_frs
from listrec.prune import PruneParams
from listrec.recovery import planted_instance
from listrec.verify import (audit_monotonicity, bounds_table, estimate_fprune_success,
                            format_table, gaussian_binomial, iter_rref, random_subspace,
                            structured_subspace, verify_design, weight_design_holds)
from listrec.vspace import coordinate_zero_subspace


def test_gaussian_binomial_counts_rref():
    for k, r, q in [(3, 1, 5), (3, 2, 3), (4, 2, 2)]:
        assert gaussian_binomial(k, r, q) == sum(1 for _ in iter_rref(k, r, q))
    assert gaussian_binomial(4, 1, 37) == 52060


def test_design_small_exhaustive_and_falsifiable():
    code = new_frs(7, 3, 5, 2)
    assert verify_design(code, 1).passed
    bad = verify_design(code, 1, tau_scale=Fraction(1, 2))
    assert not bad.passed and bad.violations


def test_design_sampled_and_r_beyond_s():
    code = new_frs(37, 8, 8, 4)
    rep = verify_design(code, 2, "sampled", samples=50, seed=1)
    assert rep.passed and rep.subspaces_checked == 50
    rep = verify_design(new_frs(13, 3, 4, 2), 3, "sampled", samples=20, seed=1)
    assert rep.bound == 3 and rep.passed


def test_structured_subspace_vanishes():
    code = new_frs(37, 8, 8, 4)
    rng = np.random.default_rng(0)
    H = structured_subspace(code, 3, rng)
    assert H.dim == 3
    shrinking = sum(coordinate_zero_subspace(H, i).dim > 0 for i in range(code.n))
    assert shrinking > 0
    assert random_subspace(code, 2, rng).dim == 2


def test_weight_design():
    code = new_frs(37, 8, 4, 4)
    H = random_subspace(code, 3, np.random.default_rng(4))
    assert weight_design_holds(H, tau_frs(code, 3), Fraction(1, 4))


def test_estimator_full_agreement():
    code = new_frs(37, 8, 4, 4)
    rng = np.random.default_rng(1)
    H = random_subspace(code, 1, rng)
    inst, (c,) = planted_instance(code, 1, 1, 0, rng, space=H)
    rep = estimate_fprune_success(code, H, c, inst, PruneParams(Fraction(1, 4), 0), 200, seed=0)
    assert rep.estimate == 1 and rep.passed


def test_estimator_flags_violated_hypothesis():
    code = new_frs(37, 8, 4, 4)
    rng = np.random.default_rng(2)
    H = random_subspace(code, 2, rng)
    inst, (c,) = planted_instance(code, 1, 1, Fraction(7, 8), rng, space=H)
    rep = estimate_fprune_success(code, H, c, inst, PruneParams(Fraction(1, 4), Fraction(1, 8)), 50, seed=0)
    assert not rep.hypothesis_ok and rep.passed is None


def test_monotonicity_audit_small():
    rep = audit_monotonicity(new_frs(37, 8, 8, 4), max_dim=3, instances=30, seed=7)
    assert rep["passed"] and rep["checked"] == 30


def test_bounds_table_rows():
    rows = bounds_table(new_frs(37, 8, 4, 4), 2, [Fraction(1, 4), Fraction(3, 4)], instances=2)
    assert rows[0]["exact_le_bcz"] and rows[0]["bcz_le_list_size"]
    assert "skipped" in rows[1]
    text = format_table(rows, ["epsilon", "exact_max", "bound_bcz"])
    assert len(text.splitlines()) == 3
