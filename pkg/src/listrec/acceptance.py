"""Fixed-seed acceptance corpus.

Each criterion is a function returning a :class:`CriterionResult`; the CLI
``selftest`` command and ``tests/test_acceptance.py`` both run them.
"""

from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .frs import encode, new_frs, tau_frs
from .prune import PruneParams, trace_length_bound
from .recovery import (RecoveryConfig, bcz_epsilon_matching, bound_bcz, bound_list_size,
                       code_space, exact_list_interpolated, planted_instance, recover,
                       theorem_list)
from .sumset import enumerate_sumset, reduce
from .instance import ListRecoveryInstance
from .prune import fprune
from .verify import (audit_monotonicity, bounds_table, estimate_ahs_success,
                     estimate_fprune_success, estimate_uniform_success, random_subspace,
                     structured_subspace, verify_design)
from .vspace import affine, combine, coordinate_zero_subspace, enumerate_blocks

DEFAULT_SEED = 20251017


@dataclass
class CriterionResult:
    id: str
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.id} {self.title} ({self.seconds:.1f}s)"


class Context:
    """Shares traces between criteria so the trace-length check can audit them."""

    def __init__(self, seed: int = DEFAULT_SEED):
        self.seed = seed
        self.traces: dict[str, list] = {}
        self.list_instances: list = []


def _sigma3(values) -> float:
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        return 0.0
    return 3 * float(values.std(ddof=1)) / math.sqrt(len(values))


def c1_design(ctx: Context) -> CriterionResult:
    """Exhaustive design statistic on the (37,8,4,4) code, r = 1."""
    code = new_frs(37, 8, 4, 4)
    t0 = time.perf_counter()
    rep = verify_design(code, 1, "exhaustive")
    secs = time.perf_counter() - t0
    ok = (rep.subspaces_checked == 52060 and rep.passed
          and rep.max_statistic <= Fraction(1, 8) and secs <= 60)
    return CriterionResult("C1", "subspace-design statistic <= tau(1) on all 1-dim subspaces", ok,
                           {**rep.to_json(), "runtime_s": secs, "budget_s": 60})


def c2_monotonicity(ctx: Context) -> CriterionResult:
    """Exact one-step potential audit on 100 seeded instances."""
    code = new_frs(37, 8, 4, 4)
    t0 = time.perf_counter()
    rep = audit_monotonicity(code, max_dim=4, instances=100, seed=ctx.seed,
                             params=PruneParams(Fraction(1, 4), Fraction(1, 8)), ell=2)
    secs = time.perf_counter() - t0
    ok = rep["passed"] and rep["checked"] == 100 and secs <= 120
    return CriterionResult("C2", "expected potential never decreases (exact)", ok,
                           {**rep, "runtime_s": secs, "budget_s": 120})


def c3_success_floor(ctx: Context) -> CriterionResult:
    """Monte Carlo fprune success against eta/(r+eta)."""
    # k > s so the structured subspaces need several pins
    code = new_frs(37, 8, 8, 4)
    params = PruneParams(Fraction(1, 4), Fraction(1, 8))
    rng = np.random.default_rng([ctx.seed, 3])
    H = structured_subspace(code, 3, rng)
    inst, (c,) = planted_instance(code, 2, 1, Fraction(1, 8), rng, space=H)
    t0 = time.perf_counter()
    rep = estimate_fprune_success(code, H, c, inst, params, 10_000, seed=ctx.seed)
    secs = time.perf_counter() - t0
    ctx.traces["C3"] = [(3, params.eta_prime, t) for t in rep.traces]
    ok = bool(rep.hypothesis_ok and rep.passed and secs <= 120)
    return CriterionResult("C3", "fprune success mean >= eta/(r+eta) - 3 sigma", ok,
                           {**rep.to_json(), "runtime_s": secs, "budget_s": 120})


def _list_size_instances(seed: int, count: int):
    """Mixed desk-scale instances: random/structured subspaces and a tiny whole code."""
    rng = np.random.default_rng([seed, 4])
    big = new_frs(37, 8, 4, 4)
    folded = new_frs(37, 8, 8, 4)
    small = new_frs(13, 3, 2, 2)
    out = []
    for j in range(count):
        kind = j % 3
        if kind == 0:
            code, r = big, int(rng.integers(1, 4))
            H = random_subspace(code, r, rng)
            eta, eta_prime, noise = Fraction(1, 4), Fraction(1, 8), Fraction(int(rng.integers(0, 4)), 8)
        elif kind == 1:
            code, r = folded, int(rng.integers(1, 4))
            H = structured_subspace(code, r, rng)
            eta, eta_prime, noise = Fraction(1, 8), Fraction(1, 8), Fraction(int(rng.integers(0, 2)), 8)
        else:
            code = small
            H = code_space(code)
            eta, eta_prime, noise = Fraction(1, 16), Fraction(1, 16), Fraction(0)
        ell = int(rng.integers(1, 4))
        inst, planted = planted_instance(code, ell, ell, noise, rng, space=H)
        out.append((code, H, inst, eta, eta_prime))
    return out


def c4_list_size(ctx: Context) -> CriterionResult:
    """Exhaustive list sizes inside H against the list-size bound."""
    t0 = time.perf_counter()
    rows, violations = [], 0
    ctx.list_instances = []
    for code, H, inst, eta, eta_prime in _list_size_instances(ctx.seed, 60):
        r = H.dim
        tau = tau_frs(code, r)
        found = theorem_list(H, inst, tau, eta, eta_prime)
        bound = bound_list_size(r, eta, eta_prime, inst.ell)
        violations += len(found) > bound
        ctx.list_instances.append((code, H, inst, eta, eta_prime, len(found)))
        rows.append({"q": code.q, "k": code.k, "r": r, "ell": inst.ell, "exact": len(found),
                     "bound": str(bound)})
    secs = time.perf_counter() - t0
    nonempty = sum(r["exact"] > 0 for r in rows)
    ok = len(rows) >= 50 and violations == 0
    return CriterionResult("C4", "|LIST within H| <= list-size bound", ok,
                           {"instances": len(rows), "nonempty_lists": nonempty,
                            "violations": violations, "max_exact": max(r["exact"] for r in rows),
                            "runtime_s": secs})


def _reduce_instance(code, rng):
    r = int(rng.integers(1, 5))
    H = structured_subspace(code, r, rng)
    if rng.random() < 0.5:
        params = PruneParams(Fraction(1, 4), Fraction(int(rng.integers(0, 4)), 8))
        tr = fprune(H, params, rng)
        if tr.failed:
            return None
        T = set(tr.pinned)
    else:
        m = int(rng.integers(1, r + 1))
        T = set(int(x) for x in rng.choice(code.n, size=m, replace=False))
        K = H
        for t in T:
            K = coordinate_zero_subspace(K, t)
        if K.dim:
            return None
    ell = int(rng.integers(1, 4))
    q, s = code.q, code.s
    members = [combine([int(x) for x in rng.integers(0, q, size=r)], H.basis, q, H.length)
               for _ in range(ell)]
    lists = []
    for i in range(code.n):
        L = set()
        for c in members:
            if rng.random() < 0.8 and len(L) < ell:
                L.add(c[i * s:(i + 1) * s])
        while len(L) < ell and rng.random() < 0.7:
            L.add(tuple(int(x) for x in rng.integers(0, q, size=s)))
        lists.append(frozenset(L))
    return H, T, ListRecoveryInstance(tuple(lists), ell)


def c5_reduce(ctx: Context) -> CriterionResult:
    """Sum-set containment of the agreement set on q = 13 instances."""
    code = new_frs(13, 4, 6, 3)
    rng = np.random.default_rng([ctx.seed, 5])
    t0 = time.perf_counter()
    checked = failures = shape_failures = agreeing_total = 0
    while checked < 120:
        made = _reduce_instance(code, rng)
        if made is None:
            continue
        H, T, inst = made
        P = reduce(H, T, inst)
        s = code.s
        agreeing = set()
        for block in enumerate_blocks(H):
            for row in block:
                v = tuple(int(x) for x in row)
                if all(v[t * s:(t + 1) * s] in inst.lists[t] for t in T):
                    agreeing.add(v)
        agreeing_total += len(agreeing)
        failures += not agreeing <= enumerate_sumset(P)
        shape_failures += len(P.summands) > len(T) or any(len(A) > inst.ell for A in P.summands)
        checked += 1
    secs = time.perf_counter() - t0
    ok = failures == 0 and shape_failures == 0
    return CriterionResult("C5", "reduce sum-set contains the exhaustive agreement set", ok,
                           {"instances": checked, "containment_failures": failures,
                            "shape_failures": shape_failures,
                            "agreeing_codewords_total": agreeing_total, "runtime_s": secs})


def coverage_experiment(seed: int, runs: int, t_prime) -> dict:
    code = new_frs(37, 8, 4, 4)
    eta, eta_prime = Fraction(1, 4), Fraction(1, 8)
    tau = tau_frs(code, code.k)
    covered, nonempty, traces = [], 0, []
    for j in range(runs):
        rng = np.random.default_rng([seed, 6, j])
        inst, _ = planted_instance(code, 2, 2, Fraction(1, 8), rng)
        cfg = RecoveryConfig(eta, eta_prime, t_prime=t_prime, seed=seed + j)
        out = recover(code, inst, cfg)
        radius = 1 - (tau + eta) / (1 - eta_prime)
        target = exact_list_interpolated(code, inst, radius, strict=True)
        nonempty += bool(target)
        covered.append(all(out.covers(c) for c in target))
        traces.extend((out.dim, eta_prime, t) for t in out.traces)
    freq = sum(covered) / runs
    floor = 1 - math.exp(-float(t_prime))
    margin = _sigma3(covered)
    return {"runs": runs, "t_prime": str(t_prime), "covered": int(sum(covered)),
            "frequency": freq, "floor": floor, "margin_3sigma": margin,
            "nonempty_lists": nonempty, "passed": freq >= floor - margin, "traces": traces}


def c6_coverage(ctx: Context) -> CriterionResult:
    """Coverage frequency of the full pipeline on planted instances."""
    t0 = time.perf_counter()
    a = coverage_experiment(ctx.seed, 200, 1)
    b = coverage_experiment(ctx.seed + 1, 200, 3)
    ctx.traces["C6"] = a.pop("traces") + b.pop("traces")
    ok = a["passed"] and b["passed"]
    return CriterionResult("C6", "coverage >= 1 - e^-t' (t'=1 and t'=3)", ok,
                           {"t_prime_1": a, "t_prime_3": b,
                            "runtime_s": time.perf_counter() - t0})


def c7_weighted_vs_uniform(ctx: Context) -> CriterionResult:
    """Weighted against uniform pruning on one planted instance."""
    code = new_frs(37, 8, 8, 4)
    eps = Fraction(1, 4)
    rng = np.random.default_rng([ctx.seed, 7])
    D = structured_subspace(code, 3, rng)
    offset = encode(code, [int(x) for x in rng.integers(0, code.q, size=code.k)])
    A = affine(offset, D)
    c = tuple((a + b) % code.q for a, b in zip(
        offset, combine([int(x) for x in rng.integers(0, code.q, size=3)], D.basis, code.q, D.length)))
    y = list(c)
    bad = int(rng.integers(0, code.n))
    for j in range(code.s):
        y[bad * code.s + j] = (y[bad * code.s + j] + 1 + int(rng.integers(0, code.q - 1))) % code.q
    t0 = time.perf_counter()
    ahs = estimate_ahs_success(code, A, y, c, eps, 5000, seed=ctx.seed)
    uni = estimate_uniform_success(code, A, y, c, eps, 5000, seed=ctx.seed)
    ok = bool(ahs.passed and uni.passed and ahs.estimate > uni.estimate)
    return CriterionResult("C7", "weighted pruning floor eps/(r+eps) vs uniform eps^r", ok,
                           {"ahs": ahs.to_json(), "uniform": uni.to_json(),
                            "runtime_s": time.perf_counter() - t0})


def c8_entropy_bound(ctx: Context) -> CriterionResult:
    """Exact counts against the entropy-style list-size bound."""
    if not ctx.list_instances:
        c4_list_size(ctx)
    t0 = time.perf_counter()
    checked = violations = skipped = 0
    for code, H, inst, eta, eta_prime, count in ctx.list_instances:
        tau = tau_frs(code, H.dim)
        eps = bcz_epsilon_matching(tau, eta, eta_prime)
        if tau + eps > 1:
            skipped += 1
            continue
        checked += 1
        # the matched eps makes the two radii coincide, so the same exact count applies
        violations += count > bound_bcz(inst.ell, tau, eps)
    rows = bounds_table(new_frs(37, 8, 4, 4), 2, [Fraction(1, 8), Fraction(1, 4), Fraction(3, 8)],
                        instances=5, seed=ctx.seed)
    better = any(r.get("bcz_le_list_size") for r in rows)
    table_ok = all(r.get("exact_le_bcz", True) for r in rows)
    ok = checked > 0 and violations == 0 and better and table_ok
    return CriterionResult("C8", "exact counts <= entropy bound; it undercuts the pruning bound somewhere", ok,
                           {"checked": checked, "skipped": skipped, "violations": violations,
                            "table": rows, "runtime_s": time.perf_counter() - t0})


def c9_trace_length(ctx: Context) -> CriterionResult:
    """Trace lengths from the C3 and C6 runs."""
    if "C3" not in ctx.traces:
        c3_success_floor(ctx)
    if "C6" not in ctx.traces:
        c6_coverage(ctx)
    checked = bad = 0
    for key in ("C3", "C6"):
        for r, eta_prime, tr in ctx.traces[key]:
            if tr.failed:
                continue
            checked += 1
            bad += len(tr.pinned) > trace_length_bound(r, eta_prime)
    return CriterionResult("C9", "every trace length within min(r, ceil((1+ln r eta')/eta'))",
                           checked > 0 and bad == 0, {"traces": checked, "violations": bad})


def c10_determinism(ctx: Context) -> CriterionResult:
    """Two recover runs with one seed give identical bytes."""
    from .cli import main

    with tempfile.TemporaryDirectory() as tmp:
        outs = []
        for name in ("a.json", "b.json"):
            path = Path(tmp) / name
            code = main(["recover", "--q", "37", "--n", "8", "--k", "4", "--s", "4",
                         "--ell", "2", "--planted", "2", "--noise", "1/8",
                         "--eta", "1/4", "--eta-prime", "1/8", "--seed", str(ctx.seed),
                         "--out", str(path)])
            outs.append((code, path.read_bytes() if path.exists() else b""))
    ok = outs[0][0] == 0 and outs[1][0] == 0 and outs[0][1] == outs[1][1] and outs[0][1]
    return CriterionResult("C10", "recover with the same seed is byte-identical", bool(ok),
                           {"exit_codes": [o[0] for o in outs], "bytes": len(outs[0][1])})


CRITERIA: dict[str, Callable[[Context], CriterionResult]] = {
    "C1": c1_design,
    "C2": c2_monotonicity,
    "C3": c3_success_floor,
    "C4": c4_list_size,
    "C5": c5_reduce,
    "C6": c6_coverage,
    "C7": c7_weighted_vs_uniform,
    "C8": c8_entropy_bound,
    "C9": c9_trace_length,
    "C10": c10_determinism,
}


def run_criterion(cid: str, ctx: Context) -> CriterionResult:
    t0 = time.perf_counter()
    res = CRITERIA[cid](ctx)
    res.seconds = time.perf_counter() - t0
    return res


def run_all(seed: int = DEFAULT_SEED, only=None) -> list[CriterionResult]:
    ctx = Context(seed)
    return [run_criterion(cid, ctx) for cid in (only or CRITERIA)]
