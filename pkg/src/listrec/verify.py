"""Empirical checks of the subspace-design property, pruning floors and bounds."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .frs import (EnumerationLimit, FrsCode, encode, relative_distance, tau_frs)
from .instance import ListRecoveryInstance
from .prune import (PruneParams, expected_potential_step, fprune, potential,
                    prune_ahs, prune_uniform, trace_length_bound, wt, weight_profile)
from .recovery import (bound_bcz, bound_list_size, exact_list_interpolated,
                       hamming_distance_to_lists, planted_instance, rng_for)
from .vspace import (AffineSpace, Subspace, combine, coordinate_zero_subspace, design_statistic,
                     span)

EXHAUSTIVE_LIMIT = 10**6


def gaussian_binomial(k: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of F_q^k."""
    if not 0 <= r <= k:
        return 0
    num = den = 1
    for i in range(r):
        num *= q**(k - i) - 1
        den *= q**(i + 1) - 1
    return num // den


def iter_rref(k: int, r: int, q: int):
    """Every full-rank r x k matrix in reduced row-echelon form, once each."""
    for pivots in itertools.combinations(range(k), r):
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, k) if j not in pivots]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * k for _ in range(r)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), x in zip(free, vals):
                rows[i][j] = x
            yield rows


def _message_rows_to_subspace(code: FrsCode, rows) -> Subspace:
    return span([encode(code, m) for m in rows], code.q, code.n, code.s)


def random_subspace(code: FrsCode, r: int, rng: np.random.Generator) -> Subspace:
    """Span of r uniform codewords, redrawn until the span has dimension r."""
    if r > code.k:
        raise ValueError("r exceeds the code dimension")
    while True:
        msgs = rng.integers(0, code.q, size=(r, code.k))
        H = _message_rows_to_subspace(code, [[int(x) for x in m] for m in msgs])
        if H.dim == r:
            return H


def _poly_mul(a, b, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return out


def vanishing_poly(code: FrsCode, coords) -> list[int]:
    """Monic polynomial vanishing on every evaluation point of ``coords``."""
    q, s = code.q, code.s
    z = [1]
    for i in coords:
        for x in code.eval_points[i * s:(i + 1) * s]:
            z = _poly_mul(z, [-x % q, 1], q)
    return z


def structured_subspace(code: FrsCode, r: int, rng: np.random.Generator) -> Subspace:
    """Span of r codewords of polynomials forced to vanish on random coordinates.

    Gives subspaces with non-trivial coordinate-zero subspaces, so pruning
    takes several steps.  Falls back to plain random codewords when k <= s.
    """
    q, s, k, n = code.q, code.s, code.k, code.n
    most = (k - 1) // s
    while True:
        vecs = []
        for _ in range(r):
            m = int(rng.integers(0, most + 1)) if most else 0
            coords = [int(x) for x in rng.choice(n, size=m, replace=False)] if m else []
            z = vanishing_poly(code, coords)
            g = [int(x) for x in rng.integers(0, q, size=k - len(z) + 1)]
            f = _poly_mul(z, g, q)
            f = (f + [0] * k)[:k]
            vecs.append(encode(code, f))
        H = span(vecs, q, n, s)
        if H.dim == r:
            return H


@dataclass
class DesignReport:
    code: dict
    r: int
    mode: str
    subspaces_checked: int
    max_statistic: Fraction
    bound: Fraction
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"code": self.code, "r": self.r, "mode": self.mode,
                "subspaces_checked": self.subspaces_checked,
                "max_statistic": str(self.max_statistic), "bound": str(self.bound),
                "violations": self.violations[:20], "violation_count": len(self.violations),
                "passed": self.passed}


def verify_design(code: FrsCode, r: int, mode: str = "exhaustive", samples: int = 1000,
                  seed: int = 0, tau_scale=1, structured: bool = False) -> DesignReport:
    """Check design_statistic(H) <= r * tau(r) over dim-r subspaces of the code.

    ``tau_scale`` multiplies tau before comparing; it exists only so tests can
    confirm that a corrupted tau is caught.
    """
    if not 1 <= r <= code.k:
        raise ValueError(f"need 1 <= r <= k={code.k}")
    bound = r * tau_frs(code, r) * Fraction(tau_scale)
    if mode == "exhaustive":
        count = gaussian_binomial(code.k, r, code.q)
        if count > EXHAUSTIVE_LIMIT:
            raise EnumerationLimit(f"{count} subspaces exceed the exhaustive limit {EXHAUSTIVE_LIMIT}")
        spaces = (_message_rows_to_subspace(code, rows) for rows in iter_rref(code.k, r, code.q))
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        pick = structured_subspace if structured else random_subspace
        spaces = (pick(code, r, rng) for _ in range(samples))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    checked, worst, violations = 0, Fraction(0), []
    for H in spaces:
        stat = design_statistic(H)
        checked += 1
        worst = max(worst, stat)
        if stat > bound:
            violations.append({"basis": [list(b) for b in H.basis], "statistic": str(stat)})
    return DesignReport(code.to_json(), r, mode, checked, worst, bound, violations)


def weight_design_holds(H: Subspace, tau_r, eta) -> bool:
    """(sum_i wt(H_i))/n <= wt(H) * (tau(r) + eta)."""
    eta = Fraction(eta)
    lhs = sum((wt(coordinate_zero_subspace(H, i), eta) for i in range(H.n)), Fraction(0)) / H.n
    return lhs <= wt(H, eta) * (Fraction(tau_r) + eta)


@dataclass
class EstimatorReport:
    name: str
    trials: int
    total: float
    estimate: float
    floor: Fraction
    z_margin: float
    hypothesis_ok: bool
    extra: dict = field(default_factory=dict)
    traces: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool | None:
        if not self.hypothesis_ok:
            return None
        return self.estimate >= float(self.floor) - self.z_margin

    def to_json(self) -> dict:
        return {"name": self.name, "trials": self.trials, "total": self.total,
                "estimate": self.estimate, "floor": str(self.floor),
                "floor_float": float(self.floor), "z_margin": self.z_margin,
                "hypothesis_ok": self.hypothesis_ok, "passed": self.passed, **self.extra}


def _three_sigma(values: np.ndarray) -> float:
    n = len(values)
    if n < 2:
        return 0.0
    return 3 * float(values.std(ddof=1)) / math.sqrt(n)


def _report(name, values, floor, ok, extra=None, traces=()) -> EstimatorReport:
    values = np.asarray(values, dtype=float)
    return EstimatorReport(name, len(values), float(values.sum()), float(values.mean()),
                           Fraction(floor), _three_sigma(values), ok, extra or {}, list(traces))


def estimate_fprune_success(code: FrsCode, H: Subspace, c, lists: ListRecoveryInstance,
                            params: PruneParams, trials: int, seed: int) -> EstimatorReport:
    """Monte Carlo mean of X_{c,T} (1-eta')^|T| against the floor eta/(r+eta)."""
    r = H.dim
    s = code.s
    c = tuple(c)
    threshold = 1 - (tau_frs(code, r) + params.eta) / (1 - params.eta_prime)
    dist = hamming_distance_to_lists(c, lists, s)
    ok = c in H and dist < threshold
    keep = float(1 - params.eta_prime)
    values, traces = [], []
    for j in range(trials):
        tr = fprune(H, params, rng_for(seed, j))
        traces.append(tr)
        hit = not tr.failed and all(c[i * s:(i + 1) * s] in lists.lists[i] for i in tr.pinned)
        values.append(keep ** len(tr.pinned) if hit else 0.0)
    floor = params.eta / (r + params.eta)
    bound = trace_length_bound(r, params.eta_prime)
    extra = {"r": r, "distance": str(dist), "threshold": str(threshold),
             "max_trace_len": max((len(t.pinned) for t in traces), default=0),
             "trace_bound": bound, "failed_runs": sum(t.failed for t in traces)}
    return _report("fprune", values, floor, ok, extra, traces)


def estimate_ahs_success(code: FrsCode, A: AffineSpace, y, c, epsilon, trials: int,
                         seed: int) -> EstimatorReport:
    """Frequency with which weighted pruning returns c, against eps/(r+eps)."""
    epsilon = Fraction(epsilon)
    r = A.dim
    c, y = tuple(c), tuple(y)
    dist = Fraction(code.n - sum(c[i * code.s:(i + 1) * code.s] == y[i * code.s:(i + 1) * code.s]
                                 for i in range(code.n)), code.n)
    ok = c in A and dist < 1 - tau_frs(code, max(r, 1)) - epsilon
    values = [prune_ahs(A, y, epsilon, rng_for(seed, j)).codeword == c for j in range(trials)]
    return _report("ahs", values, epsilon / (r + epsilon), ok, {"r": r, "distance": str(dist)})


def estimate_uniform_success(code: FrsCode, A: AffineSpace, y, c, epsilon, trials: int,
                             seed: int) -> EstimatorReport:
    """Frequency with which uniform pruning returns c, against eps^r."""
    epsilon = Fraction(epsilon)
    r = A.dim
    c, y = tuple(c), tuple(y)
    dist = Fraction(code.n - sum(c[i * code.s:(i + 1) * code.s] == y[i * code.s:(i + 1) * code.s]
                                 for i in range(code.n)), code.n)
    ok = c in A and dist < relative_distance(code) - epsilon
    values = [prune_uniform(A, y, epsilon, rng_for(seed, j)).codeword == c for j in range(trials)]
    return _report("uniform", values, epsilon**r, ok, {"r": r, "distance": str(dist)})


def monotonicity_instance(code: FrsCode, max_dim: int, params: PruneParams, ell: int,
                          rng: np.random.Generator, structured: bool = False,
                          violate: bool = False):
    """Random (H, c, T, lists) for the potential audit.

    With ``violate`` the agreement count is drawn below the hypothesis
    threshold.  Returns None when the drawn dimension admits no valid instance.
    """
    q, n, s = code.q, code.n, code.s
    r = int(rng.integers(1, min(max_dim, code.k) + 1))
    H = structured_subspace(code, r, rng) if structured else random_subspace(code, r, rng)
    c = combine([int(x) for x in rng.integers(0, q, size=r)], H.basis, q, H.length)
    x = (tau_frs(code, r) + params.eta) / (1 - params.eta_prime)
    need = math.floor(x * n) + 1
    if violate:
        if need == 0:
            return None
        agree = int(rng.integers(0, min(need, n + 1)))
    else:
        if need > n:
            return None
        agree = int(rng.integers(need, n + 1))
    agreeing = set(int(i) for i in rng.choice(n, size=agree, replace=False))
    lists = []
    for i in range(n):
        ci = c[i * s:(i + 1) * s]
        L = {ci} if i in agreeing else set()
        while len(L) < ell:
            sym = tuple(int(v) for v in rng.integers(0, q, size=s))
            if sym != ci:
                L.add(sym)
        lists.append(frozenset(L))
    inst = ListRecoveryInstance(tuple(lists), ell)
    vanishing = [i for i in range(n) if coordinate_zero_subspace(H, i) == H]
    T = frozenset(i for i in vanishing if rng.random() < 0.5)
    return H, c, T, inst, r


def audit_monotonicity(code: FrsCode, max_dim: int = 4, instances: int = 100, seed: int = 0,
                       params: PruneParams | None = None, ell: int = 2, structured: bool = False,
                       violating_share: float = 0.2) -> dict:
    """Check E[potential after one step] >= potential on random valid instances.

    Also draws some hypothesis-violating instances; those are counted but not
    asserted on.
    """
    params = params or PruneParams(Fraction(1, 4), Fraction(1, 8))
    rng = np.random.default_rng(seed)
    checked, excluded, nonzero, tight = 0, 0, 0, 0
    excluded_failures = 0
    counterexamples = []
    min_gap = None
    attempts = 0
    while checked < instances:
        attempts += 1
        if attempts > 50 * instances:
            raise RuntimeError("could not draw enough hypothesis-satisfying instances")
        violate = rng.random() < violating_share
        inst = monotonicity_instance(code, max_dim, params, ell, rng, structured, violate)
        if inst is None:
            continue
        H, c, T, lists, r = inst
        prof = weight_profile(H, params)
        if violate:
            excluded += 1
            if prof.qualifying:
                after = expected_potential_step(H, c, T, lists, params)
                excluded_failures += after < potential(H, c, T, lists, params)
            continue
        before = potential(H, c, T, lists, params)
        if not prof.qualifying:
            counterexamples.append({"reason": "empty qualifying set", "r": r,
                                    "basis": [list(b) for b in H.basis]})
            checked += 1
            continue
        after = expected_potential_step(H, c, T, lists, params)
        checked += 1
        nonzero += before > 0
        tight += after == before
        gap = after - before
        min_gap = gap if min_gap is None else min(min_gap, gap)
        if after < before:
            counterexamples.append({"r": r, "c": list(c), "T": sorted(T),
                                    "basis": [list(b) for b in H.basis],
                                    "lists": lists.to_json()["lists"],
                                    "before": str(before), "after": str(after)})
    return {"code": code.to_json(), "eta": str(params.eta), "eta_prime": str(params.eta_prime),
            "checked": checked, "excluded": excluded, "nonzero_potential": nonzero,
            "tight": tight, "min_gap": None if min_gap is None else str(min_gap),
            "excluded_below_potential": excluded_failures,
            "counterexamples": counterexamples, "passed": not counterexamples}


def bounds_table(code: FrsCode, ell: int, epsilon_grid: Sequence, instances: int = 10,
                 seed: int = 0) -> list[dict]:
    """Exact list sizes on planted instances next to the two list-size bounds.

    H is the whole code (r = k).  For each eps we set eta = eps/4 and
    eta' = eps/(2(tau+eps)), which makes the pruning radius at least the entropy-bound
    radius 1 - tau - eps, so the exact count must sit below both bounds.
    """
    r = code.k
    tau = tau_frs(code, r)
    rows = []
    for eps in epsilon_grid:
        eps = Fraction(eps)
        row = {"epsilon": str(eps), "r": r, "tau": str(tau)}
        if eps <= 0 or tau + eps > 1:
            row["skipped"] = "need 0 < eps and tau(r) + eps <= 1"
            rows.append(row)
            continue
        eta = eps / 4
        eta_prime = eps / (2 * (tau + eps))
        radius = 1 - tau - eps
        noise = Fraction(max(0, math.ceil(radius * code.n) - 1), code.n)
        rng = np.random.default_rng([seed, eps.numerator, eps.denominator])
        worst = 0
        for _ in range(instances):
            inst, _ = planted_instance(code, ell, ell, noise, rng)
            worst = max(worst, len(exact_list_interpolated(code, inst, radius, strict=True)))
        ls = bound_list_size(r, eta, eta_prime, ell)
        bcz = bound_bcz(ell, tau, eps)
        row.update({"eta": str(eta), "eta_prime": str(eta_prime), "exact_max": worst,
                    "bound_list_size": float(ls), "bound_bcz": float(bcz),
                    "exact_le_bcz": worst <= bcz, "bcz_le_list_size": bcz <= ls})
        rows.append(row)
    return rows


def format_table(rows: list[dict], columns: Sequence[str]) -> str:
    """Aligned plain-text table."""
    cells = [[str(c) for c in columns]]
    for row in rows:
        cells.append([_fmt(row.get(c, "")) for c in columns])
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    return "\n".join("  ".join(x.rjust(w) for x, w in zip(r, widths)) for r in cells)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)
