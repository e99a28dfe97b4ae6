"""End-to-end list recovery and the closed-form bound calculators.

Step 1 (finding an affine space that holds every close codeword) is an
oracle here: either the whole code or the affine hull of the exhaustively
computed list.  Step 2 repeats fprune + reduce ``t`` times.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .frs import (EnumerationLimit, FrsCode, encode, interpolate,
                  iter_codeword_blocks, tau_frs)
from .instance import ListRecoveryInstance
from .prune import PruneParams, PruneTrace, fprune, trace_length_bound
from .sumset import SumSet, enumerate_sumset, reduce, shift_sumset, sumset_member
from .vspace import (AffineSpace, Subspace, affine, combine, enumerate_blocks, span,
                     sub_vectors, translate_to_linear)

Vector = tuple

WHOLE_CODE = "whole-code"
ORACLE_HULL = "oracle-hull"
STEP1_MODES = (WHOLE_CODE, ORACLE_HULL)


def hamming_distance_to_lists(c: Sequence[int], inst: ListRecoveryInstance, s: int) -> Fraction:
    return Fraction(inst.n - inst.agreements(c, s), inst.n)


def max_disagreements(radius, n: int, strict: bool = False) -> int:
    """Largest d with d/n <= radius (or < radius when strict)."""
    x = Fraction(radius) * n
    d = math.floor(x)
    if strict and d == x:
        d -= 1
    return d


def _symbol_keys(block: np.ndarray, s: int, q: int) -> np.ndarray:
    """Encode every length-s symbol of each row as one integer; shape (m, n)."""
    m = block.shape[0]
    folded = block.reshape(m, -1, s)
    weights = q ** np.arange(s, dtype=np.int64)
    return folded @ weights


def _list_keys(inst: ListRecoveryInstance, q: int) -> list[np.ndarray]:
    out = []
    for L in inst.lists:
        out.append(np.array(sorted(sum(int(x) * q**j for j, x in enumerate(sym)) for sym in L),
                            dtype=np.int64))
    return out


def _filter_block(block: np.ndarray, inst: ListRecoveryInstance, s: int, q: int,
                  max_dis: int, keys=None) -> list[Vector]:
    keys = _list_keys(inst, q) if keys is None else keys
    sk = _symbol_keys(block, s, q)
    agree = np.zeros(block.shape[0], dtype=np.int64)
    for i, k in enumerate(keys):
        agree += np.isin(sk[:, i], k)
    hit = np.nonzero(inst.n - agree <= max_dis)[0]
    return [tuple(int(x) for x in block[j]) for j in hit]


def exact_list(code: FrsCode, inst: ListRecoveryInstance, radius=None, strict: bool = False,
               limit: int | None = None) -> set[Vector]:
    """All codewords within ``radius`` (default ``inst.delta``) of the lists, by brute force."""
    radius = inst.delta if radius is None else radius
    max_dis = max_disagreements(radius, code.n, strict)
    keys = _list_keys(inst, code.q)
    out = set()
    for block in iter_codeword_blocks(code, limit):
        out.update(_filter_block(block, inst, code.s, code.q, max_dis, keys))
    return out


def list_in_space(H: Subspace | AffineSpace, inst: ListRecoveryInstance, radius,
                  strict: bool = False, limit: int | None = None) -> set[Vector]:
    """Members of H within ``radius`` of the lists, by enumerating H."""
    if isinstance(H, AffineSpace):
        D, offset = H.direction, np.array(H.offset, dtype=np.int64)
    else:
        D, offset = H, None
    max_dis = max_disagreements(radius, D.n, strict)
    keys = _list_keys(inst, D.q)
    out = set()
    for block in enumerate_blocks(D, limit):
        if offset is not None:
            block = (block + offset) % D.q
        out.update(_filter_block(block, inst, D.s, D.q, max_dis, keys))
    return out


def exact_list_interpolated(code: FrsCode, inst: ListRecoveryInstance, radius=None,
                            strict: bool = False) -> set[Vector]:
    """Same set as :func:`exact_list`, found by interpolating through list entries.

    A codeword with at least ``a`` agreements agrees with the lists on at least
    ``j = ceil(k/s)`` of any ``n - a + j`` coordinates, and ``j`` agreeing
    coordinates determine it.  Raises when ``a < j``.
    """
    radius = inst.delta if radius is None else radius
    n, s, k = code.n, code.s, code.k
    a = n - max_disagreements(radius, n, strict)
    j = -(-k // s)
    if a < j:
        raise EnumerationLimit("radius too large for interpolation; use exact_list")
    pool = range(n - a + j)
    out = set()
    seen = set()
    for coords in itertools.combinations(pool, j):
        for syms in itertools.product(*(sorted(inst.lists[i]) for i in coords)):
            msg = interpolate(code, coords, syms)
            if msg is None or msg in seen:
                continue
            seen.add(msg)
            c = encode(code, msg)
            if inst.agreements(c, s) >= a:
                out.add(c)
    return out


def code_space(code: FrsCode) -> Subspace:
    return span(code.generator, code.q, code.n, code.s)


def affine_hull(points: Iterable[Sequence[int]], q: int, n: int, s: int) -> AffineSpace | None:
    points = [tuple(p) for p in points]
    if not points:
        return None
    base = min(points)
    D = span([sub_vectors(p, base, q) for p in points], q, n, s)
    return affine(base, D)


def step1_affine_space(code: FrsCode, inst: ListRecoveryInstance, mode: str = WHOLE_CODE,
                       limit: int | None = None) -> AffineSpace | None:
    """An affine space containing every codeword within ``inst.delta``; None if that list is empty."""
    if mode == WHOLE_CODE:
        return affine((0,) * code.length, code_space(code))
    if mode == ORACLE_HULL:
        return affine_hull(exact_list(code, inst, limit=limit), code.q, code.n, code.s)
    raise ValueError(f"unknown step-1 mode {mode!r}; expected one of {STEP1_MODES}")


def repetitions(r: int, eta, ell: int, t_prime) -> int:
    """ceil(((r+eta)/eta) * (r ln ell + ln(r/eta + 1) + t'))."""
    eta = Fraction(eta)
    x = float((r + eta) / eta) * (r * math.log(ell) + math.log(float(r / eta + 1)) + float(t_prime))
    return max(1, math.ceil(x))


@dataclass(frozen=True)
class RecoveryConfig:
    eta: Fraction
    eta_prime: Fraction
    r: int | None = None  # dimension budget; None accepts whatever step 1 returns
    t: int | None = None  # None derives t from the other parameters
    t_prime: Fraction = Fraction(1)
    seed: int = 0
    step1_mode: str = WHOLE_CODE
    exact_filter: bool = False

    def __post_init__(self):
        for name in ("eta", "eta_prime", "t_prime"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        PruneParams(self.eta, self.eta_prime)
        if self.t is not None and self.t < 1:
            raise ValueError("t must be at least 1")
        if self.step1_mode not in STEP1_MODES:
            raise ValueError(f"unknown step-1 mode {self.step1_mode!r}")

    @property
    def params(self) -> PruneParams:
        return PruneParams(self.eta, self.eta_prime)

    def repetitions(self, r: int, ell: int) -> int:
        return self.t if self.t is not None else repetitions(r, self.eta, ell, self.t_prime)

    def to_json(self) -> dict:
        return {"r": self.r, "eta": str(self.eta), "eta_prime": str(self.eta_prime), "t": self.t,
                "t_prime": str(self.t_prime), "seed": self.seed, "step1_mode": self.step1_mode,
                "exact_filter": self.exact_filter}


@dataclass
class RunRecord:
    index: int
    trace: PruneTrace
    sumset: SumSet | None


@dataclass
class RecoveryOutput:
    sumsets: list[SumSet]
    offset: Vector | None
    runs: list[RunRecord]
    dim: int | None
    t: int
    sumset_dim_bound: int
    filtered: list[Vector] | None = None
    stats: dict = field(default_factory=dict)

    @property
    def traces(self) -> list[PruneTrace]:
        return [run.trace for run in self.runs]

    def covers(self, c: Sequence[int]) -> bool:
        return any(sumset_member(P, c) for P in self.sumsets)


def rng_for(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def recover(code: FrsCode, inst: ListRecoveryInstance, cfg: RecoveryConfig) -> RecoveryOutput:
    A = step1_affine_space(code, inst, cfg.step1_mode)
    if A is None:
        return RecoveryOutput([], None, [], None, 0, 0, [] if cfg.exact_filter else None,
                              {"empty_step1": True})
    if cfg.r is not None and A.dim > cfg.r:
        raise ValueError(f"step 1 returned dim {A.dim} > budget r={cfg.r}")
    D, shifted, offset = translate_to_linear(A, inst)
    r = D.dim
    t = cfg.repetitions(r, inst.ell)
    params = cfg.params
    cache: dict[tuple, SumSet] = {}
    runs, sumsets = [], []
    for j in range(1, t + 1):
        trace = fprune(D, params, rng_for(cfg.seed, j))
        if trace.failed:
            runs.append(RunRecord(j, trace, None))
            continue
        key = tuple(sorted(trace.pinned))
        if key not in cache:
            cache[key] = shift_sumset(reduce(D, key, shifted), offset)
        runs.append(RunRecord(j, trace, cache[key]))
        sumsets.append(cache[key])
    filtered = None
    if cfg.exact_filter:
        found = set()
        for P in set(sumsets):
            for v in enumerate_sumset(P):
                if hamming_distance_to_lists(v, inst, code.s) <= inst.delta and v in A:
                    found.add(v)
        filtered = sorted(found)
    stats = {"failed_runs": sum(run.trace.failed for run in runs),
             "distinct_sumsets": len(cache)}
    return RecoveryOutput(sumsets, offset, runs, r, t, trace_length_bound(r, cfg.eta_prime),
                          filtered, stats)


def bound_list_size(r: int, eta, eta_prime, ell: int) -> Fraction:
    """ell^min(r, ceil((1/eta')(1 + max(0, ln(r eta'))))) * (r/eta + 1), exact."""
    e = trace_length_bound(r, eta_prime)
    return Fraction(ell) ** e * (Fraction(r) / Fraction(eta) + 1)


def bound_bcz(ell: int, tau_r, epsilon):
    """(ell/(tau+eps))^((tau+eps)/eps); exact when the exponent is an integer."""
    tau_r, epsilon = Fraction(tau_r), Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if tau_r + epsilon > 1:
        raise ValueError("need tau(r) + epsilon <= 1")
    base = Fraction(ell) / (tau_r + epsilon)
    expo = (tau_r + epsilon) / epsilon
    if expo.denominator == 1:
        return base ** int(expo)
    try:
        return math.exp(float(expo) * math.log(base))
    except OverflowError:
        return math.inf


def bcz_epsilon_matching(tau_r, eta, eta_prime) -> Fraction:
    """eps with 1 - tau - eps equal to the pruning radius 1 - (tau+eta)/(1-eta')."""
    tau_r = Fraction(tau_r)
    return (tau_r + Fraction(eta)) / (1 - Fraction(eta_prime)) - tau_r


@dataclass(frozen=True)
class TheoremParams:
    r: int
    s0: Fraction
    eta: Fraction
    eta_prime: Fraction
    sumset_dim_bound: int
    t: int

    def to_json(self) -> dict:
        return {"r": self.r, "s0": str(self.s0), "eta": str(self.eta),
                "eta_prime": str(self.eta_prime), "sumset_dim_bound": self.sumset_dim_bound,
                "t": self.t}


def frs_theorem_params(R, epsilon, ell: int, t_prime=1) -> TheoremParams:
    """Parameter choice of the near-linear-time recovery theorem for rate R and slack epsilon."""
    R, epsilon = Fraction(R), Fraction(epsilon)
    if not 0 < epsilon < 1 - R:
        raise ValueError(f"need 0 < epsilon < 1 - R, got epsilon={epsilon}, R={R}")
    r = math.ceil(4 * ell / epsilon)
    s0 = 16 * (R + epsilon) * ell / epsilon**2
    eta = epsilon / 4
    eta_prime = epsilon / (2 * (R + epsilon))
    dim_bound = math.ceil(float(2 * (R + epsilon) / epsilon) * math.log(2 * math.e * ell / float(R + epsilon)))
    t = repetitions(r, eta, ell, t_prime)
    return TheoremParams(r, s0, eta, eta_prime, dim_bound, t)


def theorem_list(H: Subspace | AffineSpace, inst: ListRecoveryInstance, tau_r, eta, eta_prime,
                 limit: int | None = None) -> set[Vector]:
    """{c in H : distance < 1 - (tau+eta)/(1-eta')}, by enumerating H."""
    radius = 1 - (Fraction(tau_r) + Fraction(eta)) / (1 - Fraction(eta_prime))
    if radius <= 0:
        return set()
    return list_in_space(H, inst, radius, strict=True, limit=limit)


def planted_instance(code: FrsCode, ell: int, planted: int, noise, rng: np.random.Generator,
                     delta=None, space: Subspace | None = None):
    """Lists built around ``planted`` random codewords (from ``space`` if given).

    Each L_i holds the planted symbols padded with random distinct symbols to
    size ell; then, for each planted codeword, a ``noise`` fraction of its
    coordinates have its symbol swapped for a random symbol outside the list.
    Returns ``(instance, planted_codewords)``.
    """
    q, n, s = code.q, code.n, code.s
    if planted > ell:
        raise ValueError("cannot plant more codewords than the list size")
    noise = Fraction(noise)
    words = []
    for _ in range(planted):
        if space is None:
            msg = [int(x) for x in rng.integers(0, q, size=code.k)]
            words.append(encode(code, msg))
        else:
            coeffs = [int(x) for x in rng.integers(0, q, size=space.dim)]
            words.append(combine(coeffs, space.basis, q, space.length))

    def random_symbol():
        return tuple(int(x) for x in rng.integers(0, q, size=s))

    lists = []
    for i in range(n):
        L = {w[i * s:(i + 1) * s] for w in words}
        while len(L) < ell:
            L.add(random_symbol())
        lists.append(L)
    bad = math.floor(noise * n)
    for w in words:
        for i in sorted(int(x) for x in rng.choice(n, size=bad, replace=False)):
            sym = w[i * s:(i + 1) * s]
            if sym in lists[i]:
                lists[i].discard(sym)
                new = random_symbol()
                while new in lists[i] or new == sym:
                    new = random_symbol()
                lists[i].add(new)
    delta = noise if delta is None else delta
    return ListRecoveryInstance(tuple(frozenset(L) for L in lists), ell, Fraction(delta)), words


def report(code: FrsCode, inst: ListRecoveryInstance, cfg: RecoveryConfig, out: RecoveryOutput,
           planted: Sequence[Vector] = ()) -> dict:
    """JSON-ready report of a recovery run."""
    runs = []
    for run in out.runs:
        item = {"index": run.index, "trace": run.trace.to_json()}
        if run.sumset is None:
            item["failed"] = True
        else:
            item["sumset"] = run.sumset.to_json()
        runs.append(item)
    bounds = {"list_size": None, "bcz": None}
    if out.dim:
        tau_r = tau_frs(code, out.dim)
        bounds["list_size"] = str(bound_list_size(out.dim, cfg.eta, cfg.eta_prime, inst.ell))
        eps = bcz_epsilon_matching(tau_r, cfg.eta, cfg.eta_prime)
        if eps > 0 and tau_r + eps <= 1:
            bounds["bcz"] = str(bound_bcz(inst.ell, tau_r, eps))
    planted = [tuple(c) for c in planted]
    doc = {
        "config": cfg.to_json(),
        "code_params": code.to_json(),
        "step1": {"mode": cfg.step1_mode, "dim": out.dim,
                  "offset": None if out.offset is None else list(out.offset)},
        "t": out.t,
        "sumset_dim_bound": out.sumset_dim_bound,
        "runs": runs,
        "coverage": {"planted": [list(c) for c in planted],
                     "covered": all(out.covers(c) for c in planted)},
        "bounds": bounds,
        "stats": out.stats,
    }
    if out.filtered is not None:
        doc["filtered"] = [list(v) for v in out.filtered]
    return doc
