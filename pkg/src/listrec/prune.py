"""Randomized subspace pruning.

Three pruners live here:

* :func:`fprune` -- codeword-oblivious aggressive pruning of a linear space.
  It only pins coordinates whose zero-subspace shrinks the weight
  ``dim + eta`` by a factor of at least ``1 - eta_prime``.
* :func:`prune_uniform` -- pins uniformly random coordinates of an affine
  space to a received word.
* :func:`prune_ahs` -- the same with weights ``dim H_i + eps``.

All sampling uses exact integer weights; no floats touch the sampling path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .instance import ListRecoveryInstance
from .vspace import AffineSpace, Subspace, coordinate_zero_subspace, restrict_affine


@dataclass(frozen=True)
class PruneParams:
    eta: Fraction
    eta_prime: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "eta", Fraction(self.eta))
        object.__setattr__(self, "eta_prime", Fraction(self.eta_prime))
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if not 0 <= self.eta_prime < 1:
            raise ValueError("eta_prime must lie in [0, 1)")


@dataclass(frozen=True)
class PruneTrace:
    pinned: tuple[int, ...] = ()
    dims: tuple[int, ...] = ()
    failed: bool = False

    def to_json(self) -> dict:
        return {"pinned": list(self.pinned), "dims": list(self.dims), "failed": self.failed}

    @classmethod
    def from_json(cls, d: dict) -> PruneTrace:
        return cls(tuple(d["pinned"]), tuple(d["dims"]), bool(d["failed"]))


@dataclass(frozen=True)
class WeightProfile:
    weights: tuple[Fraction | None, ...]  # None marks an excluded coordinate
    qualifying: tuple[int, ...]
    total: Fraction
    children: tuple[Subspace, ...]

    def probabilities(self) -> tuple[Fraction, ...]:
        if not self.qualifying:
            return tuple(Fraction(0) for _ in self.weights)
        return tuple(Fraction(0) if w is None else w / self.total for w in self.weights)


def wt(H: Subspace, eta) -> Fraction:
    return H.dim + Fraction(eta)


def trace_length_bound(r: int, eta_prime) -> int:
    """min(r, ceil((1/eta')(1 + max(0, ln(r*eta'))))); just r when eta' = 0."""
    eta_prime = Fraction(eta_prime)
    if eta_prime == 0 or r == 0:
        return r
    x = r * eta_prime
    if x <= 1:
        bound = math.ceil(1 / eta_prime)
    else:
        bound = math.ceil((1 + math.log(x)) / eta_prime)
    return min(r, bound)


@lru_cache(maxsize=1 << 16)
def weight_profile(H: Subspace, params: PruneParams) -> WeightProfile:
    if H.dim < 1:
        raise ValueError("weight profile needs dim >= 1")
    eta, keep = params.eta, 1 - params.eta_prime
    cap = keep * wt(H, eta)
    children = tuple(coordinate_zero_subspace(H, i) for i in range(H.n))
    weights = []
    for child in children:
        w = wt(child, eta)
        # pinning a coordinate where H_i = H makes no progress, even when eta' = 0
        weights.append(w if w <= cap and child.dim < H.dim else None)
    qualifying = tuple(i for i, w in enumerate(weights) if w is not None)
    total = sum((weights[i] for i in qualifying), Fraction(0))
    return WeightProfile(tuple(weights), qualifying, total, children)


def sample_index(weights: Sequence[Fraction], rng: np.random.Generator) -> int:
    """Draw index i with probability weights[i] / sum(weights), exactly."""
    den = 1
    for w in weights:
        den = math.lcm(den, Fraction(w).denominator)
    ints = [int(Fraction(w) * den) for w in weights]
    total = sum(ints)
    if total <= 0:
        raise ValueError("all weights are zero")
    if total < 2**62:
        u = int(rng.integers(0, total))
    else:
        nbits = total.bit_length()
        while True:
            u = int.from_bytes(rng.bytes((nbits + 7) // 8), "little") >> (-nbits % 8)
            if u < total:
                break
    for i, w in enumerate(ints):
        if u < w:
            return i
        u -= w
    raise AssertionError("unreachable")


def fprune(H: Subspace, params: PruneParams, rng: np.random.Generator) -> PruneTrace:
    pinned, dims = [], []
    while H.dim > 0:
        prof = weight_profile(H, params)
        if not prof.qualifying:
            return PruneTrace(tuple(pinned), tuple(dims), failed=True)
        j = sample_index([prof.weights[i] for i in prof.qualifying], rng)
        i = prof.qualifying[j]
        H = prof.children[i]
        pinned.append(i)
        dims.append(H.dim)
    return PruneTrace(tuple(pinned), tuple(dims), failed=False)


class PruneOutcome(NamedTuple):
    codeword: tuple | None
    pinned: tuple[int, ...]


@lru_cache(maxsize=1 << 14)
def _restrictions(A: AffineSpace, y: tuple) -> tuple[AffineSpace | None, ...]:
    s = A.direction.s
    return tuple(restrict_affine(A, i, y[i * s:(i + 1) * s]) for i in range(A.direction.n))


def prune_uniform(A: AffineSpace, y: Sequence[int], epsilon, rng: np.random.Generator) -> PruneOutcome:
    """Pin uniformly random coordinates to ``y`` until one point is left.

    Picking a coordinate with H_i = H leaves the state unchanged, so we draw
    uniformly among the other coordinates; the output law is the same.
    """
    y = tuple(int(x) for x in y)
    pinned = []
    while A.dim > 0:
        rest = _restrictions(A, y)
        moves = [i for i, B in enumerate(rest) if B != A]
        i = moves[int(rng.integers(0, len(moves)))]
        pinned.append(i)
        if rest[i] is None:
            return PruneOutcome(None, tuple(pinned))
        A = rest[i]
    return PruneOutcome(A.offset, tuple(pinned))


def prune_ahs(A: AffineSpace, y: Sequence[int], epsilon, rng: np.random.Generator) -> PruneOutcome:
    """Pin coordinate i with weight dim H_i + eps (0 if H_i is empty or all of H)."""
    epsilon = Fraction(epsilon)
    y = tuple(int(x) for x in y)
    pinned = []
    while A.dim > 0:
        rest = _restrictions(A, y)
        weights = [Fraction(0) if B is None or B == A else B.dim + epsilon for B in rest]
        if not any(weights):
            return PruneOutcome(None, tuple(pinned))
        i = sample_index(weights, rng)
        pinned.append(i)
        A = rest[i]
    return PruneOutcome(A.offset, tuple(pinned))


def _vanishes_on(H: Subspace, T) -> bool:
    s = H.s
    return all(not any(row[t * s:(t + 1) * s]) for row in H.basis for t in T)


def potential(H: Subspace, c: Sequence[int], T, lists: ListRecoveryInstance, params: PruneParams) -> Fraction:
    """0 if c misses its list on some pinned coordinate, else (1-eta')^|T| / wt(H)."""
    if not _vanishes_on(H, T):
        raise ValueError("potential requires H to vanish on every coordinate of T")
    s = H.s
    for t in T:
        if tuple(c[t * s:(t + 1) * s]) not in lists.lists[t]:
            return Fraction(0)
    return (1 - params.eta_prime) ** len(T) / wt(H, params.eta)


def expected_potential_step(H: Subspace, c: Sequence[int], T, lists: ListRecoveryInstance,
                            params: PruneParams) -> Fraction:
    """Exact expectation of the potential after one fprune step."""
    if H.dim < 1:
        raise ValueError("need dim(H) >= 1")
    if tuple(c) not in H:
        raise ValueError("c must lie in H")
    prof = weight_profile(H, params)
    if not prof.qualifying:
        raise ValueError("no qualifying coordinate")
    T = frozenset(T)
    total = Fraction(0)
    for i in prof.qualifying:
        total += prof.weights[i] / prof.total * potential(prof.children[i], c, T | {i}, lists, params)
    return total
