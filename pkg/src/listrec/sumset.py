"""Sum-set descriptions and the agreement-set to sum-set reduction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .frs import EnumerationLimit, enum_limit
from .gf import inv_mod
from .instance import ListRecoveryInstance
from .vspace import Subspace, combine, solve_linear

Vector = tuple


@dataclass(frozen=True)
class SumSet:
    """The set {a_1 + ... + a_u' : a_i in summands[i]}; no summands means {0}."""

    summands: tuple[tuple[Vector, ...], ...]
    u: int
    v: int
    q: int
    length: int

    def __post_init__(self):
        if len(self.summands) > self.u:
            raise ValueError(f"{len(self.summands)} summands exceed declared u={self.u}")
        for A in self.summands:
            if len(A) > self.v:
                raise ValueError(f"summand of size {len(A)} exceeds declared v={self.v}")
            for a in A:
                if len(a) != self.length:
                    raise ValueError("summand vectors must share one shape")

    @property
    def size_bound(self) -> int:
        out = 1
        for A in self.summands:
            out *= len(A)
        return out

    def to_json(self) -> dict:
        return {"u": self.u, "v": self.v, "summands": [[list(a) for a in A] for A in self.summands]}

    @classmethod
    def from_json(cls, d: dict, q: int, length: int) -> SumSet:
        return cls(tuple(tuple(tuple(a) for a in A) for A in d["summands"]), d["u"], d["v"], q, length)


@dataclass(frozen=True)
class AgreementCertificate:
    T: tuple[int, ...]
    positions: tuple[tuple[int, ...], ...]  # rows within each coordinate of T


def independence_positions(H: Subspace, T: Sequence[int]) -> AgreementCertificate:
    """Greedy first-nonzero pivot scan over (coordinate, row) in flat order."""
    q, s, r = H.q, H.s, H.dim
    T = tuple(sorted(T))
    echelon: list[tuple[int, list[int]]] = []  # (pivot index, normalized column)
    chosen: list[list[int]] = [[] for _ in T]
    found = 0
    for k, t in enumerate(T):
        for j in range(s):
            if found == r:
                break
            col = [row[t * s + j] for row in H.basis]
            for p, e in echelon:
                c = col[p]
                if c:
                    col = [(a - c * b) % q for a, b in zip(col, e)]
            p = next((idx for idx, x in enumerate(col) if x), None)
            if p is None:
                continue
            f = inv_mod(col[p], q)
            echelon.append((p, [x * f % q for x in col]))
            chosen[k].append(j)
            found += 1
    if found < r:
        raise ValueError("H has a nonzero element vanishing on all of T")
    return AgreementCertificate(T, tuple(tuple(c) for c in chosen))


def reduce_with_certificate(H: Subspace, T: Iterable[int], lists: ListRecoveryInstance):
    T = tuple(sorted(set(T)))
    if len(T) > H.dim:
        raise ValueError(f"|T| = {len(T)} exceeds dim H = {H.dim}")
    cert = independence_positions(H, T)
    q, s, r = H.q, H.s, H.dim
    flat = [t * s + j for t, rows in zip(cert.T, cert.positions) for j in rows]
    # column k of the system is the basis restricted to flat[k]; solve M^T x = target
    Mt = [[row[p] for row in H.basis] for p in flat]
    summands = []
    offset = 0
    for t, rows in zip(cert.T, cert.positions):
        if not rows:
            continue
        members = set()
        for beta in lists.lists[t]:
            target = [0] * r
            for k, j in enumerate(rows):
                target[offset + k] = beta[j] % q
            x, null = solve_linear(Mt, target, q)
            if x is None or null:
                raise AssertionError("independence positions must give a unique solution")
            members.add(combine(x, H.basis, q, H.length))
        summands.append(tuple(sorted(members)))
        offset += len(rows)
    P = SumSet(tuple(summands), u=len(T), v=lists.ell, q=q, length=H.length)
    return P, cert


def reduce(H: Subspace, T: Iterable[int], lists: ListRecoveryInstance) -> SumSet:
    """Summand sets whose sum-set contains every c in H with c_t in L_t for all t in T."""
    return reduce_with_certificate(H, T, lists)[0]


def enumerate_sumset(P: SumSet, limit: int | None = None) -> set[Vector]:
    limit = enum_limit() if limit is None else limit
    if P.size_bound > limit:
        raise EnumerationLimit(f"sum-set has up to {P.size_bound} elements, limit {limit}")
    q = P.q
    out = set()
    for combo in itertools.product(*P.summands):
        acc = [0] * P.length
        for a in combo:
            for j, x in enumerate(a):
                acc[j] += x
        out.add(tuple(x % q for x in acc))
    return out


def sumset_member(P: SumSet, v: Sequence[int], limit: int | None = None) -> bool:
    limit = enum_limit() if limit is None else limit
    if P.size_bound > limit:
        raise EnumerationLimit(f"sum-set has up to {P.size_bound} elements, limit {limit}")
    v = tuple(int(x) % P.q for x in v)
    if not P.summands:
        return not any(v)
    # peel the last summand off so only the others are enumerated
    q = P.q
    *head, last = P.summands
    last = set(last)
    for combo in itertools.product(*head):
        rest = list(v)
        for a in combo:
            for j, x in enumerate(a):
                rest[j] -= x
        if tuple(x % q for x in rest) in last:
            return True
    return False


def shift_sumset(P: SumSet, offset: Sequence[int]) -> SumSet:
    """offset + P, realised by adding ``offset`` to one summand."""
    q = P.q
    if not any(offset):
        return P
    if not P.summands:
        return SumSet(((tuple(offset),),), max(P.u, 1), max(P.v, 1), q, P.length)
    first = tuple(sorted({tuple((a + o) % q for a, o in zip(x, offset)) for x in P.summands[0]}))
    return SumSet((first,) + P.summands[1:], P.u, P.v, q, P.length)
