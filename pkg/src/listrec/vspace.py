"""Exact subspaces and affine spaces of (F_q^s)^n.

Everything is stored in reduced row-echelon form so that equal spaces compare
and hash equal.  Vectors are flat int tuples, coordinate ``i`` row ``j`` at
index ``i*s + j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .frs import EnumerationLimit, enum_limit
from .gf import inv_mod
from .instance import ListRecoveryInstance

Vector = tuple


def rref(rows: Iterable[Sequence[int]], q: int, ncols: int) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Reduced row-echelon basis and pivot columns of the row span."""
    rows = [[x % q for x in r] for r in rows]
    for r in rows:
        if len(r) != ncols:
            raise ValueError(f"row of length {len(r)}, expected {ncols}")
    pivots = []
    rank = 0
    for col in range(ncols):
        if rank == len(rows):
            break
        p = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        prow = rows[rank]
        f = inv_mod(prow[col], q)
        if f != 1:
            prow = rows[rank] = [x * f % q for x in prow]
        for i in range(len(rows)):
            if i != rank:
                c = rows[i][col]
                if c:
                    rows[i] = [(a - c * b) % q for a, b in zip(rows[i], prow)]
        pivots.append(col)
        rank += 1
    return tuple(tuple(r) for r in rows[:rank]), tuple(pivots)


def solve_linear(A: Sequence[Sequence[int]], b: Sequence[int], q: int):
    """Solve ``A x = b`` over F_q.

    Returns ``(x, null_basis)`` with ``x`` one solution (free variables zero) and
    ``null_basis`` spanning the solutions of ``A x = 0``; ``x`` is None when the
    system is inconsistent.
    """
    m = len(A)
    nvars = len(A[0]) if m else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    red, piv = rref(aug, q, nvars + 1)
    if nvars in piv:
        x = None
    else:
        x = [0] * nvars
        for row, p in zip(red, piv):
            x[p] = row[nvars]
        x = tuple(x)
    pivset = set(piv)
    null = []
    for f in range(nvars):
        if f in pivset:
            continue
        v = [0] * nvars
        v[f] = 1
        for row, p in zip(red, piv):
            if p < nvars:
                v[p] = -row[f] % q
        null.append(tuple(v))
    return x, null


def combine(coeffs: Sequence[int], basis: Sequence[Vector], q: int, length: int) -> Vector:
    out = [0] * length
    for c, row in zip(coeffs, basis):
        if c:
            for j, x in enumerate(row):
                if x:
                    out[j] += c * x
    return tuple(x % q for x in out)


@dataclass(frozen=True)
class Subspace:
    q: int
    n: int
    s: int
    basis: tuple[Vector, ...]
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def length(self) -> int:
        return self.n * self.s

    @property
    def size(self) -> int:
        return self.q**self.dim

    def zero(self) -> Vector:
        return (0,) * self.length

    def reduce(self, v: Sequence[int]) -> Vector:
        """Remainder of ``v`` after clearing the pivot columns."""
        if len(v) != self.length:
            raise ValueError(f"vector of length {len(v)}, expected {self.length}")
        q = self.q
        v = [x % q for x in v]
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c:
                v = [(a - c * b) % q for a, b in zip(v, row)]
        return tuple(v)

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def coords(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coefficients of ``v`` in the stored basis (``v`` must be a member)."""
        return tuple(v[p] % self.q for p in self.pivots)

    def to_json(self) -> dict:
        return {"shape": {"n": self.n, "s": self.s, "q": self.q},
                "basis": [list(r) for r in self.basis]}

    @classmethod
    def from_json(cls, d: dict) -> Subspace:
        sh = d["shape"]
        return span(d["basis"], sh["q"], sh["n"], sh["s"])


@dataclass(frozen=True)
class AffineSpace:
    offset: Vector
    direction: Subspace

    @property
    def dim(self) -> int:
        return self.direction.dim

    def __contains__(self, v) -> bool:
        q = self.direction.q
        return tuple((a - b) % q for a, b in zip(v, self.offset)) in self.direction

    def to_json(self) -> dict:
        return {"offset": list(self.offset), "direction": self.direction.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> AffineSpace:
        return affine(d["offset"], Subspace.from_json(d["direction"]))


def span(vectors: Iterable[Sequence[int]], q: int, n: int, s: int) -> Subspace:
    basis, pivots = rref(vectors, q, n * s)
    return Subspace(q, n, s, basis, pivots)


def zero_space(q: int, n: int, s: int) -> Subspace:
    return Subspace(q, n, s, (), ())


def affine(offset: Sequence[int], direction: Subspace) -> AffineSpace:
    return AffineSpace(direction.reduce(offset), direction)


def member(H: Subspace | AffineSpace, v: Sequence[int]) -> bool:
    return v in H


def restriction(H: Subspace, i: int) -> list[tuple[int, ...]]:
    """The r x s block of the basis on coordinate ``i``."""
    s = H.s
    return [row[i * s:(i + 1) * s] for row in H.basis]


def coordinate_zero_subspace(H: Subspace, i: int) -> Subspace:
    """{h in H : h_i = 0} for a 0-based coordinate ``i``."""
    if not 0 <= i < H.n:
        raise IndexError(f"coordinate {i} out of range for n={H.n}")
    if H.dim == 0:
        return H
    q, s, r = H.q, H.s, H.dim
    block = restriction(H, i)
    if not any(any(row) for row in block):
        return H
    # left null space of the block: eliminate [block | I] on the block columns
    rows = [list(block[j]) + [int(j == t) for t in range(r)] for j in range(r)]
    rank = 0
    for col in range(s):
        p = next((j for j in range(rank, r) if rows[j][col]), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        prow = rows[rank]
        f = inv_mod(prow[col], q)
        for j in range(rank + 1, r):
            c = rows[j][col]
            if c:
                c = c * f % q
                rows[j] = [(a - c * b) % q for a, b in zip(rows[j], prow)]
        rank += 1
        if rank == r:
            break
    kernel = [row[s:] for row in rows[rank:]]
    vecs = [combine(x, H.basis, q, H.length) for x in kernel]
    return span(vecs, q, H.n, s)


def restrict_affine(A: AffineSpace, i: int, value: Sequence[int]) -> AffineSpace | None:
    """{h in A : h_i = value}, or None when empty."""
    D = A.direction
    q, s = D.q, D.s
    target = [(int(v) - o) % q for v, o in zip(value, A.offset[i * s:(i + 1) * s])]
    if D.dim == 0:
        return A if not any(target) else None
    block = restriction(D, i)
    # x @ block = target  <=>  block^T x = target
    At = [[block[j][row] for j in range(D.dim)] for row in range(s)]
    x, _ = solve_linear(At, target, q)
    if x is None:
        return None
    shift = combine(x, D.basis, q, D.length)
    offset = tuple((a + b) % q for a, b in zip(A.offset, shift))
    return affine(offset, coordinate_zero_subspace(D, i))


def enumerate_blocks(H: Subspace, limit: int | None = None, block: int = 1 << 16) -> Iterator[np.ndarray]:
    """All q^dim members as int64 arrays of shape (m, s*n)."""
    limit = enum_limit() if limit is None else limit
    if H.size > limit:
        raise EnumerationLimit(f"q^dim = {H.size} exceeds enumeration limit {limit}")
    q, r = H.q, H.dim
    if r == 0:
        yield np.zeros((1, H.length), dtype=np.int64)
        return
    B = np.array(H.basis, dtype=np.int64)
    for start in range(0, H.size, block):
        idx = np.arange(start, min(start + block, H.size), dtype=np.int64)
        coef = np.empty((idx.size, r), dtype=np.int64)
        for d in range(r):
            coef[:, d] = idx % q
            idx = idx // q
        yield (coef @ B) % q


def enumerate_subspace(H: Subspace, limit: int | None = None) -> Iterator[Vector]:
    limit = enum_limit() if limit is None else limit
    if H.size > limit:
        raise EnumerationLimit(f"q^dim = {H.size} exceeds enumeration limit {limit}")
    for coeffs in itertools.product(range(H.q), repeat=H.dim):
        yield combine(coeffs, H.basis, H.q, H.length)


def design_statistic(H: Subspace) -> Fraction:
    """Average over coordinates of dim{h in H : h_i = 0}."""
    if H.dim < 1:
        raise ValueError("design statistic needs a subspace of dimension >= 1")
    return Fraction(sum(coordinate_zero_subspace(H, i).dim for i in range(H.n)), H.n)


def translate_to_linear(A: AffineSpace, inst: ListRecoveryInstance):
    """Shift the problem by ``A.offset`` so the space becomes linear.

    Returns ``(direction, shifted_instance, offset)``; add ``offset`` back to
    anything found in the shifted problem.
    """
    D = A.direction
    q, s = D.q, D.s
    o = A.offset
    lists = []
    for i, L in enumerate(inst.lists):
        oi = o[i * s:(i + 1) * s]
        lists.append(frozenset(tuple((a - b) % q for a, b in zip(x, oi)) for x in L))
    return D, ListRecoveryInstance(tuple(lists), inst.ell, inst.delta), o


def add_vectors(a: Sequence[int], b: Sequence[int], q: int) -> Vector:
    return tuple((x + y) % q for x, y in zip(a, b))


def sub_vectors(a: Sequence[int], b: Sequence[int], q: int) -> Vector:
    return tuple((x - y) % q for x, y in zip(a, b))
