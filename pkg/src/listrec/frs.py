"""Folded Reed-Solomon codes over prime fields.

Codewords are flat tuples of length ``s*n``: coordinate ``i`` (0-based), row
``j`` lives at index ``i*s + j``.  :func:`symbols` gives the folded view.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .gf import find_primitive_root, inv_mod, is_prime

Vector = tuple  # flat tuple[int, ...] of length s*n

DEFAULT_ENUM_LIMIT = 10**6


def enum_limit() -> int:
    return int(os.environ.get("LISTREC_ENUM_LIMIT", DEFAULT_ENUM_LIMIT))


class EnumerationLimit(RuntimeError):
    """Raised when an exhaustive enumeration would exceed the configured limit."""


@dataclass(frozen=True)
class FrsCode:
    q: int
    n: int
    k: int
    s: int
    gamma: int
    alphas: tuple[int, ...]

    @property
    def length(self) -> int:
        return self.s * self.n

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.s * self.n)

    @cached_property
    def eval_points(self) -> tuple[int, ...]:
        q, g = self.q, self.gamma
        return tuple(a * pow(g, j, q) % q for a in self.alphas for j in range(self.s))

    @cached_property
    def generator(self) -> tuple[Vector, ...]:
        """Rows are the encodings of x^0, ..., x^(k-1)."""
        q = self.q
        return tuple(tuple(pow(x, d, q) for x in self.eval_points) for d in range(self.k))

    @property
    def size(self) -> int:
        return self.q**self.k

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "k": self.k, "s": self.s,
                "gamma": self.gamma, "alphas": list(self.alphas)}

    @classmethod
    def from_json(cls, d: dict) -> FrsCode:
        code = new_frs(d["q"], d["n"], d["k"], d["s"])
        if "alphas" in d and tuple(d["alphas"]) != code.alphas:
            raise ValueError("only the standard evaluation points gamma^(s*i) are supported")
        return code


def new_frs(q: int, n: int, k: int, s: int) -> FrsCode:
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")
    if n < 1 or s < 1:
        raise ValueError("n and s must be positive")
    if q <= s * n:
        raise ValueError(f"need q > s*n, got q={q}, s*n={s * n}")
    if not 1 <= k <= s * n:
        raise ValueError(f"need 1 <= k <= s*n={s * n}, got k={k}")
    gamma = find_primitive_root(q).value
    alphas = tuple(pow(gamma, s * i, q) for i in range(n))
    code = FrsCode(q, n, k, s, gamma, alphas)
    _check_points(code)
    return code


def _check_points(code: FrsCode) -> None:
    q, g = code.q, code.gamma
    for i, ai in enumerate(code.alphas):
        shifted = {ai * pow(g, t, q) % q for t in range(code.s)}
        for j, aj in enumerate(code.alphas):
            if i != j and aj in shifted:
                raise ValueError(f"evaluation points collide: alpha_{i} * gamma^t = alpha_{j}")


def horner(coeffs: Sequence[int], x: int, q: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


def encode(code: FrsCode, msg: Sequence[int]) -> Vector:
    if len(msg) != code.k:
        raise ValueError(f"message must have length k={code.k}, got {len(msg)}")
    q = code.q
    msg = [int(c) % q for c in msg]
    return tuple(horner(msg, x, q) for x in code.eval_points)


def symbols(v: Vector, s: int) -> list[tuple[int, ...]]:
    return [tuple(v[i:i + s]) for i in range(0, len(v), s)]


def symbol(v: Vector, i: int, s: int) -> tuple[int, ...]:
    return tuple(v[i * s:(i + 1) * s])


def flatten(syms: Sequence[Sequence[int]]) -> Vector:
    return tuple(int(x) for sym in syms for x in sym)


def agreement_coordinates(a: Vector, b: Vector, s: int) -> set[int]:
    if len(a) != len(b) or len(a) % s:
        raise ValueError("shape mismatch")
    return {i for i in range(len(a) // s) if a[i * s:(i + 1) * s] == b[i * s:(i + 1) * s]}


def tau_frs(code: FrsCode, r: int) -> Fraction:
    """Subspace-design function s*R/(s-r+1) for r <= s, else 1."""
    return tau_value(code.s, code.rate, r)


def tau_value(s: int, rate: Fraction, r: int) -> Fraction:
    if r < 1:
        raise ValueError("r must be positive")
    if r > s:
        return Fraction(1)
    return s * Fraction(rate) / (s - r + 1)


def relative_distance(code: FrsCode) -> Fraction:
    """Two distinct codewords agree on at most floor((k-1)/s) coordinates."""
    return 1 - Fraction((code.k - 1) // code.s, code.n)


def iter_codeword_blocks(code: FrsCode, limit: int | None = None,
                         block: int = 1 << 16) -> Iterator[np.ndarray]:
    """All codewords, as int64 arrays of shape (m, s*n), in message order."""
    limit = enum_limit() if limit is None else limit
    if code.size > limit:
        raise EnumerationLimit(f"q^k = {code.size} exceeds enumeration limit {limit}")
    G = np.array(code.generator, dtype=np.int64)
    q, k = code.q, code.k
    for start in range(0, code.size, block):
        idx = np.arange(start, min(start + block, code.size), dtype=np.int64)
        msgs = np.empty((idx.size, k), dtype=np.int64)
        for d in range(k):
            msgs[:, d] = idx % q
            idx = idx // q
        yield (msgs @ G) % q


def interpolate(code: FrsCode, coords: Sequence[int], syms: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Message whose encoding has the given symbols on ``coords``, or None.

    Needs ``len(coords)*s >= k``; the first k evaluations fix the polynomial and
    the rest are checked for consistency.
    """
    q, s = code.q, code.s
    xs, ys = [], []
    for i, sym in zip(coords, syms):
        xs.extend(code.eval_points[i * s:(i + 1) * s])
        ys.extend(int(y) % q for y in sym)
    if len(xs) < code.k:
        raise ValueError("not enough evaluations to determine the message")
    coeffs = _lagrange(xs[:code.k], ys[:code.k], q)
    for x, y in zip(xs[code.k:], ys[code.k:]):
        if horner(coeffs, x, q) != y:
            return None
    return tuple(coeffs)


def _lagrange(xs: Sequence[int], ys: Sequence[int], q: int) -> list[int]:
    k = len(xs)
    # full product prod (x - x_j), low-degree first
    full = [1]
    for xj in xs:
        nxt = [0] * (len(full) + 1)
        for d, c in enumerate(full):
            nxt[d + 1] = (nxt[d + 1] + c) % q
            nxt[d] = (nxt[d] - xj * c) % q
        full = nxt
    out = [0] * k
    for xi, yi in zip(xs, ys):
        if yi == 0:
            continue
        # synthetic division of full by (x - xi)
        quot = [0] * k
        carry = 0
        for d in range(k, 0, -1):
            carry = (full[d] + carry * xi) % q if d < k else full[d]
            quot[d - 1] = carry
        denom = 1
        for xj in xs:
            if xj != xi:
                denom = denom * (xi - xj) % q
        scale = yi * inv_mod(denom, q) % q
        for d in range(k):
            out[d] = (out[d] + scale * quot[d]) % q
    return out
