from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Symbol = tuple  # tuple[int, ...] of length s


@dataclass(frozen=True)
class ListRecoveryInstance:
    """Per-coordinate candidate lists plus a decoding radius."""

    lists: tuple[frozenset, ...]
    ell: int
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "lists", tuple(frozenset(tuple(x) for x in L) for L in self.lists))
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.ell < 1:
            raise ValueError("ell must be positive")
        for i, L in enumerate(self.lists):
            if len(L) > self.ell:
                raise ValueError(f"list {i} has {len(L)} > ell={self.ell} entries")
        if not 0 <= self.delta <= 1:
            raise ValueError("delta must lie in [0, 1]")

    @property
    def n(self) -> int:
        return len(self.lists)

    def agreements(self, v: Sequence[int], s: int) -> int:
        if len(v) != s * self.n:
            raise ValueError(f"vector of length {len(v)} does not match n={self.n}, s={s}")
        return sum(tuple(v[i * s:(i + 1) * s]) in L for i, L in enumerate(self.lists))

    def to_json(self) -> dict:
        return {"ell": self.ell, "delta": str(self.delta),
                "lists": [sorted(list(x) for x in L) for L in self.lists]}

    @classmethod
    def from_json(cls, d: dict) -> ListRecoveryInstance:
        return cls(tuple(frozenset(tuple(x) for x in L) for L in d["lists"]),
                   int(d["ell"]), Fraction(d.get("delta", "0")))


def make_instance(lists: Iterable[Iterable[Sequence[int]]], ell: int | None = None,
                  delta=0) -> ListRecoveryInstance:
    lists = tuple(frozenset(tuple(x) for x in L) for L in lists)
    if ell is None:
        ell = max((len(L) for L in lists), default=1) or 1
    return ListRecoveryInstance(lists, ell, Fraction(delta))
