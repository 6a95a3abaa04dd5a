"""Exact-rational design points, runs, and design containers.

Everything on the generation side is stored as `fractions.Fraction`, so
lattice values like 1/3 stay exact; conversion to binary floating point
happens only when a numeric model matrix is materialized.  Component
indices are 1-based on every public surface.  All containers are frozen
and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import NegativeEntry, SumNotOne, TotalExceedsMax, WrongKind

__all__ = [
    "Kind",
    "DesignPoint",
    "OofARun",
    "Design",
    "as_fraction",
    "validate_point",
    "total_amount",
]


class Kind(Enum):
    """Whether coordinates are simplex proportions or physical amounts."""

    PROPORTION = "proportion"
    AMOUNT = "amount"


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, and strings like '1/3' or '0.75' exactly.

    Floats are rejected: a binary float has already lost the decimal value
    it was meant to carry, and exactness is the whole point here.
    """
    if isinstance(value, float):
        raise TypeError(
            f"refusing lossy coercion of float {value!r}; pass a string, int, or Fraction"
        )
    return Fraction(value)


@dataclass(frozen=True)
class DesignPoint:
    """A single blend: a vector of proportions or amounts."""

    values: tuple[Fraction, ...]
    kind: Kind

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    @property
    def m(self) -> int:
        return len(self.values)

    def support(self) -> tuple[int, ...]:
        """1-based indices of the nonzero coordinates, ascending."""
        return tuple(i for i, v in enumerate(self.values, start=1) if v != 0)


@dataclass(frozen=True)
class OofARun:
    """One design row: a point, optionally an addition order with its sign
    vector, and optionally a total-amount tag.

    `pwo` is aligned with ``oofa.pwo_pairs(m)`` and is None until the design
    is expanded over orderings.  `amount` is the exact per-run total for
    amount-kind points, or the attached total-amount level for proportion
    points (None until one is attached).
    """

    point: DesignPoint
    ordering: tuple[int, ...] | None = None
    pwo: tuple[int, ...] | None = None
    amount: Fraction | None = None

    def __post_init__(self):
        if self.ordering is not None:
            object.__setattr__(self, "ordering", tuple(int(c) for c in self.ordering))
        if self.pwo is not None:
            object.__setattr__(self, "pwo", tuple(int(z) for z in self.pwo))
        if self.amount is not None:
            object.__setattr__(self, "amount", as_fraction(self.amount))


@dataclass(frozen=True)
class Design:
    """An ordered collection of runs sharing component count and kind."""

    m: int
    kind: Kind
    runs: tuple[OofARun, ...]

    def __post_init__(self):
        object.__setattr__(self, "runs", tuple(self.runs))

    def __len__(self) -> int:
        return len(self.runs)

    @property
    def n_runs(self) -> int:
        return len(self.runs)

    @property
    def is_expanded(self) -> bool:
        """True when every run carries an addition order and sign vector."""
        return all(run.pwo is not None for run in self.runs)

    @property
    def amount_levels(self) -> tuple[Fraction, ...]:
        """Sorted distinct per-run totals (empty when none are attached)."""
        return tuple(sorted({run.amount for run in self.runs if run.amount is not None}))


def validate_point(point: DesignPoint, a_max=None) -> None:
    """Raise unless the point satisfies its kind's constraints.

    Proportions must be nonnegative and sum to exactly 1.  Amounts must be
    nonnegative; when `a_max` is given, the total may not exceed it.
    """
    for i, v in enumerate(point.values, start=1):
        if v < 0:
            raise NegativeEntry(f"component {i} is negative: {v}")
    if point.kind is Kind.PROPORTION:
        total = sum(point.values, Fraction(0))
        if total != 1:
            raise SumNotOne(f"proportions sum to {total}, expected exactly 1")
    elif a_max is not None:
        total = sum(point.values, Fraction(0))
        bound = as_fraction(a_max)
        if total > bound:
            raise TotalExceedsMax(f"total amount {total} exceeds maximum {bound}")


def total_amount(point: DesignPoint) -> Fraction:
    """Exact total of an amount-kind point."""
    if point.kind is not Kind.AMOUNT:
        raise WrongKind("total_amount applies to amount-kind points")
    return sum(point.values, Fraction(0))
