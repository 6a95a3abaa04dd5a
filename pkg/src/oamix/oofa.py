"""Addition orders and pairwise-order (PWO) sign factors.

The sign factor z_jk for a pair j < k is +1 when component j is added
before component k, -1 when after, and 0 when either component is absent
from the blend (zero masking).  This module maps orderings to sign
vectors and back, expands base designs over all orderings of each run's
support, crosses proportion designs with total-amount levels, and scales
amount designs to a physical maximum.
"""

from __future__ import annotations

from dataclasses import replace
from itertools import permutations
from math import isqrt
from typing import Iterable, Sequence

from .core import Design, DesignPoint, Kind, as_fraction, validate_point
from .errors import (
    AlreadyExpanded,
    DuplicateLevel,
    EmptyLevels,
    InconsistentPwo,
    NegativeEntry,
    NonPositiveScale,
    OrderingSupportMismatch,
    WrongKind,
)

__all__ = [
    "pwo_pairs",
    "pwo_from_ordering",
    "ordering_from_pwo",
    "oofa_expand",
    "cross_amounts",
    "scale_amounts",
    "validate_design",
]


def pwo_pairs(m: int) -> tuple[tuple[int, int], ...]:
    """All pairs (j, k) with 1 <= j < k <= m, lexicographic."""
    return tuple((j, k) for j in range(1, m + 1) for k in range(j + 1, m + 1))


def pwo_from_ordering(point: DesignPoint, ordering: Sequence[int]) -> tuple[int, ...]:
    """Sign vector over pwo_pairs(point.m) induced by an addition order.

    `ordering` must be a permutation of the point's support; pairs with a
    component outside the support are masked to 0.
    """
    ordering = tuple(int(c) for c in ordering)
    support = point.support()
    if tuple(sorted(ordering)) != support:
        raise OrderingSupportMismatch(
            f"ordering {ordering} is not a permutation of the support {support}"
        )
    pos = {c: i for i, c in enumerate(ordering)}
    out = []
    for j, k in pwo_pairs(point.m):
        if j in pos and k in pos:
            out.append(1 if pos[j] < pos[k] else -1)
        else:
            out.append(0)
    return tuple(out)


def _m_from_pairs(n_pairs: int) -> int:
    m = (1 + isqrt(1 + 8 * n_pairs)) // 2
    if m * (m - 1) // 2 != n_pairs:
        raise InconsistentPwo(f"{n_pairs} entries is not a full j<k pair set")
    return m


def ordering_from_pwo(support: Iterable[int], pwo: Sequence[int]) -> tuple[int, ...]:
    """The unique permutation of `support` inducing the given sign vector.

    Inverse of pwo_from_ordering.  Raises InconsistentPwo when the signs
    violate zero masking or cannot come from any total order (a cyclic
    pattern such as z12=+1, z23=+1, z13=-1 on full support).
    """
    support = tuple(sorted(int(c) for c in support))
    pwo = tuple(int(z) for z in pwo)
    if any(z not in (-1, 0, 1) for z in pwo):
        raise InconsistentPwo("sign entries must be -1, 0, or +1")
    m = _m_from_pairs(len(pwo))
    if len(support) <= 1:
        if any(pwo):
            raise InconsistentPwo("nonzero signs with fewer than two active components")
        return support
    if support[-1] > m:
        raise InconsistentPwo(f"support {support} exceeds the {m} components the signs cover")
    active = set(support)
    wins = {c: 0 for c in support}
    for (j, k), z in zip(pwo_pairs(m), pwo):
        if j in active and k in active:
            if z == 0:
                raise InconsistentPwo(f"z{j}{k} must be nonzero: both components are active")
            wins[j if z == 1 else k] += 1
        elif z != 0:
            raise InconsistentPwo(f"z{j}{k} must be zero: an absent component is involved")
    order = tuple(sorted(support, key=lambda c: (-wins[c], c)))
    # ties in win counts only arise from cyclic patterns; recomputing catches them
    pos = {c: i for i, c in enumerate(order)}
    for (j, k), z in zip(pwo_pairs(m), pwo):
        if j in active and k in active and z != (1 if pos[j] < pos[k] else -1):
            raise InconsistentPwo("sign pattern is not induced by any addition order")
    return order


def oofa_expand(design: Design) -> Design:
    """Replace each base run of support size s by its s! ordered runs.

    Orderings are enumerated in lexicographic order of the support indices;
    runs with s <= 1 pass through as a single run with an all-zero sign
    vector.  Amount tags and coordinates are unchanged.
    """
    runs = []
    for run in design.runs:
        if run.pwo is not None:
            raise AlreadyExpanded("design already carries orderings")
        support = run.point.support()
        if len(support) <= 1:
            orderings: Iterable[tuple[int, ...]] = (support,)
        else:
            orderings = permutations(support)
        for ordering in orderings:
            runs.append(
                replace(run, ordering=ordering, pwo=pwo_from_ordering(run.point, ordering))
            )
    return replace(design, runs=tuple(runs))


def cross_amounts(design: Design, levels: Iterable) -> Design:
    """Replicate the whole design once per total-amount level, tagging each
    run with its level.  Output is level-major: all runs at the first level,
    then all at the second, and so on."""
    if design.kind is not Kind.PROPORTION:
        raise WrongKind("amount crossing applies to proportion designs")
    if any(run.amount is not None for run in design.runs):
        raise WrongKind("design already carries amount levels")
    coerced = tuple(as_fraction(v) for v in levels)
    if not coerced:
        raise EmptyLevels("need at least one amount level")
    if len(set(coerced)) != len(coerced):
        raise DuplicateLevel(f"amount levels contain duplicates: {coerced}")
    if any(v < 0 for v in coerced):
        raise NegativeEntry("amount levels must be nonnegative")
    runs = tuple(replace(run, amount=level) for level in coerced for run in design.runs)
    return replace(design, runs=runs)


def scale_amounts(design: Design, a_max) -> Design:
    """Multiply every coordinate and per-run total by `a_max`; sign vectors
    and orderings are unchanged."""
    if design.kind is not Kind.AMOUNT:
        raise WrongKind("amount scaling applies to amount designs")
    scale = as_fraction(a_max)
    if scale <= 0:
        raise NonPositiveScale(f"scale must be positive, got {scale}")
    runs = []
    for run in design.runs:
        point = DesignPoint(tuple(v * scale for v in run.point.values), Kind.AMOUNT)
        amount = None if run.amount is None else run.amount * scale
        runs.append(replace(run, point=point, amount=amount))
    return replace(design, runs=tuple(runs))


def validate_design(design: Design) -> None:
    """Structural check used by readers and the CLI: homogeneous m and kind,
    valid points, and sign vectors consistent with each run's ordering."""
    expanded_state = None
    for idx, run in enumerate(design.runs, start=1):
        if run.point.m != design.m:
            raise WrongKind(f"run {idx} has {run.point.m} components, design says {design.m}")
        if run.point.kind is not design.kind:
            raise WrongKind(f"run {idx} kind {run.point.kind} disagrees with design kind")
        validate_point(run.point)
        has_pwo = run.pwo is not None
        if expanded_state is None:
            expanded_state = has_pwo
        elif expanded_state != has_pwo:
            raise WrongKind("design mixes expanded and unexpanded runs")
        if has_pwo:
            if run.ordering is None:
                raise OrderingSupportMismatch(f"run {idx} has signs but no ordering")
            expected = pwo_from_ordering(run.point, run.ordering)
            if expected != run.pwo:
                raise InconsistentPwo(f"run {idx} sign vector disagrees with its ordering")
