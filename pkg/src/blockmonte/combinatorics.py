"""Exact permutation predicates and counts.

These are the oracles behind the e and sec(1)+tan(1) estimators, so every
count is computed in exact integer arithmetic; no floating point is allowed
anywhere in this module.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Sequence

# A permutation of [n] is a sequence containing 1..n exactly once.
Permutation = tuple[int, ...]

# Counts above n = 20 no longer fit 64-bit integers, which is the stated
# interchange contract for these oracles.
_MAX_COUNT_N = 20


def validate_permutation(entries: Sequence[int]) -> Permutation:
    perm = tuple(int(v) for v in entries)
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise ValueError(f"not a permutation of 1..{len(perm)}: {entries!r}")
    return perm


def is_derangement(entries: Sequence[int]) -> bool:
    """True iff no entry sits at its own position (p_i != i for all i)."""
    perm = validate_permutation(entries)
    return all(value != position for position, value in enumerate(perm, start=1))


def is_alternating(entries: Sequence[int]) -> bool:
    """True iff entries zigzag: p1 < p2 > p3 < p4 ...

    Lengths 0 and 1 are alternating vacuously.
    """
    perm = validate_permutation(entries)
    for i in range(len(perm) - 1):
        rising = i % 2 == 0
        if rising and not perm[i] < perm[i + 1]:
            return False
        if not rising and not perm[i] > perm[i + 1]:
            return False
    return True


def derangement_count(n: int) -> int:
    """Number of derangements of [n]: sum_{k=0}^{n} (-1)^k n!/k!."""
    _check_count_arg(n)
    factorial_n = math.factorial(n)
    return sum((-1) ** k * (factorial_n // math.factorial(k)) for k in range(n + 1))


def zigzag_count(n: int) -> int:
    """Number of alternating permutations of [n] (A_0 = A_1 = 1).

    Computed with the boustrophedon recurrence; the A_0 = A_1 = 1 convention
    makes sum A_n/n! equal sec(1)+tan(1) with the series starting at n = 0.
    """
    _check_count_arg(n)
    row = [1]
    for i in range(1, n + 1):
        prev = row
        row = [0]
        for k in range(1, i + 1):
            row.append(row[k - 1] + prev[i - k])
    return row[-1]


def enumerate_permutations(n: int) -> Iterator[Permutation]:
    """All n! permutations of [n], each exactly once, lexicographic order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > 9:
        raise ValueError("enumeration supported only for n <= 9")
    return itertools.permutations(range(1, n + 1))


def _check_count_arg(n: int) -> None:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > _MAX_COUNT_N:
        raise OverflowError(f"count for n > {_MAX_COUNT_N} exceeds 64-bit range")
