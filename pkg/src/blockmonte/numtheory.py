"""gcd/coprimality helpers, zeta partial sums, and Euler-product partials.

``coprime_probability_exact`` is an exhaustive finite-universe oracle and
therefore returns an exact Fraction; the floating ``zeta_partial`` and
``euler_product_partial`` routes approach zeta(s) from the series and the
prime product respectively, giving two independent checks on one value.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Sequence

# zeta(2k) as a rational multiple of pi^(2k).
ZETA_EVEN_PI_COEFFICIENT = {
    2: Fraction(1, 6),
    4: Fraction(1, 90),
    6: Fraction(1, 945),
}

_ENUMERATION_LIMIT = 10 ** 8


def gcd_tuple(values: Sequence[int]) -> int:
    """gcd of all entries via iterated Euclid; the tuple is setwise coprime
    iff the result is 1."""
    if len(values) == 0:
        raise ValueError("tuple must be non-empty")
    result = 0
    for value in values:
        if value < 1 or int(value) != value:
            raise ValueError("all entries must be positive integers")
        result = math.gcd(result, int(value))
    return result


def sieve_primes(limit: int) -> list[int]:
    """Primes <= limit by the sieve of Eratosthenes."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return [p for p in range(2, limit + 1) if flags[p]]


def zeta_partial(s: int, terms: int) -> float:
    """Partial sum of zeta(s): sum_{n=1}^{terms} n^-s.

    fsum keeps the accumulation exactly rounded, so the only error left is
    the series tail (below 1/terms for s >= 2).
    """
    if s < 2 or int(s) != s:
        raise ValueError("s must be an integer >= 2")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    return math.fsum(n ** -s for n in range(1, terms + 1))


def euler_product_partial(s: int, prime_bound: int) -> float:
    """Product over primes p <= prime_bound of (1 - p^-s)^-1."""
    if s < 2 or int(s) != s:
        raise ValueError("s must be an integer >= 2")
    if prime_bound < 1:
        raise ValueError("prime_bound must be >= 1")
    result = 1.0
    for p in sieve_primes(prime_bound):
        result *= 1.0 / (1.0 - p ** -s)
    return result


def coprime_probability_exact(m: int, bound: int) -> Fraction:
    """Exact probability that an m-tuple uniform on [1, bound]^m is setwise
    coprime, by exhaustive enumeration.

    "Coprime" means the gcd of all entries is 1, not pairwise coprimality.
    The result is a Fraction with denominator bound^m so it can anchor
    acceptance tests without rounding.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if bound ** m > _ENUMERATION_LIMIT:
        raise ValueError(f"bound^m exceeds enumeration limit {_ENUMERATION_LIMIT}")
    gcd = math.gcd
    count = 0
    for values in product(range(1, bound + 1), repeat=m):
        g = 0
        for v in values:
            g = gcd(g, v)
        if g == 1:
            count += 1
    return Fraction(count, bound ** m)
