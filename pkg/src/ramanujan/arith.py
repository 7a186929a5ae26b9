"""Exact integer arithmetic: factorization, Mobius, totient, divisors, sigma_k.

Everything here is exact (Python big integers); floating point never enters.
Batch variants are backed by numpy sieves so that sweeps over q up to 10**6
stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "MAX_FACTOR_INPUT",
    "PrimeFactorization",
    "SieveTable",
    "divisors",
    "elementary_symmetric",
    "factorize",
    "mobius",
    "mobius_range",
    "sigma",
    "sigma0_range",
    "sigma1_range",
    "totient",
    "totient_range",
]

# Trial division beyond 63-bit inputs is not supported; larger inputs are a
# domain error, not a slow path.
MAX_FACTOR_INPUT = 2**63 - 1


@dataclass(frozen=True)
class PrimeFactorization:
    """Prime-exponent decomposition of a positive integer.

    ``factors`` is a tuple of (prime, exponent) pairs with strictly
    increasing primes and exponents >= 1; it is empty exactly for n = 1.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization of {self.n}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factor product {prod} != {self.n}")


class SieveTable:
    """Smallest-prime-factor table for integers 1..limit.

    ``smallest_prime_factor[p] == p`` exactly when p is prime, so a single
    table answers factorization queries in O(log n) divisions.  Instances
    are immutable after construction and safe to share across threads.
    """

    def __init__(self, limit: int):
        if limit < 1:
            raise ValueError("sieve limit must be >= 1")
        if limit > 2**31:
            raise ValueError("sieve limit above 2**31 is not supported")
        spf = np.arange(limit + 1, dtype=np.int64)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == p:
                block = spf[p * p :: p]
                np.minimum(block, p, out=block)
        spf.setflags(write=False)
        self.limit = int(limit)
        self.smallest_prime_factor = spf

    def primes(self) -> np.ndarray:
        """All primes up to the limit, ascending."""
        spf = self.smallest_prime_factor
        idx = np.arange(self.limit + 1, dtype=np.int64)
        mask = spf == idx
        mask[:2] = False
        return idx[mask]

    def factorize(self, n: int) -> PrimeFactorization:
        if n < 1:
            raise ValueError(f"cannot factorize {n}; need n >= 1")
        if n > self.limit:
            raise ValueError(f"{n} exceeds sieve limit {self.limit}")
        spf = self.smallest_prime_factor
        factors: list[tuple[int, int]] = []
        m = n
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        return PrimeFactorization(n, tuple(factors))


def factorize(n: int, table: SieveTable | None = None) -> PrimeFactorization:
    """Factor n >= 1 into primes; uses the sieve when one covers n."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}; need n >= 1")
    if n > MAX_FACTOR_INPUT:
        raise ValueError(f"{n} exceeds the supported range (2**63 - 1)")
    if table is not None and n <= table.limit:
        return table.factorize(n)
    factors: list[tuple[int, int]] = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    # Remaining prime factors are of the form 6k +- 1.
    f = 5
    while f * f <= m:
        for p in (f, f + 2):
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                factors.append((p, e))
        f += 6
    if m > 1:
        factors.append((m, 1))
    return PrimeFactorization(n, tuple(factors))


def mobius(n: int, table: SieveTable | None = None) -> int:
    """Mobius function: 0 on squareful n, else (-1)**(number of primes)."""
    fac = factorize(n, table)
    for _, e in fac.factors:
        if e >= 2:
            return 0
    return -1 if len(fac.factors) % 2 else 1


def totient(n: int, table: SieveTable | None = None) -> int:
    """Euler totient, computed multiplicatively from the factorization."""
    fac = factorize(n, table)
    phi = 1
    for p, e in fac.factors:
        phi *= p ** (e - 1) * (p - 1)
    return phi


def divisors(n: int, table: SieveTable | None = None) -> list[int]:
    """All positive divisors of n, strictly increasing (so len == sigma_0)."""
    fac = factorize(n, table)
    divs = [1]
    for p, e in fac.factors:
        divs = [d * p**j for d in divs for j in range(e + 1)]
    divs.sort()
    return divs


def sigma(k: int, n: int, table: SieveTable | None = None) -> int:
    """Divisor power sum: sum of d**k over divisors d of n, exact."""
    if k < 0:
        raise ValueError("sigma requires k >= 0")
    fac = factorize(n, table)
    total = 1
    for p, e in fac.factors:
        if k == 0:
            total *= e + 1
        else:
            pk = p**k
            total *= (pk ** (e + 1) - 1) // (pk - 1)
    return total


def elementary_symmetric(values: list[int]) -> list[int]:
    """Elementary symmetric polynomials e_0..e_N of the given integers.

    Uses the product recurrence (fold one value in at a time), so every
    intermediate is an exact integer.  e_0 is always 1.
    """
    if not values:
        raise ValueError("need at least one value")
    e = [1]
    for v in values:
        e.append(0)
        for j in range(len(e) - 1, 0, -1):
            e[j] += v * e[j - 1]
    return e


# ---------------------------------------------------------------------------
# Batch sieves.  Index 0 of every returned array is a filler (there is no
# q = 0); slot q holds the value for q.
# ---------------------------------------------------------------------------


def totient_range(table: SieveTable) -> np.ndarray:
    """phi(q) for q = 1..limit as int64."""
    phi = np.arange(table.limit + 1, dtype=np.int64)
    for p in table.primes():
        block = phi[p::p]
        block //= p
        block *= p - 1
    phi[0] = 0
    return phi


def mobius_range(table: SieveTable) -> np.ndarray:
    """mu(q) for q = 1..limit as int8."""
    mu = np.ones(table.limit + 1, dtype=np.int8)
    for p in table.primes():
        mu[p::p] *= -1
        sq = int(p) * int(p)
        if sq <= table.limit:
            mu[sq::sq] = 0
    mu[0] = 0
    return mu


def sigma0_range(table: SieveTable) -> np.ndarray:
    """sigma_0(q) (divisor counts) for q = 1..limit as int32."""
    counts = np.zeros(table.limit + 1, dtype=np.int32)
    for d in range(1, table.limit + 1):
        counts[d::d] += 1
    counts[0] = 0
    return counts


def sigma1_range(table: SieveTable) -> np.ndarray:
    """sigma_1(q) (divisor sums) for q = 1..limit as int64."""
    sums = np.zeros(table.limit + 1, dtype=np.int64)
    for d in range(1, table.limit + 1):
        sums[d::d] += d
    sums[0] = 0
    return sums


@lru_cache(maxsize=4)
def shared_table(limit: int) -> SieveTable:
    """Memoized sieve for callers that repeatedly need the same limit."""
    return SieveTable(limit)
