import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramanujan import (
    SieveTable,
    divisors,
    elementary_symmetric,
    factorize,
    mobius,
    mobius_range,
    sigma,
    sigma0_range,
    sigma1_range,
    totient,
    totient_range,
)


class TestFactorize:
    def test_one_has_empty_factorization(self):
        assert factorize(1).factors == ()

    def test_twelve(self):
        assert factorize(12).factors == ((2, 2), (3, 1))

    def test_9973_is_prime(self):
        # trial division confirms: no divisor up to isqrt(9973) = 99
        assert all(9973 % d for d in range(2, 100))
        assert factorize(9973).factors == ((9973, 1),)

    def test_zero_and_negative_rejected(self):
        with pytest.raises(ValueError):
            factorize(0)
        with pytest.raises(ValueError):
            factorize(-6)

    def test_oversized_rejected(self):
        with pytest.raises(ValueError):
            factorize(2**63)

    def test_sieve_agrees_with_trial_division(self, table_1e4):
        for n in range(1, 2001):
            assert factorize(n, table_1e4) == factorize(n)

    def test_product_reconstructs(self):
        for n in (2, 97, 360, 2**20, 6469693230):
            fac = factorize(n)
            prod = 1
            for p, e in fac.factors:
                prod *= p**e
            assert prod == n


class TestSieveTable:
    def test_spf_fixed_points_are_primes(self, table_1e4):
        spf = table_1e4.smallest_prime_factor
        for p in (2, 3, 5, 97, 9973):
            assert spf[p] == p
        for c in (4, 6, 9, 100, 9999):
            assert spf[c] < c

    def test_limit_validation(self):
        with pytest.raises(ValueError):
            SieveTable(0)

    def test_primes_list(self):
        assert SieveTable(30).primes().tolist() == [
            2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
        ]


class TestMobius:
    def test_examples(self):
        assert mobius(1) == 1
        assert mobius(4) == 0
        assert mobius(30) == -1

    def test_divisor_sum_is_indicator_of_one(self, table_1e4):
        # sum of mu over the divisors of n is 1 at n = 1 and 0 otherwise
        n_max = 10**4
        mu = mobius_range(table_1e4).astype(np.int64)
        acc = np.zeros(n_max + 1, dtype=np.int64)
        for d in range(1, n_max + 1):
            acc[d::d] += mu[d]
        assert acc[1] == 1
        assert not acc[2:].any()


class TestTotient:
    def test_examples(self):
        assert totient(1) == 1
        assert totient(10) == 4  # units mod 10: {1, 3, 7, 9}
        for p in (2, 3, 5, 101, 9973):
            assert totient(p) == p - 1

    def test_divisor_sum_identity(self, table_1e4):
        # sum of phi over the divisors of n equals n
        n_max = 10**4
        phi = totient_range(table_1e4)
        acc = np.zeros(n_max + 1, dtype=np.int64)
        for d in range(1, n_max + 1):
            acc[d::d] += phi[d]
        assert (acc[1:] == np.arange(1, n_max + 1)).all()

    def test_multiplicative_on_coprime_pairs(self, rng):
        pairs = 0
        while pairs < 200:
            m = int(rng.integers(2, 100))
            n = int(rng.integers(2, 100))
            if math.gcd(m, n) != 1 or m * n > 10**4:
                continue
            pairs += 1
            assert totient(m * n) == totient(m) * totient(n)
            for k in (0, 1, 2):
                assert sigma(k, m * n) == sigma(k, m) * sigma(k, n)


class TestDivisors:
    def test_examples(self):
        assert divisors(6) == [1, 2, 3, 6]
        assert divisors(1) == [1]
        assert divisors(36) == [1, 2, 3, 4, 6, 9, 12, 18, 36]

    def test_structure(self):
        for n in (2, 12, 97, 360, 1024):
            divs = divisors(n)
            assert divs[0] == 1 and divs[-1] == n
            assert all(n % d == 0 for d in divs)
            assert divs == sorted(set(divs))
            assert len(divs) == sigma(0, n)


class TestSigma:
    def test_examples(self):
        assert sigma(0, 12) == 6
        assert sigma(1, 6) == 12  # perfect number
        assert sigma(5, 6) == 1 + 32 + 243 + 7776 == 8052

    def test_exact_at_large_exponent(self):
        # no overflow: compare against direct big-integer summation
        n = 720
        for k in (7, 23):
            assert sigma(k, n) == sum(d**k for d in divisors(n))

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError):
            sigma(-1, 6)


def _poly_from_roots(roots):
    # independent oracle: expand prod (x - r) by exact convolution,
    # coefficients listed from x^0 up
    coeffs = [1]
    for r in roots:
        shifted = [0] + coeffs
        scaled = [-r * c for c in coeffs] + [0]
        coeffs = [a + b for a, b in zip(shifted, scaled)]
    return coeffs


class TestElementarySymmetric:
    def test_divisors_of_six(self):
        assert elementary_symmetric([1, 2, 3, 6]) == [1, 12, 47, 72, 36]

    def test_single_value(self):
        assert elementary_symmetric([7]) == [1, 7]

    def test_binomial(self):
        assert elementary_symmetric([1, 1]) == [1, 2, 1]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            elementary_symmetric([])

    @settings(max_examples=60, derandomize=True)
    @given(st.lists(st.integers(-50, 50), min_size=1, max_size=8))
    def test_matches_polynomial_expansion(self, values):
        e = elementary_symmetric(values)
        poly = _poly_from_roots(values)
        # coefficient of x^n in prod (x - v) is (-1)^(N-n) e_{N-n}
        n_deg = len(values)
        for idx, c in enumerate(poly):
            assert c == (-1) ** (n_deg - idx) * e[n_deg - idx]

    @settings(max_examples=40, derandomize=True)
    @given(st.lists(st.integers(1, 30), min_size=1, max_size=6))
    def test_brute_force_subsets(self, values):
        import itertools

        e = elementary_symmetric(values)
        for j in range(len(values) + 1):
            brute = sum(
                math.prod(c) for c in itertools.combinations(values, j)
            )
            assert e[j] == brute


class TestBatchRanges:
    def test_match_scalar(self, table_1e4):
        phi = totient_range(table_1e4)
        mu = mobius_range(table_1e4)
        s0 = sigma0_range(table_1e4)
        s1 = sigma1_range(table_1e4)
        for n in range(1, 300):
            assert phi[n] == totient(n)
            assert mu[n] == mobius(n)
            assert s0[n] == sigma(0, n)
            assert s1[n] == sigma(1, n)
