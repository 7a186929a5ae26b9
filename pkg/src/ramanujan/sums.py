"""Ramanujan sums c_q at integer and real arguments.

The integer sum c_q(n) is the sum of e^(2 pi i k n / q) over residues k
coprime to q.  Replacing n by a real x gives the complex-valued c_q(x),
which interpolates c_q at the integers.  Three evaluation paths:

* ``csum_int``: closed form mu(q/g) * phi(q) / phi(q/g) with g = gcd(n, q),
  O(log q) after factorization.  The defining root-of-unity sum is kept as
  the test oracle.
* ``csum_real_direct``: the defining sum over the phi(q) unit residues,
  O(q), with exact argument reduction so error does not grow with k.
* ``csum_real_divisor``: the geometric-series rearrangement
  (1 - e^(2 pi i x)) * sum over d|q of mu(q/d) / (e^(-2 pi i x / d) - 1),
  O(sigma_0(q)), the fast path for large-q sweeps.  Denominators with x/d
  within TAU_DENOM of an integer are refused (NearSingularDenominator) and
  callers fall back to the direct sum.

For fixed non-integer x and q > 2 pi |x|, c_q(x) grows like
main_term_factor(x) * phi(q) with a residual bounded by a multiple of
sigma_0(q); ``asymptotic_residual_report`` measures that residual over a
q range and estimates the constant empirically.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .accum import fsum_complex
from .arith import (
    SieveTable,
    divisors,
    factorize,
    mobius,
    mobius_range,
    sigma0_range,
    totient,
    totient_range,
)

__all__ = [
    "TAU_DENOM",
    "TAU_INT",
    "AsymptoticReport",
    "NearSingularDenominator",
    "asymptotic_residual_report",
    "csum_int",
    "csum_int_range",
    "csum_real_direct",
    "csum_real_divisor",
    "csum_real_range",
    "is_integer_argument",
    "main_term_factor",
    "pole_term_residual",
]

# Floats within TAU_INT of an integer are treated as that integer.
TAU_INT = 1e-12
# Divisor-form denominators with x/d within TAU_DENOM of an integer are
# rejected as too close to singular for the 1e-9 cross-check tolerance.
TAU_DENOM = 1e-6

_TWO_PI = 2.0 * math.pi


class NearSingularDenominator(ValueError):
    """Divisor-form denominator too close to zero; use the direct sum."""


def is_integer_argument(x: float, tol: float = TAU_INT) -> bool:
    """True when x should take the integer evaluation path."""
    if not math.isfinite(x):
        raise ValueError(f"argument must be finite, got {x}")
    return abs(x - round(x)) <= tol


def _require_non_integer(x: float) -> None:
    if is_integer_argument(x):
        raise ValueError(f"x = {x} is (numerically) an integer; need x outside Z")


def _require_finite(z: complex) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise FloatingPointError(f"non-finite value {z}")
    return z


# ---------------------------------------------------------------------------
# Integer arguments
# ---------------------------------------------------------------------------


def csum_int(q: int, n: int, table: SieveTable | None = None) -> int:
    """Exact integer Ramanujan sum via mu(q/g) * phi(q) / phi(q/g)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    g = math.gcd(n, q)
    m = q // g
    mu = mobius(m, table)
    if mu == 0:
        return 0
    # phi(m) divides phi(q) whenever m divides q, so // is exact.
    return mu * (totient(q, table) // totient(m, table))


def csum_int_range(n: int, q_max: int, table: SieveTable | None = None) -> np.ndarray:
    """c_q(n) for q = 1..q_max as int64 (index 0 unused)."""
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    if table is None or table.limit < q_max:
        table = SieveTable(q_max)
    phi = totient_range(table)
    mu = mobius_range(table).astype(np.int64)
    qs = np.arange(q_max + 1, dtype=np.int64)
    qs[0] = 1
    g = np.gcd(np.int64(n), qs)
    m = qs // g
    out = mu[m] * (phi[: q_max + 1] // phi[m])
    out[0] = 0
    return out


# ---------------------------------------------------------------------------
# Real arguments
# ---------------------------------------------------------------------------


def _unit_residues(q: int) -> np.ndarray:
    # Representatives 1..q, matching the divisor-form rearrangement; the
    # only q where the choice matters at real arguments is q = 1, whose
    # single residue must be 1 (so c_1(x) = e^(2 pi i x)).
    ks = np.arange(1, q + 1, dtype=np.int64)
    return ks[np.gcd(ks, q) == 1]


def csum_real_direct(q: int, x: float) -> complex:
    """Defining sum over unit residues, compensated, ascending k.

    The exponential argument k*x/q is reduced with the integer part of x
    handled exactly ((k * floor(x)) mod q is integer arithmetic), so the
    reduction error stays O(eps) regardless of k.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if not math.isfinite(x):
        raise ValueError(f"argument must be finite, got {x}")
    ks = _unit_residues(q)
    xi = math.floor(x)
    xf = x - xi  # exact: both operands share the same exponent range
    r = (ks * xi) % q
    t = (r.astype(np.float64) + ks * xf) / q
    frac = np.mod(t, 1.0)
    vals = np.exp((2j * math.pi) * frac)
    return _require_finite(fsum_complex(vals))


def _one_minus_e2pix(x: float) -> complex:
    # 1 - e^(2 pi i x) = -2i sin(pi r) e^(i pi r) with r = x - round(x);
    # reducing by the nearest integer keeps the sine argument small and the
    # cancellation exact.
    r = x - round(x)
    s = math.sin(math.pi * r)
    return -2j * s * cmath.exp(1j * math.pi * r)


def _expm1_minus_denominator(dist: float) -> complex:
    # e^(-2 pi i dist) - 1 = -2 sin(pi dist) (sin(pi dist) + i cos(pi dist))
    s = math.sin(math.pi * dist)
    c = math.cos(math.pi * dist)
    return complex(-2.0 * s * s, -2.0 * s * c)


def csum_real_divisor(q: int, x: float, table: SieveTable | None = None) -> complex:
    """Divisor-form evaluation, O(sigma_0(q)); must match the direct sum.

    Raises NearSingularDenominator when some needed divisor d has x/d
    within TAU_DENOM of an integer (the denominator loses too many digits
    there); callers fall back to csum_real_direct.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    _require_non_integer(x)
    terms: list[complex] = []
    for d in divisors(q, table):
        mu = mobius(q // d, table)
        if mu == 0:
            continue
        m = round(x / d)
        dist = (x - m * d) / d  # exact numerator near the singular points
        if abs(dist) <= TAU_DENOM:
            raise NearSingularDenominator(
                f"x/d = {x}/{d} is within {TAU_DENOM} of an integer"
            )
        terms.append(mu / _expm1_minus_denominator(dist))
    return _require_finite(_one_minus_e2pix(x) * fsum_complex(terms))


def _mobius_convolution(w: np.ndarray, mu: np.ndarray, q_max: int) -> np.ndarray:
    """conv[q] = sum over d | q of w[d] * mu[q // d], for q = 1..q_max.

    Small d are swept with one strided slice each; large d share a common
    multiple count and are handled per count block, which keeps the number
    of numpy dispatches near q_max**(2/3) instead of q_max.
    """
    conv = np.zeros(q_max + 1, dtype=np.complex128)
    split = min(q_max, max(1, round((q_max * q_max / 2.0) ** (1.0 / 3.0))))
    for d in range(1, split + 1):
        count = q_max // d
        conv[d :: d] += w[d] * mu[1 : count + 1]
    c_max = q_max // (split + 1) if split < q_max else 0
    for count in range(1, c_max + 1):
        d_lo = max(split, q_max // (count + 1)) + 1
        d_hi = q_max // count
        if d_lo > d_hi:
            continue
        ws = w[d_lo : d_hi + 1]
        for j in range(1, count + 1):
            if mu[j] != 0:
                conv[j * d_lo : j * d_hi + 1 : j] += mu[j] * ws
    return conv


def csum_real_range(
    x: float,
    q_max: int,
    table: SieveTable | None = None,
    threads: int = 1,
) -> np.ndarray:
    """c_q(x) for q = 1..q_max as complex128 (index 0 unused).

    Integer x delegates to the exact integer path.  Otherwise the divisor
    form is evaluated for all q at once as a Dirichlet convolution of mu
    with the per-d reciprocal denominators.  Unlike the scalar
    csum_real_divisor, no near-singular refusal is needed here: each
    denominator distance is computed from the exact numerator x - m*d, so
    every w(d) carries O(eps) relative error no matter how close x/d sits
    to an integer, and the absolute error of c_q(x) stays below a small
    multiple of eps * sigma_1(q).  Only an exactly zero denominator (never
    reachable for non-integer x) falls back to the direct sum, evaluated
    in ascending q with at most ``threads`` workers.
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    if is_integer_argument(x):
        return csum_int_range(round(x), q_max, table).astype(np.complex128)
    if table is None or table.limit < q_max:
        table = SieveTable(q_max)
    mu = mobius_range(table).astype(np.float64)

    d_arr = np.arange(q_max + 1, dtype=np.float64)
    d_arr[0] = 1.0
    m = np.round(x / d_arr)
    dist = (x - m * d_arr) / d_arr
    singular = dist == 0.0
    singular[0] = False

    s = np.sin(math.pi * dist)
    c = np.cos(math.pi * dist)
    denom = (-2.0 * s) * (s + 1j * c)
    denom[singular] = 1.0  # placeholder; these q are recomputed below
    w = 1.0 / denom
    w[singular] = 0.0

    out = _one_minus_e2pix(x) * _mobius_convolution(w, mu, q_max)
    out[0] = 0.0

    if singular.any():
        needs = np.zeros(q_max + 1, dtype=bool)
        for d in np.nonzero(singular)[0]:
            count = q_max // int(d)
            needs[d :: d] |= mu[1 : count + 1] != 0
        qs = [int(q) for q in np.nonzero(needs)[0]]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                vals = list(pool.map(lambda q: csum_real_direct(q, x), qs))
        else:
            vals = [csum_real_direct(q, x) for q in qs]
        for q, v in zip(qs, vals):
            out[q] = v
    return out


# ---------------------------------------------------------------------------
# Main-term factor and its residuals
# ---------------------------------------------------------------------------


def main_term_factor(x: float) -> complex:
    """(e^(2 pi i x) - 1) / (2 pi i x): 1 at x = 0, 0 at nonzero integers.

    Evaluated as sin(pi r) e^(i pi r) / (pi x) with r = x - round(x), which
    is exact at the removable singularity and at integers.
    """
    if not math.isfinite(x):
        raise ValueError(f"argument must be finite, got {x}")
    if abs(x) <= TAU_INT:
        return 1.0 + 0.0j
    r = x - round(x)
    if abs(r) <= TAU_INT:
        return 0.0 + 0.0j
    return math.sin(math.pi * r) * cmath.exp(1j * math.pi * r) / (math.pi * x)


def pole_term_residual(x: float, d: int) -> complex:
    """Residual 1/(e^(-2 pi i x / d) - 1) + d/(2 pi i x) for d > 2 pi |x|.

    Bounded in d and tends to -1/2 as d grows (the next term of the
    Laurent expansion of the reciprocal).
    """
    _require_non_integer(x)
    if d <= _TWO_PI * abs(x):
        raise ValueError(f"need d > 2 pi |x| = {_TWO_PI * abs(x):.6g}, got {d}")
    recip = 1.0 / _expm1_minus_denominator(x / d)
    return _require_finite(recip + d / (2j * math.pi * x))


@dataclass
class AsymptoticReport:
    """Residuals of c_q(x) about main_term_factor(x) * phi(q).

    ``c_estimate`` is the empirical maximum of |residual| / sigma_0(q) over
    the sampled range; no sharpness is claimed for it.
    """

    x: float
    q_range: tuple[int, int]
    stride: int
    factor: complex
    q_values: np.ndarray  # sampled q, ascending
    residuals: np.ndarray  # complex residuals r(q)
    sigma0: np.ndarray  # sigma_0(q) per sampled q
    phi: np.ndarray  # phi(q) per sampled q
    c_estimate: float

    def rows(self):
        """Iterate (q, residual, sigma0, phi) in ascending q."""
        for i in range(len(self.q_values)):
            yield (
                int(self.q_values[i]),
                complex(self.residuals[i]),
                int(self.sigma0[i]),
                int(self.phi[i]),
            )


def asymptotic_residual_report(
    x: float,
    q_min: int,
    q_max: int,
    stride: int = 1,
    table: SieveTable | None = None,
    threads: int = 1,
) -> AsymptoticReport:
    """Sample r(q) = c_q(x) - factor(x) * phi(q) for q in [q_min, q_max]."""
    _require_non_integer(x)
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if q_min <= _TWO_PI * abs(x):
        raise ValueError(
            f"q_min must exceed 2 pi |x| = {_TWO_PI * abs(x):.6g}, got {q_min}"
        )
    if q_max < q_min:
        raise ValueError("q_max must be >= q_min")
    if table is None or table.limit < q_max:
        table = SieveTable(q_max)
    phi = totient_range(table)
    sig0 = sigma0_range(table)
    cs = csum_real_range(x, q_max, table, threads=threads)
    factor = main_term_factor(x)
    qs = np.arange(q_min, q_max + 1, stride, dtype=np.int64)
    residuals = cs[qs] - factor * phi[qs].astype(np.float64)
    ratios = np.abs(residuals) / sig0[qs]
    return AsymptoticReport(
        x=x,
        q_range=(int(q_min), int(q_max)),
        stride=int(stride),
        factor=factor,
        q_values=qs,
        residuals=residuals,
        sigma0=sig0[qs].astype(np.int64),
        phi=phi[qs],
        c_estimate=float(ratios.max()),
    )
