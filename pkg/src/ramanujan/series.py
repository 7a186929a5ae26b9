"""Evaluation and divergence diagnostics for Ramanujan expansions.

An expansion is a series sum over q >= 1 of f_hat(q) * c_q(x) for a named
coefficient rule f_hat.  At integer x the classical cases converge; at
non-integer x every rule whose coefficients shrink no faster than q**-2
diverges, because c_q(x) grows like main_term_factor(x) * phi(q).  The
engine therefore never invents a "value" for a divergent request: it
either certifies a truncation (absolutely convergent cases) or reports
partial-sum traces and growth-rate fits (divergent ones).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .accum import checkpoint_sums, fsum_complex
from .arith import SieveTable, sigma, totient_range
from .sums import (
    csum_int_range,
    csum_real_range,
    is_integer_argument,
    main_term_factor,
)

__all__ = [
    "DEFAULT_Q_LIMIT",
    "CoefficientRule",
    "DivergentRequest",
    "PartialSumTrace",
    "SlopeFit",
    "TailBound",
    "base_coefficient_range",
    "coefficient",
    "divergence_slope",
    "expected_slope",
    "geometric_checkpoints",
    "partial_sum_trace",
    "rule_prefactor",
    "sigma_tilde",
    "tail_bound",
    "zeta",
    "zeta_weighted_sum",
]

_EPS = 2.0**-52

# Truncation points above this are refused rather than silently ground out.
DEFAULT_Q_LIMIT = 2**23


class DivergentRequest(ValueError):
    """A sum was requested whose series has no finite value."""


class TruncationCapExceeded(ValueError):
    """Meeting the target error would need more terms than q_limit allows."""


# ---------------------------------------------------------------------------
# Riemann zeta for real s > 1
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def zeta(s: float) -> float:
    """zeta(s) for s >= 1 + 1e-6 by direct summation plus tail correction.

    Sums n**-s for n < N with fsum, then corrects with the integral tail
    N**(1-s)/(s-1), half of the boundary term, and two Euler-Maclaurin
    derivative terms.  N grows as s approaches 1 (capped at 1e6), keeping
    the absolute error at the 1e-13 level or better for s >= 2.
    """
    s = float(s)
    if not math.isfinite(s) or s < 1.0 + 1e-6:
        raise ValueError(f"zeta requires s >= 1 + 1e-6, got {s}")
    n_terms = max(10**4, min(math.ceil(10.0 ** (14.0 / s)), 10**6))
    ns = np.arange(1, n_terms, dtype=np.float64)
    head = math.fsum((ns ** -s).tolist())
    n = float(n_terms)
    tail = (
        n ** (1.0 - s) / (s - 1.0)
        + 0.5 * n**-s
        + s * n ** (-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n ** (-s - 3.0) / 720.0
    )
    return head + tail


# ---------------------------------------------------------------------------
# Coefficient rules
# ---------------------------------------------------------------------------

_RULE_KINDS = ("sigma_k", "zero_ramanujan", "zero_hardy", "sigma0_log")


@dataclass(frozen=True)
class CoefficientRule:
    """Named Ramanujan coefficient rule f_hat(q).

    sigma_k(k):     f_hat(q) = x**k * zeta(k+1) / q**(k+1)   (divisor sums)
    zero_ramanujan: f_hat(q) = 1/q                            (zero function)
    zero_hardy:     f_hat(q) = 1/phi(q)                       (zero function)
    sigma0_log:     f_hat(q) = -log(q)/q                      (divisor count)

    The x-dependent prefactor of sigma_k is part of the rule and is applied
    once when a trace or value is finalized, not per q.
    """

    kind: str
    k: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _RULE_KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.kind == "sigma_k" and self.k < 0:
            raise ValueError("sigma_k rule requires k >= 0")
        if self.kind != "sigma_k" and self.k != 0:
            raise ValueError(f"rule {self.kind!r} takes no k parameter")

    @classmethod
    def sigma(cls, k: int) -> "CoefficientRule":
        return cls("sigma_k", k)

    @classmethod
    def zero_ramanujan(cls) -> "CoefficientRule":
        return cls("zero_ramanujan")

    @classmethod
    def zero_hardy(cls) -> "CoefficientRule":
        return cls("zero_hardy")

    @classmethod
    def sigma0_log(cls) -> "CoefficientRule":
        return cls("sigma0_log")

    @property
    def label(self) -> str:
        if self.kind == "sigma_k":
            return f"sigma:{self.k}"
        return {"zero_ramanujan": "zero-ram", "zero_hardy": "zero-hardy",
                "sigma0_log": "sigma0-log"}[self.kind]

    @classmethod
    def parse(cls, label: str) -> "CoefficientRule":
        label = label.strip().lower()
        if label.startswith("sigma:"):
            return cls.sigma(int(label.split(":", 1)[1]))
        table = {"zero-ram": cls.zero_ramanujan, "zero-hardy": cls.zero_hardy,
                 "sigma0-log": cls.sigma0_log}
        if label in table:
            return table[label]()
        raise ValueError(f"unknown rule {label!r}; expected sigma:<k>, "
                         "zero-ram, zero-hardy, or sigma0-log")


def rule_prefactor(rule: CoefficientRule, x: float) -> float:
    """x-dependent prefactor folded into the rule (1 for the zero rules)."""
    if rule.kind == "sigma_k":
        if rule.k < 1:
            raise DivergentRequest(
                "the k = 0 divisor rule has no finite prefactor (zeta(1)); "
                "use the sigma0-log rule instead"
            )
        return x**rule.k * zeta(rule.k + 1)
    return 1.0


def coefficient(rule: CoefficientRule, q: int, x: float = 1.0) -> complex:
    """Full coefficient f_hat(q), including any x-dependent prefactor."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if rule.kind == "sigma_k":
        return rule_prefactor(rule, x) / q ** (rule.k + 1)
    if rule.kind == "zero_ramanujan":
        return 1.0 / q
    if rule.kind == "zero_hardy":
        from .arith import totient

        return 1.0 / totient(q)
    return -math.log(q) / q


def base_coefficient_range(
    rule: CoefficientRule, q_max: int, table: SieveTable | None = None
) -> np.ndarray:
    """Per-q coefficients without the x prefactor, q = 1..q_max (slot 0 = 0)."""
    qs = np.arange(q_max + 1, dtype=np.float64)
    qs[0] = 1.0
    if rule.kind == "sigma_k":
        out = qs ** -(rule.k + 1)
    elif rule.kind == "zero_ramanujan":
        out = 1.0 / qs
    elif rule.kind == "zero_hardy":
        if table is None or table.limit < q_max:
            table = SieveTable(q_max)
        phi = totient_range(table)[: q_max + 1].astype(np.float64)
        phi[0] = 1.0
        out = 1.0 / phi
    else:
        out = -np.log(qs) / qs
    out[0] = 0.0
    return out


# ---------------------------------------------------------------------------
# Partial-sum traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartialSumTrace:
    """Checkpoints (Q, S_Q) of a truncated expansion, ascending in Q.

    A larger-Q checkpoint extends the smaller-Q prefix: recomputing with a
    superset of checkpoints reproduces earlier values bit for bit.
    """

    rule: CoefficientRule
    x: float
    checkpoints: tuple[tuple[int, complex], ...]

    def q_values(self) -> list[int]:
        return [q for q, _ in self.checkpoints]

    def values(self) -> list[complex]:
        return [s for _, s in self.checkpoints]


def partial_sum_trace(
    rule: CoefficientRule,
    x: float,
    q_checkpoints: Sequence[int],
    table: SieveTable | None = None,
    threads: int = 1,
) -> PartialSumTrace:
    """Compensated partial sums S_Q at the given checkpoints.

    Integer x uses exact integer Ramanujan sums; non-integer x uses the
    divisor-form batch evaluator with direct-sum fallback.  Accumulation is
    ascending in q.
    """
    cps = [int(q) for q in q_checkpoints]
    if not cps or any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be a non-empty increasing sequence")
    if cps[0] < 1:
        raise ValueError("checkpoints must be >= 1")
    q_max = cps[-1]
    if table is not None and table.limit < q_max:
        raise ValueError(f"max checkpoint {q_max} exceeds sieve limit {table.limit}")
    if table is None:
        table = SieveTable(q_max)
    base = base_coefficient_range(rule, q_max, table)
    if is_integer_argument(x):
        cvals = csum_int_range(round(x), q_max, table).astype(np.float64)
        terms: np.ndarray = base[1:] * cvals[1:]
    else:
        cvals = csum_real_range(x, q_max, table, threads=threads)
        terms = base[1:] * cvals[1:]
    pref = rule_prefactor(rule, x)
    sums = checkpoint_sums(terms, cps)
    return PartialSumTrace(
        rule=rule,
        x=float(x),
        checkpoints=tuple((q, pref * s) for q, s in zip(cps, sums)),
    )


# ---------------------------------------------------------------------------
# Tail bounds and certified sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailBound:
    """Certified over-estimate of sum over q > Q of q**-k (so also of
    phi(q)/q**(k+1), since phi(q) <= q)."""

    k: int
    Q: int
    bound: float


def tail_bound(k: int, Q: int) -> TailBound:
    """Elementary bound Q**(1-k)/(k-1) + Q**-k for the q**-k tail, k >= 2."""
    if k < 2:
        raise ValueError("tail_bound requires k >= 2")
    if Q < 1:
        raise ValueError("Q must be >= 1")
    b = float(Q) ** (1 - k) / (k - 1) + float(Q) ** -k
    return TailBound(k=int(k), Q=int(Q), bound=b)


def _truncation_point(
    orders: Mapping[int, float],
    per_term_budget: float,
    integer_sigma1: int | None,
    q_limit: int,
) -> int:
    """Smallest power-of-two-ish Q meeting every per-order tail budget.

    ``orders`` maps q-exponent o to |A_o| = |coef| * zeta(o) * |x|**(o-1).
    Integer arguments use the |c_q(n)| <= sigma_1(n) tail (exponent o);
    real arguments use |c_q(x)| <= phi(q) <= q (exponent o - 1).
    """
    q = 64
    while True:
        worst = 0.0
        for o, amp in orders.items():
            if integer_sigma1 is not None:
                t = amp * integer_sigma1 * tail_bound(o, q).bound
            else:
                t = amp * tail_bound(o - 1, q).bound
            worst = max(worst, t)
        if worst <= per_term_budget:
            return q
        if q >= q_limit:
            raise TruncationCapExceeded(
                f"truncation needs Q > {q_limit}; loosen target_error or raise q_limit"
            )
        q *= 2


def zeta_weighted_sum(
    combo: Mapping[int, Fraction | int],
    x: float,
    target_error: float,
    table: SieveTable | None = None,
    q_limit: int = DEFAULT_Q_LIMIT,
    threads: int = 1,
    mp_dps: int | None = None,
) -> tuple[complex, float]:
    """Certified evaluation of sum over q of B(q) * c_q(x), where
    B(q) = sum over orders o of coef_o * zeta(o) * x**(o-1) * q**-o.

    The coefficients are exact rationals; only the per-q complex terms are
    floating point.  Truncation gets 90% of ``target_error``, split evenly
    across the orders; the returned bound adds a first-order roundoff
    estimate on top of the certified truncation tail.  ``mp_dps`` switches
    the evaluation to mpmath with that many decimal digits, which lifts the
    double-precision cancellation limit for large coefficient ladders.

    At non-integer x every order must be >= 3 (otherwise the series
    diverges and DivergentRequest is raised); at integer x orders >= 2 are
    allowed thanks to the sigma_1 bound on |c_q(n)|.
    """
    if target_error <= 0.0 or not math.isfinite(target_error):
        raise ValueError("target_error must be a positive finite float")
    if not combo:
        raise ValueError("empty order combination")
    orders_exact = {int(o): Fraction(c) for o, c in combo.items()}
    integer_x = is_integer_argument(x)
    min_order = min(orders_exact)
    if min_order < 2:
        raise ValueError("orders below 2 are never summable here")
    if not integer_x and min_order < 3:
        raise DivergentRequest(
            "the requested expansion diverges for all x in R\\Z "
            "(coefficients shrink no faster than q**-2)"
        )
    n = round(x) if integer_x else None
    if n == 0:
        return 0.0 + 0.0j, 0.0
    sig1 = sigma(1, abs(n)) if n is not None else None

    amps = {
        o: abs(float(c)) * zeta(o) * abs(x) ** (o - 1)
        for o, c in orders_exact.items()
    }
    budget = 0.9 * target_error / len(orders_exact)
    q_trunc = _truncation_point(amps, budget, sig1, q_limit)
    trunc_tail = 0.0
    for o, amp in amps.items():
        if sig1 is not None:
            trunc_tail += amp * sig1 * tail_bound(o, q_trunc).bound
        else:
            trunc_tail += amp * tail_bound(o - 1, q_trunc).bound

    if mp_dps is not None:
        value = _mp_combo_value(orders_exact, x, q_trunc, mp_dps, table)
        return value, trunc_tail + 10.0 ** (2 - mp_dps) * abs(value)

    if table is None or table.limit < q_trunc:
        table = SieveTable(q_trunc)
    qs = np.arange(1, q_trunc + 1, dtype=np.float64)
    bracket = np.zeros(q_trunc, dtype=np.float64)
    bracket_abs = np.zeros(q_trunc, dtype=np.float64)
    for o, c in sorted(orders_exact.items()):
        a = float(c) * zeta(o) * x ** (o - 1)
        pw = qs**-o
        bracket += a * pw
        bracket_abs += abs(a) * pw

    if integer_x:
        cvals = csum_int_range(n, q_trunc, table)[1:].astype(np.float64)
        value = complex(math.fsum((bracket * cvals).tolist()), 0.0)
        scale = math.fsum((bracket_abs * np.abs(cvals)).tolist())
        err_terms = 0.0
    else:
        cvals, err_scale = _csum_range_with_error_scale(x, q_trunc, table, threads)
        prod = bracket * cvals
        value = complex(
            math.fsum(prod.real.tolist()), math.fsum(prod.imag.tolist())
        )
        scale = math.fsum((bracket_abs * np.abs(cvals)).tolist())
        err_terms = math.fsum((bracket_abs * err_scale).tolist())
    roundoff = _EPS * ((len(orders_exact) + 4) * scale + 10.0 * err_terms)
    return value, trunc_tail + roundoff


def _csum_range_with_error_scale(
    x: float, q_max: int, table: SieveTable, threads: int
) -> tuple[np.ndarray, np.ndarray]:
    """Batch c_q(x) plus a per-q magnitude scale for its roundoff error.

    The scale is |1 - e^(2 pi i x)| times the absolute-value Dirichlet
    convolution of |mu| with the reciprocal denominators, i.e. the mass
    that cancellation had to chew through to produce c_q(x).
    """
    from .arith import mobius_range
    from .sums import _mobius_convolution, _one_minus_e2pix

    cvals = csum_real_range(x, q_max, table, threads=threads)[1:]
    mu_abs = np.abs(mobius_range(table)[: q_max + 1].astype(np.float64))
    d_arr = np.arange(q_max + 1, dtype=np.float64)
    d_arr[0] = 1.0
    dist = (x - np.round(x / d_arr) * d_arr) / d_arr
    s = np.maximum(np.abs(np.sin(math.pi * dist)), 1e-300)
    w_abs = (1.0 / (2.0 * s)).astype(np.complex128)
    conv = np.abs(_mobius_convolution(w_abs, mu_abs, q_max)[1:])
    return cvals, abs(_one_minus_e2pix(x)) * conv


def _mp_combo_value(
    orders: Mapping[int, Fraction], x: float, q_trunc: int, dps: int,
    table: SieveTable | None,
) -> complex:
    """mpmath evaluation of the truncated order combination."""
    from mpmath import mp, mpc, mpf

    integer_x = is_integer_argument(x)
    with mp.workdps(dps):
        consts = {
            o: mpf(c.numerator) / mpf(c.denominator) * mp.zeta(o) * mpf(x) ** (o - 1)
            for o, c in orders.items()
        }
        if integer_x:
            cvals = csum_int_range(round(x), q_trunc, table)
        total = mpc(0)
        for q in range(1, q_trunc + 1):
            bracket = mpc(0)
            for o, a in consts.items():
                bracket += a / mpf(q) ** o
            if integer_x:
                c = int(cvals[q])
                if c == 0:
                    continue
                total += bracket * c
            else:
                total += bracket * _mp_csum_real(q, x, table)
        return complex(total)


def _mp_csum_real(q: int, x: float, table: SieveTable | None) -> "object":
    from mpmath import mp, mpf

    from .arith import divisors, mobius

    pref = 1 - mp.expjpi(2 * mpf(x))
    acc = mp.mpc(0)
    for d in divisors(q, table):
        mu = mobius(q // d, table)
        if mu == 0:
            continue
        acc += mu / (mp.expjpi(-2 * mpf(x) / d) - 1)
    return pref * acc


def sigma_tilde(
    k: int,
    x: float,
    target_error: float,
    table: SieveTable | None = None,
    q_limit: int = DEFAULT_Q_LIMIT,
    threads: int = 1,
    mp_dps: int | None = None,
) -> tuple[complex, float]:
    """Generalized divisor power sum x**k zeta(k+1) sum of c_q(x)/q**(k+1).

    Absolutely convergent for every real x when k >= 2, and at integer x
    for k >= 1; any other request is refused with DivergentRequest rather
    than summed to a meaningless truncation.  Returns the value and the
    achieved (certified truncation + estimated roundoff) error bound.
    """
    if is_integer_argument(x):
        if k < 1:
            raise ValueError("need k >= 1 at integer arguments")
    elif k <= 1:
        raise DivergentRequest(
            f"sigma_tilde with k = {k} diverges for all x in R\\Z; need k >= 2"
        )
    return zeta_weighted_sum(
        {k + 1: Fraction(1)}, x, target_error, table, q_limit, threads, mp_dps
    )


# ---------------------------------------------------------------------------
# Divergence rate fits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares line through (abscissa(Q), S_Q) checkpoints."""

    abscissa_kind: str  # "log_Q" or "Q"
    slope: complex
    intercept: complex
    rms_residual: float
    q_values: tuple[int, ...]


def geometric_checkpoints(start: int, stop: int, count: int) -> list[int]:
    """Strictly increasing integer checkpoints, geometrically spaced."""
    if start < 1 or stop < start or count < 2:
        raise ValueError("need 1 <= start <= stop and count >= 2")
    pts = np.unique(np.rint(np.geomspace(start, stop, count)).astype(np.int64))
    return [int(p) for p in pts]


def expected_slope(rule: CoefficientRule, x: float) -> complex | None:
    """Predicted growth slope of S_Q for divergent rules at non-integer x.

    sigma:1 grows like x * factor(x) * log Q; zero-hardy like factor(x) * Q;
    zero-ram like factor(x)/zeta(2) * Q.  Other rules have no asserted rate.
    """
    f = main_term_factor(x)
    if rule.kind == "sigma_k" and rule.k == 1:
        return x * f
    if rule.kind == "zero_hardy":
        return f
    if rule.kind == "zero_ramanujan":
        return f / zeta(2.0)
    return None


def divergence_slope(
    rule: CoefficientRule,
    x: float,
    q_checkpoints: Sequence[int],
    table: SieveTable | None = None,
    threads: int = 1,
) -> SlopeFit:
    """Fit S_Q against log Q (sigma:1) or Q (zero rules) at non-integer x.

    Requires at least 8 checkpoints spanning at least two decades.  The fit
    is unweighted least squares; rms_residual is always reported so callers
    can judge the fit quality.
    """
    if is_integer_argument(x):
        raise ValueError("divergence fits need a non-integer x")
    if rule.kind == "sigma_k" and rule.k != 1:
        raise ValueError("only the k = 1 divisor rule has a divergent fit")
    cps = [int(q) for q in q_checkpoints]
    if len(cps) < 8:
        raise ValueError("need at least 8 checkpoints")
    if max(cps) < 100 * min(cps):
        raise ValueError("checkpoints must span at least two decades")
    trace = partial_sum_trace(rule, x, cps, table, threads)
    abscissa_kind = "log_Q" if rule.kind == "sigma_k" else "Q"
    qs = np.array(trace.q_values(), dtype=np.float64)
    t = np.log(qs) if abscissa_kind == "log_Q" else qs
    y = np.array(trace.values(), dtype=np.complex128)
    t_bar = t.mean()
    y_bar = y.mean()
    denom = ((t - t_bar) ** 2).sum()
    slope = (((t - t_bar) * (y - y_bar)).sum()) / denom
    intercept = y_bar - slope * t_bar
    resid = y - (intercept + slope * t)
    rms = float(np.sqrt(np.mean(np.abs(resid) ** 2)))
    return SlopeFit(
        abscissa_kind=abscissa_kind,
        slope=complex(slope),
        intercept=complex(intercept),
        rms_residual=rms,
        q_values=tuple(int(q) for q in cps),
    )
