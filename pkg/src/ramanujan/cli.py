"""Command-line surface: one subcommand per library capability.

Scalars go to stdout; traces and reports go to --out (or stdout) as CSV or
JSON.  Output is deterministic: floats are printed with 17 significant
digits, which round-trips float64 exactly, and rows are always emitted in
ascending q.  Domain errors exit with status 1 and a single-line
diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .arith import SieveTable, factorize, sigma
from .local import locality_report, recurrence_residual, sigma_local
from .series import (
    CoefficientRule,
    PartialSumTrace,
    divergence_slope,
    expected_slope,
    geometric_checkpoints,
    partial_sum_trace,
    sigma_tilde,
    zeta,
)
from .sums import (
    AsymptoticReport,
    asymptotic_residual_report,
    csum_int,
    csum_real_direct,
    csum_real_divisor,
)

__all__ = ["RunConfig", "main", "parse_args", "run"]


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


@dataclass
class RunConfig:
    """Validated arguments of one CLI invocation."""

    command: str
    q: int = 0
    q_min: int = 0
    q_max: int = 0
    stride: int = 1
    n: int = 0
    x: float = 0.0
    probes: list[float] | None = None
    alpha: int = 0
    alpha_max: int = 0
    k: int = 1
    k_max: int = 0
    rule: str = "sigma:1"
    qgrid: str = ""
    target_error: float = 1e-6
    method: str = "auto"
    threads: int = 1
    out: str | None = None
    format: str = "csv"
    as_json: bool = False
    checkpoints: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.threads < 1:
            raise ValueError("--threads must be >= 1")
        if self.qgrid:
            self.checkpoints = _parse_qgrid(self.qgrid)


def _parse_qgrid(spec: str) -> list[int]:
    """Parse ``log:<start>:<stop>:<count>`` into increasing checkpoints."""
    parts = spec.split(":")
    if len(parts) != 4 or parts[0] != "log":
        raise ValueError(f"bad --qgrid {spec!r}; expected log:<start>:<stop>:<count>")
    start, stop, count = int(parts[1]), int(parts[2]), int(parts[3])
    return geometric_checkpoints(start, stop, count)


def _open_out(cfg: RunConfig):
    if cfg.out:
        return open(cfg.out, "w", encoding="utf-8", newline="")
    return sys.stdout


def _emit(cfg: RunConfig, text: str) -> None:
    f = _open_out(cfg)
    try:
        f.write(text)
    finally:
        if f is not sys.stdout:
            f.close()


def _trace_csv(trace: PartialSumTrace) -> str:
    lines = ["Q,re,im"]
    for q, s in trace.checkpoints:
        lines.append(f"{q},{_fmt(s.real)},{_fmt(s.imag)}")
    return "\n".join(lines) + "\n"


def _trace_json(trace: PartialSumTrace) -> str:
    doc = {
        "formula": "partial sums S_Q of the expansion sum_q f_hat(q) c_q(x)",
        "rule": trace.rule.label,
        "x": trace.x,
        "checkpoints": [
            {"Q": q, "re": s.real, "im": s.imag} for q, s in trace.checkpoints
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_trace_csv(text: str) -> list[tuple[int, complex]]:
    """Inverse of the trace CSV writer (used for round-trip checks)."""
    rows = []
    lines = [ln for ln in text.strip().splitlines() if ln]
    if lines[0] != "Q,re,im":
        raise ValueError(f"unexpected trace header {lines[0]!r}")
    for ln in lines[1:]:
        q, re, im = ln.split(",")
        rows.append((int(q), complex(float(re), float(im))))
    return rows


def _report_csv(rep: AsymptoticReport) -> str:
    lines = ["q,res_re,res_im,sigma0,phi"]
    for q, res, s0, phi in rep.rows():
        lines.append(f"{q},{_fmt(res.real)},{_fmt(res.imag)},{s0},{phi}")
    return "\n".join(lines) + "\n"


def _report_json(rep: AsymptoticReport) -> str:
    doc = {
        "formula": "residual r(q) = c_q(x) - factor(x) phi(q), normalized by sigma_0(q)",
        "x": rep.x,
        "q_min": rep.q_range[0],
        "q_max": rep.q_range[1],
        "stride": rep.stride,
        "factor": {"re": rep.factor.real, "im": rep.factor.imag},
        "c_estimate": rep.c_estimate,
        "rows": [
            {"q": q, "res_re": r.real, "res_im": r.imag, "sigma0": s0, "phi": phi}
            for q, r, s0, phi in rep.rows()
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        return _dispatch(cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(cfg: RunConfig) -> int:
    cmd = cfg.command
    if cmd == "factor":
        fac = factorize(cfg.n)
        if cfg.as_json:
            print(json.dumps({"n": fac.n, "factors": [list(f) for f in fac.factors]}))
        else:
            print(" * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in fac.factors)
                  or "1")
        return 0

    if cmd == "csum":
        print(csum_int(cfg.q, cfg.n))
        return 0

    if cmd == "csum-real":
        if cfg.method == "direct":
            z = csum_real_direct(cfg.q, cfg.x)
        elif cfg.method == "divisor":
            z = csum_real_divisor(cfg.q, cfg.x)
        else:
            from .sums import NearSingularDenominator, is_integer_argument

            if is_integer_argument(cfg.x):
                z = complex(csum_int(cfg.q, round(cfg.x)))
            else:
                try:
                    z = csum_real_divisor(cfg.q, cfg.x)
                except NearSingularDenominator:
                    z = csum_real_direct(cfg.q, cfg.x)
        print(f"{_fmt(z.real)} {_fmt(z.imag)}")
        return 0

    if cmd == "zeta":
        print(_fmt(zeta(cfg.x)))
        return 0

    if cmd == "expand":
        rule = CoefficientRule.parse(cfg.rule)
        trace = partial_sum_trace(rule, cfg.x, cfg.checkpoints, threads=cfg.threads)
        _emit(cfg, _trace_json(trace) if cfg.format == "json" else _trace_csv(trace))
        return 0

    if cmd == "sigma-tilde":
        value, bound = sigma_tilde(
            cfg.k, cfg.x, cfg.target_error, threads=cfg.threads
        )
        if cfg.as_json:
            print(json.dumps({
                "formula": "x^k zeta(k+1) sum_q c_q(x)/q^(k+1), certified truncation",
                "k": cfg.k, "x": cfg.x,
                "re": value.real, "im": value.imag, "achieved_bound": bound,
            }))
        else:
            print(f"{_fmt(value.real)} {_fmt(value.imag)} {_fmt(bound)}")
        return 0

    if cmd == "thm1":
        rep = asymptotic_residual_report(
            cfg.x, cfg.q_min, cfg.q_max, cfg.stride, threads=cfg.threads
        )
        _emit(cfg, _report_json(rep) if cfg.format == "json" else _report_csv(rep))
        return 0

    if cmd == "slope":
        rule = CoefficientRule.parse(cfg.rule)
        fit = divergence_slope(rule, cfg.x, cfg.checkpoints, threads=cfg.threads)
        expected = expected_slope(rule, cfg.x)
        doc = {
            "formula": "least-squares slope of S_Q against "
            + ("log Q" if fit.abscissa_kind == "log_Q" else "Q"),
            "rule": rule.label,
            "x": cfg.x,
            "abscissa": fit.abscissa_kind,
            "slope": {"re": fit.slope.real, "im": fit.slope.imag},
            "intercept": {"re": fit.intercept.real, "im": fit.intercept.imag},
            "rms_residual": fit.rms_residual,
            "expected": None if expected is None else
            {"re": expected.real, "im": expected.imag},
            "checkpoints": list(fit.q_values),
        }
        _emit(cfg, json.dumps(doc, indent=2) + "\n")
        return 0

    if cmd == "local":
        if cfg.probes:
            rep = locality_report(
                cfg.alpha, cfg.probes, cfg.target_error, threads=cfg.threads
            )
            doc = {
                "formula": "locally interpolating divisor-sum expansion around alpha",
                "alpha": rep.alpha,
                "target_error": rep.target_error,
                "samples": [
                    {
                        "point": s.point,
                        "re": s.value.real,
                        "im": s.value.imag,
                        "certified": s.certified,
                        "reference": s.reference,
                        "match": s.match,
                    }
                    for s in rep.samples
                ],
            }
            _emit(cfg, json.dumps(doc, indent=2) + "\n")
            return 0
        value, bound = sigma_local(
            cfg.x, cfg.alpha, cfg.k, cfg.target_error, threads=cfg.threads
        )
        print(f"{_fmt(value.real)} {_fmt(value.imag)} {_fmt(bound)}")
        return 0

    if cmd == "recurrence":
        total = 0
        passed = 0
        table = SieveTable(max(2, cfg.alpha_max))
        for alpha in range(2, cfg.alpha_max + 1):
            for k in range(cfg.k_max + 1):
                total += 1
                if recurrence_residual(alpha, k, table) == 0:
                    passed += 1
        status = "OK" if passed == total else "FAIL"
        print(f"{status} {passed}/{total}")
        return 0 if passed == total else 1

    raise ValueError(f"unknown command {cmd!r}")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ramanujan",
        description="Ramanujan sums, expansion diagnostics, and local "
        "divisor-function expansions",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--json", dest="as_json", action="store_true")
        return sp

    sp = add("factor", help="prime factorization of n")
    sp.add_argument("--n", type=int, required=True)

    sp = add("csum", help="integer Ramanujan sum c_q(n)")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = add("csum-real", help="real-argument sum c_q(x)")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--method", choices=("auto", "direct", "divisor"), default="auto")

    sp = add("zeta", help="Riemann zeta at real s > 1")
    sp.add_argument("--s", dest="x", type=float, required=True)

    sp = add("expand", help="partial-sum trace of an expansion")
    sp.add_argument("--rule", type=str, required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--qgrid", type=str, required=True)

    sp = add("sigma-tilde", help="certified generalized divisor power sum")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--target-error", dest="target_error", type=float, default=1e-6)

    sp = add("thm1", help="asymptotic residual report for c_q(x)")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--qmin", dest="q_min", type=int, required=True)
    sp.add_argument("--qmax", dest="q_max", type=int, required=True)
    sp.add_argument("--stride", type=int, default=1)

    sp = add("slope", help="divergence growth-rate fit")
    sp.add_argument("--rule", type=str, required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--qgrid", type=str, required=True)

    sp = add("local", help="locally interpolating expansion near alpha")
    sp.add_argument("--alpha", type=int, required=True)
    sp.add_argument("--x", type=float, default=None)
    sp.add_argument("--k", type=int, default=1, choices=(0, 1))
    sp.add_argument("--probes", type=str, default=None,
                    help="comma-separated probe points (emits a JSON report)")
    sp.add_argument("--target-error", dest="target_error", type=float, default=1e-6)

    sp = add("recurrence", help="exact divisor-power recurrence sweep")
    sp.add_argument("--alpha-max", dest="alpha_max", type=int, required=True)
    sp.add_argument("--k-max", dest="k_max", type=int, required=True)

    return p


def parse_args(argv: list[str] | None = None) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    kwargs = {k: v for k, v in vars(ns).items() if v is not None}
    probes = kwargs.pop("probes", None)
    if probes is not None:
        kwargs["probes"] = [float(t) for t in str(probes).split(",") if t.strip()]
    if kwargs.get("command") == "local" and "x" not in kwargs \
            and "probes" not in kwargs:
        raise ValueError("local needs --x or --probes")
    return RunConfig(**kwargs)


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
