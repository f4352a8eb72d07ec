"""Command-line front end: verify identities, emit report tables,
benchmark summation modes, and manage the Bernoulli cache.

Exit-code contract: 0 all reports passed, 1 some residual exceeded its
tolerance, 2 usage error, 3 numeric or I/O failure.  Nothing else.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import identities as idn
from . import numkernel as nk
from . import ratseq
from .numkernel import (
    EvalContext,
    UsageError,
    ZetaforgeError,
    make_context,
)

__all__ = [
    "VerifyRequest",
    "ReportDocument",
    "IDENTITIES",
    "run_verify",
    "run_table",
    "run_bench",
    "run_cache",
    "main",
]

EXIT_OK = 0
EXIT_RESIDUAL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

IDENTITIES = ("ln2", "zeta3", "general", "milgram", "tyagi-holm",
              "sum-a", "sum-b", "param-sum")

# identities whose ranged/series machinery the table and bench commands accept
_TABLE_IDENTITIES = ("general", "milgram")
_SERIES_IDENTITIES = ("ln2", "zeta3", "sum-a", "sum-b", "param-sum",
                      "general", "milgram")

DEFAULT_CACHE_PATH = "bernoulli_cache.txt"
CACHE_ENV_VAR = "ZETAFORGE_CACHE"


@dataclass(frozen=True)
class VerifyRequest:
    identity: str
    m: int | None = None
    s: Fraction | None = None
    t: Fraction | None = None
    digits: int = 30
    mode: str = "accelerated"
    max_terms: int = 10 ** 6
    output: str = "text"


@dataclass(frozen=True)
class ReportDocument:
    reports: list[dict]
    context: dict
    elapsed_ms: int
    schema_version: str = "1"

    def as_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "context": self.context,
            "reports": self.reports,
            "elapsed_ms": self.elapsed_ms,
        }


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _validate_request(req: VerifyRequest) -> None:
    if req.identity not in IDENTITIES:
        raise UsageError(f"unknown identity {req.identity!r}")
    if not isinstance(req.digits, int) or req.digits < 1:
        raise UsageError("digits must be a positive integer")
    if req.mode not in idn.MODES:
        raise UsageError(f"mode must be one of {idn.MODES}")
    if not isinstance(req.max_terms, int) or req.max_terms < 1:
        raise UsageError("max_terms must be a positive integer")
    if req.output not in ("text", "json"):
        raise UsageError("output must be text or json")
    needs = {"general": "m", "milgram": "m", "tyagi-holm": "s", "param-sum": "t"}
    need = needs.get(req.identity)
    for name in ("m", "s", "t"):
        have = getattr(req, name) is not None
        if name == need and not have:
            raise UsageError(f"identity {req.identity} requires --{name}")
        if name != need and have:
            raise UsageError(f"identity {req.identity} does not take --{name}")
    if req.identity == "tyagi-holm" and req.mode == "direct":
        raise UsageError("tyagi-holm has no direct summation mode")


def _evaluate(req: VerifyRequest, ctx: EvalContext) -> idn.IdentityReport:
    if req.identity == "ln2":
        return idn.ln2_report(req.mode, ctx, req.max_terms)
    if req.identity == "zeta3":
        return idn.eval_zeta3(req.mode, ctx, req.max_terms)
    if req.identity == "sum-a":
        return idn.eval_sum_a(ctx, req.mode, req.max_terms)
    if req.identity == "sum-b":
        return idn.eval_sum_b(ctx, req.mode, req.max_terms)
    if req.identity == "param-sum":
        return idn.eval_param_sum(req.t, ctx, req.mode, req.max_terms)
    if req.identity == "tyagi-holm":
        return idn.eval_tyagi_holm(req.s, ctx)
    if req.identity == "general":
        return idn.eval_general(req.m, ctx, req.mode, req.max_terms)
    return idn.eval_milgram(req.m, ctx, req.mode, req.max_terms)


def _value_dict(a: nk.ApproxReal, digits: int) -> dict:
    cert = nk.certified_places(a)
    places = digits + 8 if cert is None else min(cert, digits + 8)
    return {
        "decimal": nk.to_decimal(a, places),
        "certified_digits": places if cert is None else cert,
    }


def _report_dict(r: idn.IdentityReport, digits: int) -> dict:
    return {
        "identity": r.identity_name,
        "params": [{"name": k, "value": str(v)} for k, v in r.params],
        "lhs": _value_dict(r.lhs, digits),
        "rhs": _value_dict(r.rhs, digits),
        "residual_upper": nk.sci_upper(nk.upper_bound(r.abs_residual)),
        "digits_agreed": r.digits_agreed,
        "tolerance": f"1e-{digits}",
        "pass": r.passed,
    }


def _report_text(d: dict) -> str:
    par = "".join(f" {p['name']}={p['value']}" for p in d["params"])
    return "\n".join([
        f"identity: {d['identity']}{par}",
        f"status: {'pass' if d['pass'] else 'FAIL'}",
        f"lhs: {d['lhs']['decimal']} ({d['lhs']['certified_digits']} certified)",
        f"rhs: {d['rhs']['decimal']} ({d['rhs']['certified_digits']} certified)",
        f"residual_upper: {d['residual_upper']}",
        f"digits_agreed: {d['digits_agreed']}",
        f"tolerance: {d['tolerance']}",
    ])


def run_verify(req: VerifyRequest) -> tuple[int, ReportDocument | None]:
    t0 = time.monotonic()
    try:
        _validate_request(req)
        ctx = make_context(req.digits)
        report = _evaluate(req, ctx)
    except UsageError as e:
        _err(str(e))
        return EXIT_USAGE, None
    except ZetaforgeError as e:
        _err(str(e))
        return EXIT_NUMERIC, None
    doc = ReportDocument(
        reports=[_report_dict(report, req.digits)],
        context={
            "digits": req.digits,
            "guard_digits": ctx.guard_digits,
            "working_bits": ctx.working_bits,
            "mode": req.mode,
            "max_terms": req.max_terms,
        },
        elapsed_ms=int((time.monotonic() - t0) * 1000),
    )
    return (EXIT_OK if report.passed else EXIT_RESIDUAL), doc


def run_table(identity: str, m_range: tuple[int, int], digits: int,
              fmt: str = "csv") -> tuple[int, ReportDocument | None]:
    t0 = time.monotonic()
    try:
        if identity not in _TABLE_IDENTITIES:
            raise UsageError(
                f"table supports {_TABLE_IDENTITIES}, not {identity!r}")
        if fmt not in ("json", "csv"):
            raise UsageError("format must be json or csv")
        lo, hi = m_range
        if lo < 1 or hi < lo:
            raise UsageError("m-range must satisfy 1 <= lo <= hi")
        if not isinstance(digits, int) or digits < 1:
            raise UsageError("digits must be a positive integer")
        ctx = make_context(digits)
        ev = idn.eval_general if identity == "general" else idn.eval_milgram
        reports = [ev(m, ctx) for m in range(lo, hi + 1)]
    except UsageError as e:
        _err(str(e))
        return EXIT_USAGE, None
    except ZetaforgeError as e:
        _err(str(e))
        return EXIT_NUMERIC, None
    doc = ReportDocument(
        reports=[_report_dict(r, digits) for r in reports],
        context={"digits": digits, "guard_digits": ctx.guard_digits,
                 "working_bits": ctx.working_bits, "format": fmt},
        elapsed_ms=int((time.monotonic() - t0) * 1000),
    )
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_RESIDUAL
    return code, doc


def render_csv(doc: ReportDocument) -> str:
    lines = ["identity,param,digits_agreed,residual,pass"]
    for r in doc.reports:
        param = ";".join(p["value"] for p in r["params"])
        lines.append("%s,%s,%d,%s,%s" % (
            r["identity"], param, r["digits_agreed"], r["residual_upper"],
            "true" if r["pass"] else "false"))
    return "\n".join(lines) + "\n"


def _bench_series(identity: str, ctx: EvalContext, mode: str,
                  max_terms: int) -> tuple[idn.SeriesResult, idn.IdentityReport]:
    if identity == "ln2":
        sr = idn.series_for("ln2", ctx, mode, max_terms)
        return sr, idn.ln2_report(mode, ctx, max_terms, _series=sr)
    if identity == "zeta3":
        sr = idn.series_for("zeta3", ctx, mode, max_terms)
        return sr, idn.eval_zeta3(mode, ctx, max_terms, _series=sr)
    if identity == "sum-a":
        sr = idn.series_for("sum-a", ctx, mode, max_terms)
        return sr, idn.eval_sum_a(ctx, mode, max_terms, _series=sr)
    if identity == "sum-b":
        sr = idn.series_for("sum-b", ctx, mode, max_terms)
        return sr, idn.eval_sum_b(ctx, mode, max_terms, _series=sr)
    if identity == "param-sum":
        t = Fraction(1, 2)
        sr = idn.series_for("param-sum", ctx, mode, max_terms, t=t)
        return sr, idn.eval_param_sum(t, ctx, mode, max_terms, _series=sr)
    if identity == "general":
        sr = idn.series_for("general", ctx, mode, max_terms, m=1)
        return sr, idn.eval_general(1, ctx, mode, max_terms, _series=sr)
    sr = idn.series_for("general", ctx, mode, max_terms, m=1)
    return sr, idn.eval_milgram(1, ctx, mode, max_terms, _series=sr)


def run_bench(identity: str, digits_list: list[int], modes: list[str],
              max_terms: int = 10 ** 6) -> tuple[int, dict | None]:
    t0 = time.monotonic()
    try:
        if identity not in _SERIES_IDENTITIES:
            raise UsageError(
                f"bench needs a series-form identity, one of {_SERIES_IDENTITIES}")
        if not digits_list or any(d < 1 for d in digits_list):
            raise UsageError("digits must be positive integers")
        bad = [m for m in modes if m not in idn.MODES]
        if bad or not modes:
            raise UsageError(f"modes must be a nonempty subset of {idn.MODES}")
        rows = []
        for mode in sorted(set(modes)):
            for digits in sorted(set(digits_list)):
                ctx = make_context(digits)
                r0 = time.monotonic()
                sr, report = _bench_series(identity, ctx, mode, max_terms)
                rows.append({
                    "digits": digits,
                    "mode": mode,
                    "terms_used": sr.terms_used,
                    "elapsed_ms": int((time.monotonic() - r0) * 1000),
                    "digits_agreed": report.digits_agreed,
                })
    except UsageError as e:
        _err(str(e))
        return EXIT_USAGE, None
    except ZetaforgeError as e:
        _err(str(e))
        return EXIT_NUMERIC, None
    doc = {
        "schema_version": "1",
        "context": {"identity": identity, "max_terms": max_terms},
        "rows": rows,
        "elapsed_ms": int((time.monotonic() - t0) * 1000),
    }
    return EXIT_OK, doc


def run_cache(path: str | None, up_to: int) -> int:
    if path is None:
        path = os.environ.get(CACHE_ENV_VAR, DEFAULT_CACHE_PATH)
    if not isinstance(up_to, int) or up_to < 2 or up_to % 2 != 0:
        _err("up-to must be a positive even integer")
        return EXIT_USAGE
    try:
        table = ratseq.build_table(up_to)
        ratseq.cache_store(table, path)
    except OSError as e:
        _err(f"cache write failed: {e}")
        return EXIT_NUMERIC
    except ZetaforgeError as e:
        _err(str(e))
        return EXIT_NUMERIC
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing

def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def _m_range(text: str) -> tuple[int, int]:
    try:
        lo, _, hi = text.partition("..")
        if not _:
            raise ValueError
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"range must look like 1..8, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a digit list: {text!r}")


def _mode_list(text: str) -> list[str]:
    return [p for p in text.split(",") if p]


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="zetaforge",
        description="Certify rational zeta-series identities with "
                    "rigorous truncation bounds.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="evaluate one identity and report")
    v.add_argument("identity", choices=IDENTITIES)
    v.add_argument("--m", type=int, default=None)
    v.add_argument("--s", type=_rational, default=None)
    v.add_argument("--t", type=_rational, default=None)
    v.add_argument("--digits", type=int, default=30)
    v.add_argument("--mode", choices=idn.MODES, default="accelerated")
    v.add_argument("--max-terms", type=int, default=10 ** 6)
    v.add_argument("--output", choices=("text", "json"), default="text")

    t = sub.add_parser("table", help="report table over a parameter range")
    t.add_argument("--identity", required=True)
    t.add_argument("--m-range", type=_m_range, required=True)
    t.add_argument("--digits", type=int, default=30)
    t.add_argument("--format", choices=("json", "csv"), default="csv")

    b = sub.add_parser("bench", help="terms/time by mode and target digits")
    b.add_argument("--identity", required=True)
    b.add_argument("--digits", type=_int_list, required=True)
    b.add_argument("--modes", type=_mode_list, default=["accelerated"])
    b.add_argument("--max-terms", type=int, default=10 ** 6)

    c = sub.add_parser("cache", help="write the Bernoulli number cache")
    c.add_argument("--path", default=None)
    c.add_argument("--up-to", type=int, required=True)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "verify":
        req = VerifyRequest(identity=args.identity, m=args.m, s=args.s,
                            t=args.t, digits=args.digits, mode=args.mode,
                            max_terms=args.max_terms, output=args.output)
        code, doc = run_verify(req)
        if doc is not None:
            if req.output == "json":
                print(json.dumps(doc.as_dict(), indent=2))
            else:
                print("\n".join(_report_text(r) for r in doc.reports))
                print(f"elapsed_ms: {doc.elapsed_ms}")
        return code
    if args.command == "table":
        code, doc = run_table(args.identity, args.m_range, args.digits,
                              args.format)
        if doc is not None:
            if args.format == "json":
                print(json.dumps(doc.as_dict(), indent=2))
            else:
                print(render_csv(doc), end="")
        return code
    if args.command == "bench":
        code, doc = run_bench(args.identity, args.digits, args.modes,
                              args.max_terms)
        if doc is not None:
            print(json.dumps(doc, indent=2))
        return code
    return run_cache(args.path, args.up_to)


if __name__ == "__main__":
    sys.exit(main())
