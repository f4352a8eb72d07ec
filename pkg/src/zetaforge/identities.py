"""Evaluators and certifiers for the Dancs-He zeta-series identity family.

Every identity here is a rational-coefficient series over zeta(2n)
against an independently computed right-hand side.  The series share
one engine: terms are P(n) * zeta(2n) * sum_i sign_i x_i^(2n) with
P(n) = scale / prod_{r in offsets} (2n + r).

The series as written converge only polynomially, so certification
beyond a few digits needs the acceleration split zeta(2n) = 1 +
(zeta(2n) - 1): the "1" part collapses to closed logarithmic forms
(base_sum), and the remainder decays like 4^{-n} since
zeta(2n) - 1 <= 3*4^{-n}.  Direct mode sums the series as stated and
reports an honest integral tail bound instead of failing.

Soundness contract: every SeriesResult satisfies
|true sum - value| <= tail_bound + 2^err_exp(value), and every
IdentityReport.passed compares the certified upper bound of the
residual against the tolerance, never the bare magnitude.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from . import numkernel as nk
from .numkernel import (
    ApproxReal,
    DomainError,
    EvalContext,
    PrecisionError,
    UsageError,
    _ceil_log2_fr,
)
from .ratseq import bernoulli, euler_endpoint, factorial
from .zetacore import _rpow, hurwitz_ds_ref, zeta_even_coeff, zeta_ref

__all__ = [
    "SeriesResult",
    "IdentityReport",
    "BaseSumSpec",
    "MODES",
    "term_equiv_ln2",
    "term_equiv_zeta3",
    "term_equiv_general",
    "base_sum",
    "series_for",
    "eval_ln2",
    "ln2_report",
    "eval_zeta3",
    "eval_sum_a",
    "eval_sum_b",
    "eval_param_sum",
    "eval_tyagi_holm",
    "eval_general",
    "eval_milgram",
    "milgram_coeff_maps",
]

MODES = ("direct", "accelerated")

# rational upper bound on zeta(2), the worst case of every zeta(2n) factor
_Z2_UB = Fraction(329, 200)


@dataclass(frozen=True)
class SeriesResult:
    value: ApproxReal
    terms_used: int
    tail_bound: ApproxReal
    mode: str


@dataclass(frozen=True)
class IdentityReport:
    identity_name: str
    params: tuple[tuple[str, object], ...]
    lhs: ApproxReal
    rhs: ApproxReal
    abs_residual: ApproxReal
    digits_agreed: int
    tolerance: ApproxReal
    passed: bool


@dataclass(frozen=True)
class BaseSumSpec:
    """sum_{k>=1} x^{2k} * sum_j c_j/(2k + r_j), as (c_j, r_j) pairs."""

    pole_offsets: tuple[tuple[Fraction, int], ...]
    x: Fraction


# ---------------------------------------------------------------------------
# Exact term-level proof-step maps

def term_equiv_ln2(m: int) -> tuple[Fraction, Fraction]:
    """Coefficient of pi^{2m+2} in the ln 2 series, by both routes.

    First element comes from the signed Euler-polynomial endpoint form,
    second from the zeta-series form at n = m + 1; equality is the
    reindexing proof step.
    """
    if m < 0:
        raise UsageError("m must be >= 0")
    dancs = Fraction((-1) ** m, 2) * euler_endpoint(m) / factorial(2 * m + 3)
    n = m + 1
    zser = (1 - Fraction(1, 4 ** n)) * zeta_even_coeff(n).coeff / (n * (2 * n + 1))
    return dancs, zser


def term_equiv_zeta3(m: int) -> tuple[Fraction, Fraction]:
    """Coefficient of pi^{2m+2} in the quarter-series pi^2 S/4, both routes."""
    if m < 0:
        raise UsageError("m must be >= 0")
    dancs = Fraction((-1) ** m, 4) * euler_endpoint(m) / factorial(2 * m + 5)
    n = m + 1
    zser = (1 - Fraction(1, 4 ** n)) * zeta_even_coeff(n).coeff / (
        (2 * n) * (2 * n + 1) * (2 * n + 2) * (2 * n + 3))
    return dancs, zser


def term_equiv_general(m: int, k: int) -> tuple[Fraction, Fraction]:
    """Coefficient of pi^{2k+2} in (pi^2/2) S-tilde for order m, both routes."""
    if m < 1:
        raise UsageError("m must be >= 1")
    if k < 0:
        raise UsageError("k must be >= 0")
    dancs = Fraction((-1) ** k, 2) * euler_endpoint(k) / factorial(2 * k + 2 * m + 3)
    n = k + 1
    zser = 2 * (1 - Fraction(1, 4 ** n)) * zeta_even_coeff(n).coeff \
        * factorial(2 * n - 1) / factorial(2 * n + 2 * m + 1)
    return dancs, zser


# ---------------------------------------------------------------------------
# zeta(2n) and zeta(2n) - 1 providers for the series loops

_z_lock = threading.Lock()
_z2n_cache: dict[tuple[int, int], ApproxReal] = {}
_z2n_m1_cache: dict[tuple[int, int], ApproxReal] = {}


def _euler_zeta2n(n: int, cb: EvalContext) -> ApproxReal:
    c = zeta_even_coeff(n).coeff
    return nk.mul(nk.from_fraction(c, cb),
                  nk.pow_int(nk.const_pi(cb), 2 * n, cb), cb)


def _zeta2n_m1(n: int, ctx: EvalContext) -> ApproxReal:
    """zeta(2n) - 1 with sound bound; the subtraction cancels ~2n bits,
    so the Euler-formula route runs at boosted precision."""
    wb = ctx.working_bits
    key = (n, wb)
    with _z_lock:
        hit = _z2n_m1_cache.get(key)
    if hit is not None:
        return hit
    if 2 * n - 2 > wb + 8:
        # |zeta(2n) - 1| <= 3*4^{-n} <= 2^{-2n+2}: below the working
        # scale, a zero magnitude with that bound is enough
        out = ApproxReal(nk.from_int(0, ctx).magnitude, wb, -2 * n + 2)
    elif n <= 32:
        cb = EvalContext(ctx.target_digits, ctx.guard_digits, wb + 80)
        out = _round_into(nk.sub(_euler_zeta2n(n, cb), nk.from_int(1, cb), cb), ctx)
    else:
        cb = EvalContext(ctx.target_digits, ctx.guard_digits, wb + 16)
        K = max(3, 2 * 2 ** -(-(wb + 6) // (2 * n)))
        terms = [nk.pow_int(nk.from_int(k, cb), -2 * n, cb) for k in range(2, K + 1)]
        tail = Fraction(K) ** (1 - 2 * n) / (2 * n - 1)
        out = _round_into(_with_extra_err(nk.sum_many(terms, cb), tail), ctx)
    with _z_lock:
        _z2n_m1_cache[key] = out
    return out


def _zeta2n(n: int, ctx: EvalContext) -> ApproxReal:
    wb = ctx.working_bits
    key = (n, wb)
    with _z_lock:
        hit = _z2n_cache.get(key)
    if hit is not None:
        return hit
    if n <= 32:
        cb = EvalContext(ctx.target_digits, ctx.guard_digits, wb + 80)
        out = _round_into(_euler_zeta2n(n, cb), ctx)
    else:
        out = nk.add(nk.from_int(1, ctx), _zeta2n_m1(n, ctx), ctx)
    with _z_lock:
        _z2n_cache[key] = out
    return out


def _round_into(a: ApproxReal, ctx: EvalContext) -> ApproxReal:
    if a.precision_bits == ctx.working_bits:
        return a
    return nk.add(a, nk.from_int(0, ctx), ctx)


def _with_extra_err(a: ApproxReal, extra: Fraction) -> ApproxReal:
    if extra == 0:
        return a
    return ApproxReal(a.magnitude, a.precision_bits,
                      nk._eadd(a.err_exp, _ceil_log2_fr(extra)))


# ---------------------------------------------------------------------------
# Closed-form base series

def _cover_weights(offsets: tuple[int, ...]) -> list[Fraction]:
    # partial-fraction cover-up for 1/prod(y + r_j)
    ws = []
    for j, rj in enumerate(offsets):
        w = Fraction(1)
        for l, rl in enumerate(offsets):
            if l != j:
                w /= rl - rj
        ws.append(w)
    return ws


def _t_r(r: int, x: Fraction, ctx: EvalContext) -> ApproxReal:
    """sum_{n>=1} x^{2n}/(2n+r) for 0 < x < 1, in closed form."""
    if r % 2 == 0:
        p = r // 2
        head = nk.eval_elementary("ln", nk.from_fraction(1 - x * x, ctx), ctx)
        g = nk.neg(nk.div(head, nk.from_int(2, ctx), ctx))
        partial = sum(x ** (2 * k) / (2 * k) for k in range(1, p + 1))
    else:
        p = (r - 1) // 2
        g = nk.eval_elementary("atanh", nk.from_fraction(x, ctx), ctx)
        partial = sum(x ** (2 * k + 1) / (2 * k + 1) for k in range(p + 1))
    if partial:
        g = nk.sub(g, nk.from_fraction(partial, ctx), ctx)
    if r == 0:
        return g
    return nk.mul(nk.pow_int(nk.from_fraction(x, ctx), -r, ctx), g, ctx)


def _f_r(r: int, ctx: EvalContext) -> ApproxReal:
    """Regularized x = 1 endpoint value of the same series; only the
    weight-cancelled combination is meaningful."""
    ln2 = nk.eval_elementary("ln", nk.from_int(2, ctx), ctx)
    half_ln2 = nk.div(ln2, nk.from_int(2, ctx), ctx)
    if r % 2 == 0:
        partial = sum(Fraction(1, 2 * k) for k in range(1, r // 2 + 1))
        return nk.neg(nk.add(half_ln2, nk.from_fraction(partial, ctx), ctx))
    partial = sum(Fraction(1, 2 * k + 1) for k in range((r - 1) // 2 + 1))
    return nk.sub(half_ln2, nk.from_fraction(partial, ctx), ctx)


def base_sum(spec: BaseSumSpec, ctx: EvalContext) -> ApproxReal:
    """Closed-form value of the rational-coefficient base series.

    At x = 1 the individual pole series diverge; evaluation proceeds
    through regularized endpoint values and is only valid when the
    residue coefficients cancel (sum c_j = 0), checked up front.
    """
    if not spec.pole_offsets:
        raise UsageError("empty pole_offsets")
    x = Fraction(spec.x)
    if not 0 < x <= 1:
        raise DomainError("x must lie in (0, 1]")
    for _, r in spec.pole_offsets:
        if not isinstance(r, int) or r < 0:
            raise UsageError("offsets must be nonnegative integers")
    if x == 1:
        if sum(c for c, _ in spec.pole_offsets) != 0:
            raise DomainError(
                "series diverges at x = 1 without coefficient cancellation")
        cb = EvalContext(ctx.target_digits, ctx.guard_digits, ctx.working_bits + 24)
        parts = [nk.mul(nk.from_fraction(c, cb), _f_r(r, cb), cb)
                 for c, r in spec.pole_offsets]
        return _round_into(nk.sum_many(parts, cb), ctx)
    # closed forms subtract partial sums of matching size, so small x
    # cancels ~(r+2)*log2(1/x) bits; boost accordingly
    max_r = max(r for _, r in spec.pole_offsets)
    extra = 24 + (max_r + 2) * max(0, _ceil_log2_fr(1 / x))
    cb = EvalContext(ctx.target_digits, ctx.guard_digits, ctx.working_bits + extra)
    parts = [nk.mul(nk.from_fraction(c, cb), _t_r(r, x, cb), cb)
             for c, r in spec.pole_offsets]
    return _round_into(nk.sum_many(parts, cb), ctx)


# ---------------------------------------------------------------------------
# The shared series engine

@dataclass(frozen=True)
class _SeriesSpec:
    offsets: tuple[int, ...]
    scale: Fraction
    # components: (sign, x); the x = 1 tail formula below relies on the
    # instantiated patterns keeping |sum_i sign_i x_i^{2n}| <= 1
    components: tuple[tuple[int, Fraction], ...]


def _p_of(spec: _SeriesSpec, n: int) -> Fraction:
    den = 1
    for r in spec.offsets:
        den *= 2 * n + r
    return spec.scale / den


def _direct_tail(spec: _SeriesSpec, m: int) -> Fraction:
    d = len(spec.offsets)
    if any(x == 1 for _, x in spec.components):
        return _Z2_UB * spec.scale * Fraction(2 * m) ** (1 - d) / (2 * (d - 1))
    p_next = _p_of(spec, m + 1)
    tot = Fraction(0)
    for sg, x in spec.components:
        tot += abs(sg) * x ** (2 * m + 2) / (1 - x * x)
    return _Z2_UB * p_next * tot


def _accel_tail(spec: _SeriesSpec, m: int) -> Fraction:
    p_next = _p_of(spec, m + 1)
    tot = Fraction(0)
    for sg, x in spec.components:
        q = x * x / 4
        tot += abs(sg) * q ** (m + 1) / (1 - q)
    return 3 * p_next * tot


def _series_direct(spec: _SeriesSpec, ctx: EvalContext, max_terms: int) -> SeriesResult:
    stop = Fraction(1, 10) ** (ctx.target_digits + ctx.guard_digits + 2)
    terms: list[ApproxReal] = []
    xsq = [(sg, nk.from_fraction(x * x, ctx)) for sg, x in spec.components]
    xpow: list[ApproxReal] = [nk.from_int(1, ctx)] * len(xsq)
    n = 0
    while n < max_terms:
        n += 1
        zp = nk.mul(_zeta2n(n, ctx), nk.from_fraction(_p_of(spec, n), ctx), ctx)
        for i, (sg, x2) in enumerate(xsq):
            xpow[i] = nk.mul(xpow[i], x2, ctx)
            t = zp if x2.magnitude == 1 else nk.mul(zp, xpow[i], ctx)
            terms.append(t if sg > 0 else nk.neg(t))
        if _direct_tail(spec, n) <= stop:
            break
    tail = _direct_tail(spec, n)
    return SeriesResult(nk.sum_many(terms, ctx), n,
                        nk.from_fraction(tail, ctx), "direct")


def _series_accelerated(spec: _SeriesSpec, ctx: EvalContext,
                        max_terms: int) -> SeriesResult:
    wb = ctx.working_bits
    base_parts: list[ApproxReal] = []
    weights = _cover_weights(spec.offsets)
    for sg, x in spec.components:
        bss = BaseSumSpec(tuple((sg * spec.scale * w, r)
                                for w, r in zip(weights, spec.offsets)), x)
        base_parts.append(base_sum(bss, ctx))

    stop = Fraction(1, 2) ** (wb + 2)
    terms: list[ApproxReal] = list(base_parts)
    n = 0
    while True:
        n += 1
        if n > max_terms:
            raise PrecisionError(
                "accelerated remainder needs more terms than max_terms allows")
        factor = _p_of(spec, n) * sum(sg * x ** (2 * n)
                                      for sg, x in spec.components)
        terms.append(nk.mul(_zeta2n_m1(n, ctx),
                            nk.from_fraction(factor, ctx), ctx))
        tail = _accel_tail(spec, n)
        if tail <= stop:
            break
    value = _with_extra_err(nk.sum_many(terms, ctx), tail)
    return SeriesResult(value, n, nk.from_fraction(tail, ctx), "accelerated")


_QUARTET = (0, 1, 2, 3)

_LN2_SPEC = _SeriesSpec((0, 1), Fraction(2), ((1, Fraction(1)), (-1, Fraction(1, 2))))
_W_SPEC = _SeriesSpec(_QUARTET, Fraction(1), ((1, Fraction(1)), (-1, Fraction(1, 2))))
_SUM_A_SPEC = _SeriesSpec(_QUARTET, Fraction(1), ((1, Fraction(1)),))
_SUM_B_SPEC = _SeriesSpec(_QUARTET, Fraction(1), ((1, Fraction(1, 2)),))


def _spec_for(identity: str, m: int | None = None,
              t: Fraction | None = None) -> _SeriesSpec:
    if identity == "ln2":
        return _LN2_SPEC
    if identity == "zeta3":
        return _W_SPEC
    if identity == "sum-a":
        return _SUM_A_SPEC
    if identity == "sum-b":
        return _SUM_B_SPEC
    if identity == "param-sum":
        if t is None:
            raise UsageError("param-sum needs t")
        return _SeriesSpec(_QUARTET, Fraction(4), ((1, Fraction(t)),))
    if identity == "general":
        if m is None:
            raise UsageError("general needs m")
        return _SeriesSpec(tuple(range(2 * m + 2)), Fraction(2),
                           ((1, Fraction(1)), (-1, Fraction(1, 2))))
    raise UsageError(f"no series form for identity {identity!r}")


def series_for(identity: str, ctx: EvalContext, mode: str = "accelerated",
               max_terms: int = 10 ** 6, m: int | None = None,
               t: Fraction | None = None) -> SeriesResult:
    """Summed series for one identity; the zeta-series family only."""
    if mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}")
    if not isinstance(max_terms, int) or isinstance(max_terms, bool) or max_terms < 1:
        raise UsageError("max_terms must be a positive integer")
    spec = _spec_for(identity, m=m, t=t)
    if mode == "direct":
        return _series_direct(spec, ctx, max_terms)
    return _series_accelerated(spec, ctx, max_terms)


# ---------------------------------------------------------------------------
# Report assembly

def _report(name: str, params, lhs: ApproxReal, rhs: ApproxReal,
            ctx: EvalContext, tolerance: Fraction | None = None) -> IdentityReport:
    resid = nk.abs_(nk.sub(lhs, rhs, ctx))
    tol = Fraction(1, 10 ** ctx.target_digits) if tolerance is None else Fraction(tolerance)
    up = nk.upper_bound(resid)
    digits = ctx.target_digits if up == 0 else nk.floor_neg_log10(up)
    return IdentityReport(name, tuple(params), lhs, rhs, resid, digits,
                          nk.from_fraction(tol, ctx), up <= tol)


def _pi_pow(k: int, ctx: EvalContext) -> ApproxReal:
    return nk.pow_int(nk.const_pi(ctx), k, ctx)


def _ln_of(q: Fraction | int, ctx: EvalContext) -> ApproxReal:
    return nk.eval_elementary("ln", nk.from_fraction(Fraction(q), ctx), ctx)


# ---------------------------------------------------------------------------
# Identity evaluators

def eval_ln2(mode: str, ctx: EvalContext, max_terms: int = 10 ** 6) -> SeriesResult:
    """The ln 2 series: sum_n (1 - 4^{-n}) zeta(2n) / (n(2n+1))."""
    return series_for("ln2", ctx, mode, max_terms)


def ln2_report(mode: str, ctx: EvalContext, max_terms: int = 10 ** 6,
               _series: SeriesResult | None = None) -> IdentityReport:
    sr = _series if _series is not None else eval_ln2(mode, ctx, max_terms)
    # independent oracle: ln 2 = 2 atanh(1/3)
    rhs = nk.mul(nk.from_int(2, ctx), nk.eval_elementary(
        "atanh", nk.from_fraction(Fraction(1, 3), ctx), ctx), ctx)
    lhs = _with_extra_err(sr.value, nk.upper_bound(sr.tail_bound))
    return _report("ln2", [], lhs, rhs, ctx)


def eval_zeta3(mode: str, ctx: EvalContext, max_terms: int = 10 ** 6,
               _series: SeriesResult | None = None) -> IdentityReport:
    """Apery's constant from the quartic-coefficient series:
    zeta(3) = (pi^2/9) ln 4 - (8 pi^2/3) W with W the quarter-series."""
    sr = _series if _series is not None else series_for("zeta3", ctx, mode, max_terms)
    pi2 = _pi_pow(2, ctx)
    w = _with_extra_err(sr.value, nk.upper_bound(sr.tail_bound))
    lhs = nk.sub(
        nk.div(nk.mul(pi2, _ln_of(4, ctx), ctx), nk.from_int(9, ctx), ctx),
        nk.mul(nk.div(nk.mul(nk.from_int(8, ctx), pi2, ctx),
                      nk.from_int(3, ctx), ctx), w, ctx), ctx)
    rhs = zeta_ref(3, ctx)
    return _report("zeta3", [], lhs, rhs, ctx)


def eval_sum_a(ctx: EvalContext, mode: str = "accelerated",
               max_terms: int = 10 ** 6,
               _series: SeriesResult | None = None) -> IdentityReport:
    """sum_k zeta(2k)/(2k(2k+1)(2k+2)(2k+3)) against its closed form."""
    sr = _series if _series is not None else series_for("sum-a", ctx, mode, max_terms)
    lhs = _with_extra_err(sr.value, nk.upper_bound(sr.tail_bound))
    ln2pi = nk.eval_elementary(
        "ln", nk.mul(nk.from_int(2, ctx), nk.const_pi(ctx), ctx), ctx)
    rhs = nk.sum_many([
        nk.div(zeta_ref(3, ctx), nk.mul(nk.from_int(8, ctx), _pi_pow(2, ctx), ctx), ctx),
        nk.div(ln2pi, nk.from_int(12, ctx), ctx),
        nk.from_fraction(Fraction(-11, 72), ctx),
    ], ctx)
    return _report("sum-a", [], lhs, rhs, ctx)


def eval_sum_b(ctx: EvalContext, mode: str = "accelerated",
               max_terms: int = 10 ** 6,
               _series: SeriesResult | None = None) -> IdentityReport:
    """The Wilton companion: the same series with weight 2^{-2k}."""
    sr = _series if _series is not None else series_for("sum-b", ctx, mode, max_terms)
    lhs = _with_extra_err(sr.value, nk.upper_bound(sr.tail_bound))
    lnpi = nk.eval_elementary("ln", nk.const_pi(ctx), ctx)
    rhs = nk.sum_many([
        nk.div(zeta_ref(3, ctx), nk.mul(nk.from_int(2, ctx), _pi_pow(2, ctx), ctx), ctx),
        nk.div(lnpi, nk.from_int(12, ctx), ctx),
        nk.from_fraction(Fraction(-11, 72), ctx),
    ], ctx)
    return _report("sum-b", [], lhs, rhs, ctx)


def eval_param_sum(t, ctx: EvalContext, mode: str = "accelerated",
                   max_terms: int = 10 ** 6,
                   _series: SeriesResult | None = None) -> IdentityReport:
    """sum_k zeta(2k) t^{2k}/(k(k+1)(2k+1)(2k+3)) against the
    Hurwitz-derivative closed form."""
    t = Fraction(t)
    if not 0 < t < 1:
        raise DomainError("t must lie strictly inside (0, 1)")
    sr = _series if _series is not None else series_for(
        "param-sum", ctx, mode, max_terms, t=t)
    lhs = _with_extra_err(sr.value, nk.upper_bound(sr.tail_bound))
    bracket = nk.sub(hurwitz_ds_ref(-3, 1 + t, ctx),
                     hurwitz_ds_ref(-3, 1 - t, ctx), ctx)
    t_inv = nk.from_fraction(t, ctx)
    rhs = nk.sum_many([
        nk.mul(nk.div(zeta_ref(3, ctx),
                      nk.mul(nk.from_int(2, ctx), _pi_pow(2, ctx), ctx), ctx),
               nk.pow_int(t_inv, -2, ctx), ctx),
        nk.div(nk.eval_elementary(
            "ln", nk.mul(nk.from_int(2, ctx), nk.const_pi(ctx), ctx), ctx),
            nk.from_int(3, ctx), ctx),
        nk.from_fraction(Fraction(-11, 18), ctx),
        nk.div(nk.mul(nk.pow_int(t_inv, -3, ctx), bracket, ctx),
               nk.from_int(3, ctx), ctx),
    ], ctx)
    return _report("param-sum", [("t", t)], lhs, rhs, ctx)


def eval_tyagi_holm(s, ctx: EvalContext) -> IdentityReport:
    """The Gamma-weighted odd-zeta representation on s in (1, 2).

    lhs is zeta(s)(1 - 2^{1-s}) / (pi^{s-1} sin(pi s/2)).  rhs sums
    (2 - 2^{s-2n}) Gamma(2n-s+1)/Gamma(2n+2) zeta(2n+1-s) with the
    zeta(.) - 1 split; the base part collapses through
    sum_k Gamma(k-s) x^k / k! = Gamma(-s)(1-x)^s at x = 1 and 1/2
    (odd-k extraction) to Gamma(2-s)/(s-1) [(3^s-2^s-1)/s - 2^s + 2].
    """
    s = Fraction(s)
    if not 1 < s < 2:
        raise DomainError("s must lie strictly inside (1, 2)")
    wb = ctx.working_bits

    z = zeta_ref(s, ctx)
    two_pow = _rpow(Fraction(2), 1 - s, ctx)
    num = nk.mul(z, nk.sub(nk.from_int(1, ctx), two_pow, ctx), ctx)
    pi = nk.const_pi(ctx)
    pi_pow = nk.eval_elementary("exp", nk.mul(
        nk.from_fraction(s - 1, ctx),
        nk.eval_elementary("ln", pi, ctx), ctx), ctx)
    sin_term = nk.eval_elementary("sin", nk.mul(
        pi, nk.from_fraction(s / 2, ctx), ctx), ctx)
    lhs = nk.div(num, nk.mul(pi_pow, sin_term, ctx), ctx)

    three_s = _rpow(Fraction(3), s, ctx)
    two_s = _rpow(Fraction(2), s, ctx)
    bracket = nk.sum_many([
        nk.div(nk.sub(nk.sub(three_s, two_s, ctx), nk.from_int(1, ctx), ctx),
               nk.from_fraction(s, ctx), ctx),
        nk.neg(two_s),
        nk.from_int(2, ctx),
    ], ctx)
    gamma2ms = nk.gamma_small(nk.from_fraction(2 - s, ctx), ctx)
    base = nk.mul(nk.div(gamma2ms, nk.from_fraction(s - 1, ctx), ctx), bracket, ctx)

    terms = [base]
    g = nk.div(nk.gamma_small(nk.from_fraction(3 - s, ctx), ctx),
               nk.from_int(6, ctx), ctx)
    stop = Fraction(1, 2) ** (wb + 2)
    two_s_shift = two_s  # 2^{s-2n}, divided by 4 each step
    quarter = nk.from_fraction(Fraction(1, 4), ctx)
    n = 0
    while True:
        n += 1
        two_s_shift = nk.mul(two_s_shift, quarter, ctx)
        zm1 = nk.sub(zeta_ref(2 * n + 1 - s, ctx), nk.from_int(1, ctx), ctx)
        w = nk.sub(nk.from_int(2, ctx), two_s_shift, ctx)
        terms.append(nk.mul(nk.mul(w, g, ctx), zm1, ctx))
        g = nk.mul(g, nk.from_fraction(
            (2 * n + 1 - s) * (2 * n + 2 - s) / ((2 * n + 2) * (2 * n + 3)), ctx), ctx)
        # remaining terms: each zeta(2k+1-s) - 1 <= 3*2^{s-1} 4^{-k}
        tail = 4 * nk.upper_bound(g) * Fraction(1, 4) ** n
        if tail <= stop:
            break
    rhs = _with_extra_err(nk.sum_many(terms, ctx), tail)
    return _report("tyagi-holm", [("s", s)], lhs, rhs, ctx)


def eval_general(m: int, ctx: EvalContext, mode: str = "accelerated",
                 max_terms: int = 10 ** 6,
                 _series: SeriesResult | None = None) -> IdentityReport:
    """(1 - 2^{-2m}) zeta(2m+1) against the order-m Dancs-He assembly."""
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise UsageError("m must be a positive integer")
    sr = _series if _series is not None else series_for(
        "general", ctx, mode, max_terms, m=m)
    g_val = _with_extra_err(sr.value, nk.upper_bound(sr.tail_bound))
    lhs = nk.mul(nk.from_fraction(1 - Fraction(1, 4 ** m), ctx),
                 zeta_ref(2 * m + 1, ctx), ctx)
    sgn_m = (-1) ** m
    parts = []
    for j in range(1, m):
        rat = Fraction((-1) ** j, factorial(2 * j + 1)) * (Fraction(1, 4 ** (m - j)) - 1)
        parts.append(nk.mul(nk.from_fraction(rat, ctx),
                            nk.mul(_pi_pow(2 * j, ctx),
                                   zeta_ref(2 * m - 2 * j + 1, ctx), ctx), ctx))
    pi_2m = _pi_pow(2 * m, ctx)
    parts.append(nk.mul(nk.from_fraction(Fraction(-sgn_m, factorial(2 * m + 1)), ctx),
                        nk.mul(pi_2m, _ln_of(2, ctx), ctx), ctx))
    parts.append(nk.mul(nk.from_fraction(Fraction(sgn_m), ctx),
                        nk.mul(pi_2m, g_val, ctx), ctx))
    rhs = nk.sum_many(parts, ctx)
    return _report("general", [("m", m)], lhs, rhs, ctx)


def milgram_coeff_maps(m: int) -> tuple[dict, dict]:
    """Exact coefficient dictionaries of both routes to
    (1 - 2^{-2m}) zeta(2m+1): the order-m assembly as stated, and the
    Gamma-free rearrangement multiplied back by (1 - 2^{-2m}).

    Keys: "ln2" (coefficient of pi^{2m} ln 2), "base" (coefficient of
    pi^{2m} G_m), ("zeta", j) (coefficient of pi^{2j} zeta(2m-2j+1)).
    """
    if m < 1:
        raise UsageError("m must be >= 1")
    sgn_m = Fraction((-1) ** m)
    general = {"ln2": -sgn_m / factorial(2 * m + 1), "base": sgn_m}
    for j in range(1, m):
        general[("zeta", j)] = Fraction((-1) ** j, factorial(2 * j + 1)) \
            * (Fraction(1, 4 ** (m - j)) - 1)
    scale = 1 - Fraction(1, 4 ** m)
    milgram = {
        "ln2": scale * (sgn_m / scale) * Fraction(-1, factorial(2 * m + 1)),
        "base": scale * (sgn_m / scale),
    }
    for n in range(1, m):
        milgram[("zeta", n)] = scale * (Fraction(1, 4 ** (m - n)) - 1) \
            * Fraction((-1) ** n, factorial(2 * n + 1)) / scale
    return general, milgram


def eval_milgram(m: int, ctx: EvalContext, mode: str = "accelerated",
                 max_terms: int = 10 ** 6,
                 _series: SeriesResult | None = None) -> IdentityReport:
    """zeta(2m+1) by the Gamma-free rearrangement; also certifies the
    exact coefficient equivalence with the order-m assembly."""
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise UsageError("m must be a positive integer")
    gmap, mmap = milgram_coeff_maps(m)
    if gmap != mmap:
        raise PrecisionError("coefficient maps disagree; formula transcription bug")
    sr = _series if _series is not None else series_for(
        "general", ctx, mode, max_terms, m=m)
    g_val = _with_extra_err(sr.value, nk.upper_bound(sr.tail_bound))
    lhs = zeta_ref(2 * m + 1, ctx)
    scale = 1 - Fraction(1, 4 ** m)
    sgn_m = (-1) ** m
    pi_2m = _pi_pow(2 * m, ctx)
    front = nk.mul(nk.from_fraction(Fraction(sgn_m) / scale, ctx), pi_2m, ctx)
    inner = nk.add(nk.mul(nk.from_fraction(Fraction(-1, factorial(2 * m + 1)), ctx),
                          _ln_of(2, ctx), ctx), g_val, ctx)
    parts = [nk.mul(front, inner, ctx)]
    for n in range(1, m):
        rat = (Fraction(1, 4 ** (m - n)) - 1) * Fraction((-1) ** n,
                                                         factorial(2 * n + 1)) / scale
        parts.append(nk.mul(nk.from_fraction(rat, ctx),
                            nk.mul(_pi_pow(2 * n, ctx),
                                   zeta_ref(2 * m - 2 * n + 1, ctx), ctx), ctx))
    rhs = nk.sum_many(parts, ctx)
    return _report("milgram", [("m", m)], lhs, rhs, ctx)
