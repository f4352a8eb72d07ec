"""Zeta machinery: exact even-argument coefficients via Euler's formula,
and an Euler-Maclaurin reference evaluator for zeta(s), the Hurwitz
zeta(s, a), and its s-derivative, valid off the pole including s < 0.

The Euler-Maclaurin expansion used here is

  zeta(s,a) = sum_{k<N} (k+a)^-s + U^(1-s)/(s-1) + U^-s/2
            + sum_{j=1..M} B_{2j}/(2j)! (s)_{2j-1} U^(-s-2j+1),   U = N+a,

with the truncation remainder bounded through the first omitted
correction term.  All remainder bounds are computed in exact rational
arithmetic (over-approximating U^x by relaxing x to an integer), then
folded into the ApproxReal error exponent, so returned bounds stay
sound end to end.  The s-derivative differentiates the expansion
analytically; nothing in the product path uses finite differences.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from . import numkernel as nk
from .numkernel import (
    ApproxReal,
    DomainError,
    EvalContext,
    PoleError,
    PrecisionError,
    UsageError,
    _ceil_log2_fr,
)
from .ratseq import bernoulli, factorial

__all__ = [
    "EvenZetaCoeff",
    "EulerMaclaurinPlan",
    "zeta_even_coeff",
    "default_plan",
    "remainder_bound",
    "zeta_ref",
    "hurwitz_ref",
    "hurwitz_ds_ref",
]


@dataclass(frozen=True)
class EvenZetaCoeff:
    """Rational c with zeta(2n) = c pi^(2n)."""

    n: int
    coeff: Fraction


@dataclass(frozen=True)
class EulerMaclaurinPlan:
    shift_N: int
    correction_M: int


def zeta_even_coeff(n: int) -> EvenZetaCoeff:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise UsageError("n must be a positive integer")
    c = Fraction((-1) ** (n - 1) * 2 ** (2 * n - 1), factorial(2 * n)) * bernoulli(2 * n)
    return EvenZetaCoeff(n, c)


def _to_fr(x, name: str) -> Fraction:
    # floats are dyadic rationals, so the conversion is exact
    if isinstance(x, bool) or not isinstance(x, (int, float, Fraction)):
        raise UsageError(f"{name} must be an int, float or Fraction")
    return Fraction(x)


# ---------------------------------------------------------------------------
# Remainder bounds and plan selection

_M_CAP = 600


def remainder_bound(s, a, plan: EulerMaclaurinPlan, deriv: bool = False) -> Fraction:
    """Exact rational over-estimate of the Euler-Maclaurin truncation
    remainder for the given plan; the derivative variant carries an
    extra ln U factor pattern.

    Raises PrecisionError when the first-omitted-term bound does not
    apply (needs s + 2*correction_M + 1 > 0).
    """
    s_fr, a_fr = _to_fr(s, "s"), _to_fr(a, "a")
    N, M = plan.shift_N, plan.correction_M
    t = s_fr + 2 * M + 1
    if t <= 0:
        raise PrecisionError("correction order too small for this s")
    U = N + a_fr
    # U^(-t) <= U^(-floor(t)) since U > 1 and -t <= -floor(t)
    upow = Fraction(1) / U ** math.floor(t)
    c2 = 2 * abs(bernoulli(2 * M + 2)) / factorial(2 * M + 2)
    P, D = Fraction(1), Fraction(0)
    for k in range(2 * M + 2):
        P, D = P * (s_fr + k), D * (s_fr + k) + P
    if not deriv:
        return c2 * abs(P) * upow / t
    # ln U < log2 U <= ceil(log2 U); 6932/10000 > ln 2
    ln_u = Fraction(6932, 10000) * max(1, _ceil_log2_fr(U))
    return c2 * upow * (abs(D) / t + abs(P) * (ln_u / t + 1 / t ** 2))


def default_plan(s, a, ctx: EvalContext, deriv: bool = False) -> EulerMaclaurinPlan:
    """shift_N from the working-precision heuristic, correction_M grown
    until the first omitted term drops below the rounding floor."""
    wb = ctx.working_bits
    N = max(10, -(-7 * wb // 10))
    M = wb // 4 + 4
    target = Fraction(1, 2) ** (wb + 4)
    s_fr = _to_fr(s, "s")
    while M <= _M_CAP:
        if s_fr + 2 * M + 1 > 0:
            if remainder_bound(s, a, EulerMaclaurinPlan(N, M), deriv) <= target:
                return EulerMaclaurinPlan(N, M)
        M += max(2, M // 4)
    raise PrecisionError("correction order cap reached for the requested precision")


# ---------------------------------------------------------------------------
# Core evaluator

def _round_into(a: ApproxReal, ctx: EvalContext) -> ApproxReal:
    if a.precision_bits == ctx.working_bits:
        return a
    return nk.add(a, nk.from_int(0, ctx), ctx)


def _rpow(x_fr: Fraction, e_fr: Fraction, ctx: EvalContext) -> ApproxReal:
    """x^e for exact rational x > 0; integer exponents avoid the exp/ln
    round trip."""
    if e_fr.denominator == 1:
        return nk.pow_int(nk.from_fraction(x_fr, ctx), int(e_fr), ctx)
    ln_x = nk.eval_elementary("ln", nk.from_fraction(x_fr, ctx), ctx)
    return nk.eval_elementary("exp", nk.mul(nk.from_fraction(e_fr, ctx), ln_x, ctx), ctx)


def _with_extra_err(a: ApproxReal, extra: Fraction) -> ApproxReal:
    if extra == 0:
        return a
    e = _ceil_log2_fr(extra)
    return ApproxReal(a.magnitude, a.precision_bits, nk._eadd(a.err_exp, e))


def _em_eval(s_fr: Fraction, a_fr: Fraction, ctx: EvalContext, deriv: bool,
             plan: EulerMaclaurinPlan | None) -> ApproxReal:
    if plan is None:
        plan = default_plan(s_fr, a_fr, ctx, deriv)
    N, M = plan.shift_N, plan.correction_M
    rem = remainder_bound(s_fr, a_fr, plan, deriv)
    U_fr = N + a_fr

    # Working precision boost: for s < 0 the partial sum grows like
    # U^(1-s) and cancels against the pole term, so the relative
    # rounding floor must sit below the target on that larger scale.
    growth = Fraction(1) + max(Fraction(0), -s_fr)
    extra = 16 + int(growth * _ceil_log2_fr(U_fr)) + 1
    cb = EvalContext(ctx.target_digits, ctx.guard_digits, ctx.working_bits + extra)

    terms: list[ApproxReal] = []
    for k in range(N):
        x_fr = k + a_fr
        term = _rpow(x_fr, -s_fr, cb)
        if deriv:
            term = nk.neg(nk.mul(term, nk.eval_elementary(
                "ln", nk.from_fraction(x_fr, cb), cb), cb))
        terms.append(term)

    ln_u = nk.eval_elementary("ln", nk.from_fraction(U_fr, cb), cb)
    u_1ms = _rpow(U_fr, 1 - s_fr, cb)
    u_ms = _rpow(U_fr, -s_fr, cb)
    sm1 = nk.from_fraction(s_fr - 1, cb)
    if not deriv:
        terms.append(nk.div(u_1ms, sm1, cb))
        terms.append(nk.div(u_ms, nk.from_int(2, cb), cb))
    else:
        terms.append(nk.neg(nk.div(nk.mul(u_1ms, ln_u, cb), sm1, cb)))
        terms.append(nk.neg(nk.div(u_1ms, nk.mul(sm1, sm1, cb), cb)))
        terms.append(nk.neg(nk.div(nk.mul(ln_u, u_ms, cb),
                                   nk.from_int(2, cb), cb)))

    # correction terms; Pochhammer (s)_{2j-1} and its s-derivative kept
    # as exact rationals throughout
    u_m2 = nk.pow_int(nk.from_fraction(U_fr, cb), -2, cb)
    upow = nk.mul(u_1ms, u_m2, cb)  # U^(-s-1)
    P, D = s_fr, Fraction(1)
    for j in range(1, M + 1):
        b = bernoulli(2 * j) / factorial(2 * j)
        if not deriv:
            term = nk.mul(nk.from_fraction(b * P, cb), upow, cb)
        else:
            bracket = nk.sub(nk.from_fraction(D, cb),
                             nk.mul(nk.from_fraction(P, cb), ln_u, cb), cb)
            term = nk.mul(nk.from_fraction(b, cb), nk.mul(upow, bracket, cb), cb)
        terms.append(term)
        if j < M:
            upow = nk.mul(upow, u_m2, cb)
            for k in (2 * j - 1, 2 * j):
                P, D = P * (s_fr + k), D * (s_fr + k) + P

    total = nk.sum_many(terms, cb)
    return _round_into(_with_extra_err(total, rem), ctx)


# ---------------------------------------------------------------------------
# Public evaluators

_zeta_cache: dict[tuple[Fraction, int, bool], ApproxReal] = {}
_zeta_lock = threading.Lock()

def _direct_terms(s_fr: Fraction, wb: int) -> int | None:
    """Term count for the direct path, or None when impractical."""
    if s_fr < 2:
        return None
    expo = (wb + 8) / float(s_fr - 1)
    if expo > 12:
        return None
    return max(2, math.ceil(2.0 ** expo))


def _zeta_direct(s_fr: Fraction, ctx: EvalContext) -> ApproxReal:
    wb = ctx.working_bits
    N = _direct_terms(s_fr, wb)
    if N is None:
        raise PrecisionError("direct summation impractical for this s and precision")
    cb = EvalContext(ctx.target_digits, ctx.guard_digits, wb + 16)
    total = nk.sum_many(
        [nk.from_int(1, cb)] + [_rpow(Fraction(k), -s_fr, cb) for k in range(2, N + 1)],
        cb)
    # sum_{k>N} k^-s <= int_N^inf x^-s dx = N^(1-s)/(s-1)
    tail_ap = _rpow(Fraction(N), 1 - s_fr, _CTX64)
    tail = nk.upper_bound(tail_ap) / (s_fr - 1)
    return _round_into(_with_extra_err(total, tail), ctx)


_CTX64 = nk.make_context(1, 1)


def zeta_ref(s, ctx: EvalContext, *, method: str = "auto",
             plan: EulerMaclaurinPlan | None = None) -> ApproxReal:
    """zeta(s) for real s != 1 with a sound error bound.

    method "direct" sums the defining series with an integral tail
    bound (s >= 2 and large enough to be practical); "em" runs the
    Euler-Maclaurin continuation; "auto" picks direct when it is
    clearly cheaper.  Both paths agree within bounds by construction.
    """
    if method not in ("auto", "direct", "em"):
        raise UsageError(f"unknown method {method!r}")
    s_fr = _to_fr(s, "s")
    if s_fr == 1:
        raise PoleError("zeta has a simple pole at s = 1")
    wb = ctx.working_bits
    if method == "direct":
        use_direct = True
    elif method == "em":
        use_direct = False
    else:
        n = _direct_terms(s_fr, wb)
        use_direct = n is not None and n <= 1024
    key = (s_fr, wb, use_direct)
    if plan is None:
        with _zeta_lock:
            hit = _zeta_cache.get(key)
        if hit is not None:
            return hit
    if use_direct:
        out = _zeta_direct(s_fr, ctx)
    else:
        out = _em_eval(s_fr, Fraction(1), ctx, False, plan)
    if plan is None:
        with _zeta_lock:
            _zeta_cache[key] = out
    return out


def hurwitz_ref(s, a, ctx: EvalContext, *,
                plan: EulerMaclaurinPlan | None = None) -> ApproxReal:
    """Hurwitz zeta(s, a) for real s != 1, a > 0."""
    s_fr, a_fr = _to_fr(s, "s"), _to_fr(a, "a")
    if s_fr == 1:
        raise PoleError("zeta(s, a) has a simple pole at s = 1")
    if a_fr <= 0:
        raise DomainError("a must be positive")
    return _em_eval(s_fr, a_fr, ctx, False, plan)


def hurwitz_ds_ref(s, a, ctx: EvalContext, *,
                   plan: EulerMaclaurinPlan | None = None) -> ApproxReal:
    """d/ds zeta(s, a), by analytic differentiation of the expansion."""
    s_fr, a_fr = _to_fr(s, "s"), _to_fr(a, "a")
    if s_fr == 1:
        raise PoleError("zeta(s, a) has a simple pole at s = 1")
    if a_fr <= 0:
        raise DomainError("a must be positive")
    return _em_eval(s_fr, a_fr, ctx, True, plan)
