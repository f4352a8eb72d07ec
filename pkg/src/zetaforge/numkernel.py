"""Precision-tracked arbitrary-precision real arithmetic.

Every real quantity in this package is an ApproxReal: an MPFR magnitude
(via gmpy2) plus a sound absolute error bound 2^err_exp.  Operations
round to the working precision of an EvalContext and propagate error
bounds that over-approximate accumulated rounding plus input error, so
a reported value v with bound b certifies that the true value lies in
[v - b, v + b].  err_exp = None marks an exactly represented value.

The contract is soundly-bounded, not correctly-rounded: magnitudes are
round-to-nearest and the half-ulp is absorbed into err_exp.  Decimal
rendering truncates toward zero so that certified digit prefixes are
stable under precision refinement (truncation cells nest; rounding
cells do not).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr, mpq

__all__ = [
    "ZetaforgeError",
    "UsageError",
    "DomainError",
    "PoleError",
    "PrecisionError",
    "ExactRational",
    "EvalContext",
    "ApproxReal",
    "make_context",
    "from_int",
    "from_fraction",
    "const_pi",
    "add",
    "sub",
    "sum_many",
    "mul",
    "div",
    "neg",
    "abs_",
    "pow_int",
    "eval_elementary",
    "gamma_small",
    "magnitude_fraction",
    "error_bound",
    "upper_bound",
    "agrees_within_error",
    "to_decimal",
    "certified_places",
    "floor_neg_log10",
    "sci_upper",
]


class ZetaforgeError(Exception):
    """Base class for all package errors."""


class UsageError(ZetaforgeError):
    """Invalid request parameters (CLI exit code 2)."""


class DomainError(ZetaforgeError):
    """Argument outside a function's mathematical domain (CLI exit code 3)."""


class PoleError(DomainError):
    """Evaluation exactly at a pole."""


class PrecisionError(ZetaforgeError):
    """Requested accuracy is unreachable with the given budget."""


# ExactRational contract: reduced, denominator > 0, zero is 0/1.
# fractions.Fraction guarantees all three.
ExactRational = Fraction


@dataclass(frozen=True)
class EvalContext:
    """Precision policy: decimal target, guard digits, derived binary precision."""

    target_digits: int
    guard_digits: int
    working_bits: int


@dataclass(frozen=True)
class ApproxReal:
    """Arbitrary-precision value with sound absolute error bound 2^err_exp.

    err_exp None means the magnitude is exact.
    """

    magnitude: mpfr
    precision_bits: int
    err_exp: int | None


def make_context(target_digits: int, guard_digits: int = 10) -> EvalContext:
    if not isinstance(target_digits, int) or isinstance(target_digits, bool):
        raise UsageError("target_digits must be an integer")
    if not isinstance(guard_digits, int) or isinstance(guard_digits, bool):
        raise UsageError("guard_digits must be an integer")
    if target_digits < 1:
        raise UsageError("target_digits must be >= 1")
    if guard_digits < 0:
        raise UsageError("guard_digits must be >= 0")
    # bit_length of 10^d equals ceil(d*log2(10)) because 10^d is never a
    # power of two.
    bits = max(64, (10 ** (target_digits + guard_digits)).bit_length())
    return EvalContext(target_digits, guard_digits, bits)


# ---------------------------------------------------------------------------
# MPFR plumbing

_local = threading.local()


def _mpfr_ctx(bits: int) -> gmpy2.context:
    # Contexts are cached per thread so the inexact-flag probe below is
    # race-free while operations stay pure and reentrant.
    cache = getattr(_local, "ctxs", None)
    if cache is None:
        cache = _local.ctxs = {}
    c = cache.get(bits)
    if c is None:
        c = cache[bits] = gmpy2.context(precision=bits)
    return c


def _op(bits: int, name: str, *args) -> tuple[mpfr, bool]:
    """Run one context operation; return (result, inexact)."""
    c = _mpfr_ctx(bits)
    c.clear_flags()
    r = getattr(c, name)(*args)
    if c.invalid or c.overflow or c.underflow or c.erange:
        raise PrecisionError(f"mpfr {name} raised {'invalid' if c.invalid else 'range'} flag")
    return r, bool(c.inexact)


def _mag_exp(r: mpfr) -> int | None:
    """Exponent E with 2^(E-1) <= |r| < 2^E, or None for zero."""
    if r == 0:
        return None
    return gmpy2.get_exp(r)


def _half_ulp(r: mpfr, bits: int) -> int | None:
    e = _mag_exp(r)
    if e is None:
        # A nonzero op rounding to exact zero would need an underflow,
        # which _op traps; inexact zero cannot reach here.
        raise PrecisionError("inexact zero result")
    return e - bits - 1


def _eadd(*exps: int | None) -> int | None:
    """Exponent of a sound bound for a sum of bounds 2^e_i (None = 0).

    Exact ceiling of the sum, so a dominant bound is inflated by at
    most one; a fixed per-term padding would compound over long
    accumulation chains.
    """
    live = [e for e in exps if e is not None]
    if not live:
        return None
    lo = min(live)
    s = 0
    for e in live:
        s += 1 << (e - lo)
    return lo + s.bit_length() - (1 if s & (s - 1) == 0 else 0)


def _fr(x: mpfr) -> Fraction:
    num, den = x.as_integer_ratio()
    return Fraction(int(num), int(den))


def _ceil_log2_fr(fr: Fraction) -> int:
    """Smallest integer e with fr <= 2^e, for fr > 0."""
    if fr <= 0:
        raise ValueError("positive value required")
    e = fr.numerator.bit_length() - fr.denominator.bit_length()
    if Fraction(2) ** e < fr:
        e += 1
    return e


def magnitude_fraction(a: ApproxReal) -> Fraction:
    return _fr(a.magnitude)


def error_bound(a: ApproxReal) -> Fraction:
    if a.err_exp is None:
        return Fraction(0)
    return Fraction(2) ** a.err_exp


def upper_bound(a: ApproxReal) -> Fraction:
    """Sound upper bound on |true value|."""
    return abs(_fr(a.magnitude)) + error_bound(a)


def agrees_within_error(a: ApproxReal, b: ApproxReal) -> bool:
    """Equal-within-error: |a - b| <= 2^err_exp(a) + 2^err_exp(b)."""
    return abs(_fr(a.magnitude) - _fr(b.magnitude)) <= error_bound(a) + error_bound(b)


# ---------------------------------------------------------------------------
# Constructors

def from_int(n: int, ctx: EvalContext) -> ApproxReal:
    bits = ctx.working_bits
    r = mpfr(n, bits)
    err = None if mpq(r) == n else _half_ulp(r, bits)
    return ApproxReal(r, bits, err)


def from_fraction(q: Fraction | int, ctx: EvalContext) -> ApproxReal:
    """Round an exact rational into the context, tracking the half-ulp."""
    if isinstance(q, int):
        return from_int(q, ctx)
    bits = ctx.working_bits
    v = mpq(q.numerator, q.denominator)
    r = mpfr(v, bits)
    err = None if mpq(r) == v else _half_ulp(r, bits)
    return ApproxReal(r, bits, err)


def const_pi(ctx: EvalContext) -> ApproxReal:
    bits = ctx.working_bits
    r, _ = _op(bits, "const_pi")
    # pi rounds to a half-ulp of 2^(2 - bits - 1), within the contract
    # err_exp <= -working_bits + 2
    return ApproxReal(r, bits, _half_ulp(r, bits))


# ---------------------------------------------------------------------------
# Arithmetic

def add(a: ApproxReal, b: ApproxReal, ctx: EvalContext) -> ApproxReal:
    bits = ctx.working_bits
    r, inex = _op(bits, "add", a.magnitude, b.magnitude)
    hu = _half_ulp(r, bits) if inex else None
    return ApproxReal(r, bits, _eadd(a.err_exp, b.err_exp, hu))


def sub(a: ApproxReal, b: ApproxReal, ctx: EvalContext) -> ApproxReal:
    bits = ctx.working_bits
    r, inex = _op(bits, "sub", a.magnitude, b.magnitude)
    hu = _half_ulp(r, bits) if inex else None
    return ApproxReal(r, bits, _eadd(a.err_exp, b.err_exp, hu))


def neg(a: ApproxReal) -> ApproxReal:
    # via a context at the operand's own precision: exact, no rounding
    # (bare -mpfr would round through the 53-bit default context)
    r, _ = _op(a.precision_bits, "minus", a.magnitude)
    return ApproxReal(r, a.precision_bits, a.err_exp)


def abs_(a: ApproxReal) -> ApproxReal:
    r, _ = _op(a.precision_bits, "abs", a.magnitude)
    return ApproxReal(r, a.precision_bits, a.err_exp)


def mul(a: ApproxReal, b: ApproxReal, ctx: EvalContext) -> ApproxReal:
    bits = ctx.working_bits
    r, inex = _op(bits, "mul", a.magnitude, b.magnitude)
    hu = _half_ulp(r, bits) if inex else None
    ea, eb = a.err_exp, b.err_exp
    Ea, Eb = _mag_exp(a.magnitude), _mag_exp(b.magnitude)
    # |ab - (a~)(b~)| <= |a~| 2^eb + |b~| 2^ea + 2^(ea+eb)
    cands: list[int | None] = [hu]
    if eb is not None and Ea is not None:
        cands.append(Ea + eb)
    if ea is not None and Eb is not None:
        cands.append(Eb + ea)
    if ea is not None and eb is not None:
        cands.append(ea + eb)
    return ApproxReal(r, bits, _eadd(*cands))


def div(a: ApproxReal, b: ApproxReal, ctx: EvalContext) -> ApproxReal:
    bits = ctx.working_bits
    Eb = _mag_exp(b.magnitude)
    if Eb is None:
        if b.err_exp is None:
            raise DomainError("division by exact zero")
        raise PrecisionError("divisor not bounded away from zero")
    eb = b.err_exp
    if eb is not None and eb > Eb - 3:
        raise PrecisionError("divisor not bounded away from zero")
    r, inex = _op(bits, "div", a.magnitude, b.magnitude)
    hu = _half_ulp(r, bits) if inex else None
    ea = a.err_exp
    Ea = _mag_exp(a.magnitude)
    # |a/b - a~/b~| <= (2^ea |b~| + |a~| 2^eb) / (|b| |b~|), |b| >= 2^(Eb-2)
    cands: list[int | None] = [hu]
    if ea is not None:
        cands.append(ea - Eb + 3)
    if eb is not None and Ea is not None:
        cands.append(Ea + eb - 2 * Eb + 3)
    return ApproxReal(r, bits, _eadd(*cands))


def sum_many(items, ctx: EvalContext) -> ApproxReal:
    """Sum a sequence of ApproxReals with one error-accumulation step.

    Chained add() calls ceil the bound to a power of two at every step,
    which can inflate a long accumulation by a bit per term.  Here the
    rounding half-ulps and input bounds are summed exactly (integer
    mantissa at a running scale) and ceiled once at the end.
    """
    bits = ctx.working_bits
    r = mpfr(0)
    acc, scale = 0, 0  # exact bound = acc * 2^scale

    def bump(e: int) -> None:
        nonlocal acc, scale
        if acc == 0:
            acc, scale = 1, e
        elif e < scale:
            acc = (acc << (scale - e)) + 1
            scale = e
        else:
            acc += 1 << (e - scale)

    for it in items:
        r, inex = _op(bits, "add", r, it.magnitude)
        if inex:
            bump(_half_ulp(r, bits))
        if it.err_exp is not None:
            bump(it.err_exp)
    if acc == 0:
        err = None
    else:
        err = scale + acc.bit_length() - (1 if acc & (acc - 1) == 0 else 0)
    return ApproxReal(r, bits, err)


def pow_int(a: ApproxReal, k: int, ctx: EvalContext) -> ApproxReal:
    if k < 0:
        return div(from_int(1, ctx), pow_int(a, -k, ctx), ctx)
    acc = from_int(1, ctx)
    base = a
    while k:
        if k & 1:
            acc = mul(acc, base, ctx)
        k >>= 1
        if k:
            base = mul(base, base, ctx)
    return acc


# ---------------------------------------------------------------------------
# Elementary functions

_KINDS = ("ln", "atanh", "sin", "exp")


def eval_elementary(kind: str, x: ApproxReal, ctx: EvalContext) -> ApproxReal:
    """ln, atanh, sin or exp with sound error propagation.

    ln requires x > 0 bounded away from zero; atanh requires the whole
    uncertainty interval inside (-1, 1).  Propagation uses a rigorous
    bound on |f'| over the interval plus the rounding half-ulp.
    """
    if kind not in _KINDS:
        raise UsageError(f"unknown elementary kind {kind!r}")
    bits = ctx.working_bits
    ex = x.err_exp
    Ex = _mag_exp(x.magnitude)

    if kind == "ln":
        if x.magnitude <= 0:
            raise DomainError("ln requires a positive argument")
        if ex is not None and ex > Ex - 3:
            raise PrecisionError("ln argument not bounded away from zero")
        r, inex = _op(bits, "log", x.magnitude)
        hu = _half_ulp(r, bits) if inex else None
        # 1/x <= 2^(2-Ex) on the interval
        prop = None if ex is None else ex - Ex + 2
        return ApproxReal(r, bits, _eadd(hu, prop))

    if kind == "atanh":
        xf = abs(_fr(x.magnitude))
        if xf >= 1 and ex is None:
            raise DomainError("atanh requires |x| < 1")
        delta = error_bound(x)
        x_high = xf + delta
        if x_high >= 1:
            if xf >= 1:
                raise DomainError("atanh requires |x| < 1")
            raise PrecisionError("atanh argument uncertainty reaches |x| = 1")
        r, inex = _op(bits, "atanh", x.magnitude)
        hu = _half_ulp(r, bits) if inex else None
        prop = None
        if ex is not None:
            # max of 1/(1-x^2) over the interval, exact rational
            prop = _ceil_log2_fr(delta / (1 - x_high * x_high))
        return ApproxReal(r, bits, _eadd(hu, prop))

    if kind == "sin":
        r, inex = _op(bits, "sin", x.magnitude)
        hu = _half_ulp(r, bits) if inex else None
        return ApproxReal(r, bits, _eadd(hu, ex))

    # exp
    if ex is not None and ex > -2:
        raise PrecisionError("exp argument too uncertain")
    r, inex = _op(bits, "exp", x.magnitude)
    hu = _half_ulp(r, bits) if inex else None
    prop = None
    if ex is not None:
        Er = _mag_exp(r)
        # |exp(x) - exp(x~)| <= exp(x~) (e^d - 1) <= 2 r d for d <= 1/4
        prop = (Er if Er is not None else 1) + ex + 2
    return ApproxReal(r, bits, _eadd(hu, prop))


def gamma_small(x: ApproxReal, ctx: EvalContext) -> ApproxReal:
    """Gamma(x) on (0, 8], the range the identity evaluators need.

    Not part of the eval_elementary kind set.  Error propagation uses
    |Gamma'(x)| = Gamma(x) |psi(x)| with |psi(x)| <= 1/x + 21/10 on (0, 8].
    """
    bits = ctx.working_bits
    xf = _fr(x.magnitude)
    delta = error_bound(x)
    if xf <= 0:
        raise DomainError("gamma_small requires x > 0")
    if xf + delta > 8:
        raise DomainError("gamma_small supports (0, 8] only")
    x_low = xf - delta
    if x_low <= 0:
        raise PrecisionError("gamma_small argument not bounded away from zero")
    r, inex = _op(bits, "gamma", x.magnitude)
    hu = _half_ulp(r, bits) if inex else None
    prop = None
    if x.err_exp is not None:
        gamma_high = Fraction(2) ** ((_mag_exp(r) or 1) + 1)
        prop = _ceil_log2_fr(gamma_high * (1 / x_low + Fraction(21, 10)) * delta)
    return ApproxReal(r, bits, _eadd(hu, prop))


# ---------------------------------------------------------------------------
# Decimal rendering

def _trunc_scaled(v: Fraction, places: int) -> int:
    """Truncation of v*10^places toward zero."""
    scaled = v * 10 ** places
    n, d = scaled.numerator, scaled.denominator
    if n >= 0:
        return n // d
    return -((-n) // d)


def to_decimal(a: ApproxReal, places: int) -> str:
    """Magnitude truncated toward zero at `places` decimal places."""
    if places < 0:
        raise UsageError("places must be >= 0")
    t = _trunc_scaled(_fr(a.magnitude), places)
    sign = "-" if t < 0 else ""
    digits = str(abs(t)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def certified_places(a: ApproxReal) -> int | None:
    """Largest D such that every value in [v-b, v+b] truncates identically
    at D decimal places; None when the value is exact."""
    if a.err_exp is None:
        return None
    v = _fr(a.magnitude)
    b = error_bound(a)
    lo, hi = v - b, v + b
    # start near the error scale, then walk to the exact edge
    d = max(0, int(-a.err_exp * 0.30102) - 2)
    while d > 0 and _trunc_scaled(lo, d) != _trunc_scaled(hi, d):
        d -= 1
    if _trunc_scaled(lo, d) != _trunc_scaled(hi, d):
        return 0
    while _trunc_scaled(lo, d + 1) == _trunc_scaled(hi, d + 1):
        d += 1
    return d


def _floor_log10(fr: Fraction) -> int:
    """Largest e with 10^e <= fr, for fr > 0."""
    e = int(0.30102999566 * (fr.numerator.bit_length() - fr.denominator.bit_length())) - 2
    while Fraction(10) ** (e + 1) <= fr:
        e += 1
    while Fraction(10) ** e > fr:
        e -= 1
    return e


def floor_neg_log10(fr: Fraction) -> int:
    """floor(-log10(fr)) clamped to >= 0, for fr > 0; the digits_agreed rule."""
    if fr <= 0:
        raise ValueError("positive value required")
    if fr >= 1:
        return 0
    # largest D with fr <= 10^-D
    d = -_floor_log10(fr)
    return d if fr == Fraction(1, 10 ** d) else d - 1


def sci_upper(fr: Fraction, sig: int = 6) -> str:
    """Scientific-notation decimal string that over-approximates fr >= 0.

    Mantissa digits are rounded upward so the printed string stays an
    upper bound; used for residuals and tail bounds.
    """
    if fr < 0:
        raise ValueError("nonnegative value required")
    if fr == 0:
        return "0"
    e10 = _floor_log10(fr)
    scaled = fr * Fraction(10) ** (sig - 1 - e10)
    m = (scaled.numerator + scaled.denominator - 1) // scaled.denominator
    if m >= 10 ** sig:
        m //= 10
        e10 += 1
    s = str(m)
    return f"{s[0]}.{s[1:]}e{e10:+03d}"
