"""Kernel soundness: every ApproxReal must contain its true value."""

import math
from fractions import Fraction as F

import gmpy2
import pytest
from hypothesis import given, strategies as st

import oracles
from zetaforge import numkernel as nk
from zetaforge.numkernel import (
    DomainError,
    UsageError,
    agrees_within_error,
    error_bound,
    from_fraction,
    from_int,
    magnitude_fraction,
    make_context,
    upper_bound,
)

CTX = make_context(30)
HI = make_context(70)


def contains(a, true_fr):
    return abs(magnitude_fraction(a) - true_fr) <= error_bound(a)


# --- context construction ---------------------------------------------------

def test_make_context_bits():
    c = make_context(30)
    assert c.target_digits == 30 and c.guard_digits == 10
    assert c.working_bits == (10 ** 40).bit_length()
    assert make_context(1, 1).working_bits == 64  # floor


def test_make_context_rejects_bad():
    with pytest.raises(UsageError):
        make_context(0)
    with pytest.raises(UsageError):
        make_context(10, -1)


# --- exact constructors -----------------------------------------------------

def test_from_int_exact():
    a = from_int(12345, CTX)
    assert a.err_exp is None
    assert magnitude_fraction(a) == 12345


def test_from_fraction_dyadic_exact():
    a = from_fraction(F(3, 8), CTX)
    assert a.err_exp is None and magnitude_fraction(a) == F(3, 8)


def test_from_fraction_inexact_contains():
    q = F(1, 3)
    a = from_fraction(q, CTX)
    assert a.err_exp is not None
    assert contains(a, q)
    assert error_bound(a) < F(1, 10 ** 35)


# --- arithmetic soundness against exact rational ground truth ---------------

small_fr = st.fractions(min_value=F(-50), max_value=F(50), max_denominator=64)


@given(st.lists(small_fr, min_size=1, max_size=12))
def test_sum_many_soundness(vals):
    approx = nk.sum_many([from_fraction(v, CTX) for v in vals], CTX)
    assert contains(approx, sum(vals))


@given(small_fr, small_fr)
def test_add_mul_sub_soundness(x, y):
    ax, ay = from_fraction(x, CTX), from_fraction(y, CTX)
    assert contains(nk.add(ax, ay, CTX), x + y)
    assert contains(nk.sub(ax, ay, CTX), x - y)
    assert contains(nk.mul(ax, ay, CTX), x * y)
    if y != 0 and abs(y) >= F(1, 64):
        assert contains(nk.div(ax, ay, CTX), F(x, y))


@given(small_fr, st.integers(min_value=-6, max_value=9))
def test_pow_int_soundness(x, k):
    if k < 0 and abs(x) < F(1, 8):
        return
    a = from_fraction(x, CTX)
    if x == 0 and k < 0:
        with pytest.raises((DomainError, ZeroDivisionError)):
            nk.pow_int(a, k, CTX)
        return
    assert contains(nk.pow_int(a, k, CTX), x ** k)


@given(st.lists(st.tuples(st.sampled_from("+-*"), small_fr), min_size=1, max_size=20))
def test_expression_chain_soundness(ops):
    """Random op chains stay inside their certified bounds."""
    acc_a = from_int(1, CTX)
    acc_f = F(1)
    for op, v in ops:
        av = from_fraction(v, CTX)
        if op == "+":
            acc_a, acc_f = nk.add(acc_a, av, CTX), acc_f + v
        elif op == "-":
            acc_a, acc_f = nk.sub(acc_a, av, CTX), acc_f - v
        else:
            acc_a, acc_f = nk.mul(acc_a, av, CTX), acc_f * v
    assert contains(acc_a, acc_f)


def test_neg_abs_do_not_round():
    # unary wrappers must not fall back to the 53-bit default context
    a = from_fraction(F(1, 3), HI)
    n = nk.neg(a)
    assert magnitude_fraction(n) == -magnitude_fraction(a)
    assert nk.abs_(n).magnitude == a.magnitude


def test_div_rejects_interval_straddling_zero():
    tiny = nk.sub(from_fraction(F(1, 3), CTX),
                  from_fraction(F(1, 3), make_context(5)), CTX)
    with pytest.raises(nk.PrecisionError):
        nk.div(from_int(1, CTX), tiny, CTX)
    with pytest.raises(DomainError):
        nk.div(from_int(1, CTX), from_int(0, CTX), CTX)


# --- refinement: higher precision stays inside coarser bounds ---------------

@given(st.fractions(min_value=F(1, 40), max_value=F(39, 40), max_denominator=97),
       st.sampled_from(["ln", "atanh", "exp", "sin"]))
def test_elementary_refinement(x, kind):
    lo = nk.eval_elementary(kind, from_fraction(x, CTX), CTX)
    hi = nk.eval_elementary(kind, from_fraction(x, HI), HI)
    assert agrees_within_error(lo, hi)
    assert error_bound(hi) < error_bound(lo)


def test_elementary_known_values():
    ln1 = nk.eval_elementary("ln", from_int(1, CTX), CTX)
    assert magnitude_fraction(ln1) == 0
    e1 = nk.eval_elementary("exp", from_int(0, CTX), CTX)
    assert magnitude_fraction(e1) == 1
    # ln 2 = 2 atanh(1/3)
    l2 = nk.eval_elementary("ln", from_int(2, CTX), CTX)
    at = nk.mul(from_int(2, CTX),
                nk.eval_elementary("atanh", from_fraction(F(1, 3), CTX), CTX), CTX)
    assert agrees_within_error(l2, at)
    assert upper_bound(nk.abs_(nk.sub(l2, at, CTX))) < F(1, 10 ** 35)


def test_elementary_domain_errors():
    with pytest.raises(DomainError):
        nk.eval_elementary("ln", from_int(0, CTX), CTX)
    with pytest.raises(DomainError):
        nk.eval_elementary("ln", from_int(-3, CTX), CTX)
    with pytest.raises(DomainError):
        nk.eval_elementary("atanh", from_int(1, CTX), CTX)
    with pytest.raises(UsageError):
        nk.eval_elementary("cosh", from_int(1, CTX), CTX)


# --- pi by three unrelated routes -------------------------------------------

def test_pi_three_routes():
    forge = nk.const_pi(make_context(60))
    machin = oracles.machin_pi(70)
    agm = F(gmpy2.mpq(oracles.agm_pi(280)))
    assert abs(magnitude_fraction(forge) - machin) < F(1, 10 ** 60)
    assert abs(magnitude_fraction(forge) - agm) < F(1, 10 ** 60)
    assert error_bound(forge) < F(1, 10 ** 65)


# --- gamma -------------------------------------------------------------------

def test_gamma_small_known():
    g5 = nk.gamma_small(from_int(5, CTX), CTX)
    assert contains(g5, F(24))
    g1 = nk.gamma_small(from_int(1, CTX), CTX)
    assert contains(g1, F(1))
    # Gamma(1/2)^2 = pi
    gh = nk.gamma_small(from_fraction(F(1, 2), CTX), CTX)
    sq = nk.mul(gh, gh, CTX)
    assert agrees_within_error(sq, nk.const_pi(CTX))


@given(st.fractions(min_value=F(1, 8), max_value=F(13, 2), max_denominator=48))
def test_gamma_recurrence(x):
    gx = nk.gamma_small(from_fraction(x, CTX), CTX)
    gx1 = nk.gamma_small(from_fraction(x + 1, CTX), CTX)
    assert agrees_within_error(gx1, nk.mul(from_fraction(x, CTX), gx, CTX))


def test_gamma_domain():
    with pytest.raises(DomainError):
        nk.gamma_small(from_int(0, CTX), CTX)
    with pytest.raises(DomainError):
        nk.gamma_small(from_int(9, CTX), CTX)


# --- decimal rendering -------------------------------------------------------

def test_to_decimal_truncates():
    a = from_fraction(F(1, 3), CTX)
    assert nk.to_decimal(a, 5) == "0.33333"
    b = from_fraction(F(-22, 7), CTX)
    assert nk.to_decimal(b, 4) == "-3.1428"
    assert nk.to_decimal(from_int(7, CTX), 0) == "7"


def test_certified_places_honest():
    a = from_fraction(F(1, 3), CTX)
    d = nk.certified_places(a)
    v, b = magnitude_fraction(a), error_bound(a)
    assert nk._trunc_scaled(v - b, d) == nk._trunc_scaled(v + b, d)
    assert nk._trunc_scaled(v - b, d + 1) != nk._trunc_scaled(v + b, d + 1)
    assert nk.certified_places(from_int(3, CTX)) is None


def test_floor_neg_log10_rules():
    assert nk.floor_neg_log10(F(1, 10 ** 30)) == 30
    assert nk.floor_neg_log10(F(11, 10 ** 31)) == 29
    assert nk.floor_neg_log10(F(99, 10 ** 32)) == 30
    assert nk.floor_neg_log10(F(5)) == 0
    with pytest.raises(ValueError):
        nk.floor_neg_log10(F(0))


@given(st.fractions(min_value=F(1, 10 ** 12), max_value=F(10 ** 9),
                    max_denominator=10 ** 13))
def test_sci_upper_is_upper(fr):
    s = nk.sci_upper(fr)
    assert F(s.replace("e", "E")) >= fr


def test_agrees_within_error_definition():
    a = from_fraction(F(1, 3), make_context(8))
    b = from_fraction(F(1, 3), make_context(30))
    assert agrees_within_error(a, b) and agrees_within_error(b, a)
    c = nk.add(a, from_fraction(F(1, 10 ** 6), make_context(30)), make_context(30))
    assert not agrees_within_error(c, b)
