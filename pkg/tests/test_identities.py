"""Identity evaluators: exact proof-step maps, base-series closed forms,
tail soundness in both summation modes, and the report contract."""

from fractions import Fraction as F

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from zetaforge import identities as idn
from zetaforge import numkernel as nk
from zetaforge.identities import BaseSumSpec
from zetaforge.numkernel import (
    DomainError,
    PrecisionError,
    UsageError,
    error_bound,
    magnitude_fraction,
    make_context,
    upper_bound,
)
from zetaforge.zetacore import hurwitz_ds_ref, zeta_ref

CTX = make_context(30)
CTX40 = make_context(40)

LN2_FROZEN = F(693147180559945309417232121458176568075500134, 10 ** 45)


# --- exact term-equivalence maps (the reindexing proof steps) -----------------

def test_term_equiv_ln2_exact_to_50():
    for m in range(51):
        d, z = idn.term_equiv_ln2(m)
        assert d == z, m
    assert idn.term_equiv_ln2(0) == (F(1, 24), F(1, 24))


def test_term_equiv_zeta3_exact_to_50():
    for m in range(51):
        d, z = idn.term_equiv_zeta3(m)
        assert d == z, m
    assert idn.term_equiv_zeta3(0) == (F(1, 960), F(1, 960))


def test_term_equiv_general_exact():
    for m in range(1, 9):
        for k in range(51):
            d, z = idn.term_equiv_general(m, k)
            assert d == z, (m, k)
    assert idn.term_equiv_general(1, 0) == (F(1, 480), F(1, 480))


def test_term_equiv_general_m1_doubles_the_quarter_series_map():
    # (1/2)E/(2k+5)! vs (1/4)E/(2k+5)!: order 1 is exactly twice the
    # quarter-series coefficient, so the zeta3 map is a special case
    for k in range(30):
        assert idn.term_equiv_general(1, k)[0] == 2 * idn.term_equiv_zeta3(k)[0]


def test_term_equiv_rejects_bad_indices():
    with pytest.raises(UsageError):
        idn.term_equiv_ln2(-1)
    with pytest.raises(UsageError):
        idn.term_equiv_general(0, 1)
    with pytest.raises(UsageError):
        idn.term_equiv_general(1, -1)


# --- base_sum closed forms ------------------------------------------------------

def _brute_base(pole_offsets, x: F, terms: int) -> F:
    with gmpy2.context(precision=380):
        acc = gmpy2.mpfr(0)
        for n in range(1, terms + 1):
            inner = gmpy2.mpfr(0)
            for c, r in pole_offsets:
                inner += gmpy2.mpfr(c.numerator) / (c.denominator * (2 * n + r))
            acc += gmpy2.mpfr(x.numerator ** (2 * n)) / x.denominator ** (2 * n) * inner
        return F(gmpy2.mpq(acc))


coeff_fr = st.fractions(min_value=F(-4), max_value=F(4), max_denominator=6)


@settings(max_examples=30)
@given(st.lists(st.tuples(coeff_fr, st.integers(min_value=0, max_value=6)),
                min_size=1, max_size=4, unique_by=lambda t: t[1]),
       st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=12))
def test_base_sum_matches_brute_force(pole_offsets, x):
    spec = BaseSumSpec(tuple(pole_offsets), x)
    closed = idn.base_sum(spec, CTX)
    n_terms = 700
    brute = _brute_base(pole_offsets, x, n_terms)
    tail = sum(abs(c) for c, _ in pole_offsets) * x ** (2 * n_terms + 2) \
        / ((2 * n_terms + 2) * (1 - x * x))
    gap = abs(magnitude_fraction(closed) - brute)
    assert gap <= tail + error_bound(closed) + F(1, 10 ** 60)


@settings(max_examples=20)
@given(st.lists(st.tuples(coeff_fr, st.integers(min_value=0, max_value=6)),
                min_size=2, max_size=4, unique_by=lambda t: t[1]))
def test_base_sum_endpoint_matches_brute_force(pole_offsets):
    # x = 1 needs vanishing residue sum; rebalance the last coefficient
    c_rest = sum(c for c, _ in pole_offsets[:-1])
    pole_offsets = pole_offsets[:-1] + [(-c_rest, pole_offsets[-1][1])]
    spec = BaseSumSpec(tuple(pole_offsets), F(1))
    closed = idn.base_sum(spec, CTX)
    n_terms = 20000
    brute = _brute_base(pole_offsets, F(1), n_terms)
    tail = sum(abs(c) * r for c, r in pole_offsets) / F(4 * n_terms)
    gap = abs(magnitude_fraction(closed) - brute)
    assert gap <= tail + error_bound(closed) + F(1, 10 ** 60)


def test_base_sum_known_value():
    # sum x^2n * (2/(2n) - 2/(2n+1)) at x=1 collapses to 2 - 2 ln 2
    spec = BaseSumSpec(((F(2), 0), (F(-2), 1)), F(1))
    v = idn.base_sum(spec, CTX)
    expect = 2 - 2 * LN2_FROZEN
    assert abs(magnitude_fraction(v) - expect) <= error_bound(v) + F(1, 10 ** 44)


def test_base_sum_rejects_divergent_endpoint():
    with pytest.raises(DomainError):
        idn.base_sum(BaseSumSpec(((F(1), 0), (F(1), 1)), F(1)), CTX)


def test_base_sum_domain_checks():
    with pytest.raises(DomainError):
        idn.base_sum(BaseSumSpec(((F(1), 0),), F(3, 2)), CTX)
    with pytest.raises(DomainError):
        idn.base_sum(BaseSumSpec(((F(1), 0),), F(0)), CTX)
    with pytest.raises(UsageError):
        idn.base_sum(BaseSumSpec((), F(1, 2)), CTX)
    with pytest.raises(UsageError):
        idn.base_sum(BaseSumSpec(((F(1), -2),), F(1, 2)), CTX)


# --- series engine: mode agreement and tail soundness -----------------------------

SERIES_CASES = [
    ("ln2", {}),
    ("zeta3", {}),
    ("sum-a", {}),
    ("sum-b", {}),
    ("param-sum", {"t": F(1, 2)}),
    ("general", {"m": 2}),
]


@pytest.mark.parametrize("identity,kw", SERIES_CASES)
def test_direct_agrees_with_accelerated(identity, kw):
    acc = idn.series_for(identity, CTX, "accelerated", **kw)
    direct = idn.series_for(identity, CTX, "direct", max_terms=1500, **kw)
    gap = abs(magnitude_fraction(acc.value) - magnitude_fraction(direct.value))
    budget = (upper_bound(acc.tail_bound) + upper_bound(direct.tail_bound)
              + error_bound(acc.value) + error_bound(direct.value))
    assert gap <= budget, identity


@pytest.mark.parametrize("identity,kw", SERIES_CASES)
def test_direct_tail_is_sound(identity, kw):
    # the accelerated value is the proxy truth (its own bound ~1e-40)
    truth = idn.series_for(identity, CTX, "accelerated", **kw)
    short = idn.series_for(identity, CTX, "direct", max_terms=200, **kw)
    gap = abs(magnitude_fraction(truth.value) - magnitude_fraction(short.value))
    assert gap <= (upper_bound(short.tail_bound) + error_bound(short.value)
                   + upper_bound(truth.tail_bound) + error_bound(truth.value))


def test_ln2_direct_partial_sums_monotone():
    vals = [magnitude_fraction(idn.series_for("ln2", CTX, "direct",
                                              max_terms=n).value)
            for n in (300, 600, 1200)]
    assert vals[0] < vals[1] < vals[2] < LN2_FROZEN


def test_tail_bound_decreases_with_terms():
    t1 = upper_bound(idn.series_for("ln2", CTX, "direct", max_terms=100).tail_bound)
    t2 = upper_bound(idn.series_for("ln2", CTX, "direct", max_terms=400).tail_bound)
    assert t2 < t1


def test_accelerated_needs_enough_terms():
    with pytest.raises(PrecisionError):
        idn.series_for("ln2", CTX40, "accelerated", max_terms=5)


def test_series_for_validation():
    with pytest.raises(UsageError):
        idn.series_for("ln2", CTX, "turbo")
    with pytest.raises(UsageError):
        idn.series_for("ln2", CTX, "direct", max_terms=0)
    with pytest.raises(UsageError):
        idn.series_for("tyagi-holm", CTX)
    with pytest.raises(UsageError):
        idn.series_for("param-sum", CTX)
    with pytest.raises(UsageError):
        idn.series_for("general", CTX)


# --- the identity reports ----------------------------------------------------------

def test_ln2_report_passes():
    r = idn.ln2_report("accelerated", CTX40)
    assert r.passed and r.digits_agreed >= 40
    assert upper_bound(r.abs_residual) < F(1, 10 ** 40)


def test_eval_zeta3_passes():
    r = idn.eval_zeta3("accelerated", CTX40)
    assert r.passed and r.identity_name == "zeta3"
    assert upper_bound(r.abs_residual) < F(1, 10 ** 40)


def test_eval_sums_pass_and_subtract():
    ra = idn.eval_sum_a(CTX)
    rb = idn.eval_sum_b(CTX)
    assert ra.passed and rb.passed
    # A - B = ln2/12 - 3 zeta(3)/(8 pi^2)
    diff = nk.sub(ra.lhs, rb.lhs, CTX)
    ln2 = nk.eval_elementary("ln", nk.from_int(2, CTX), CTX)
    pi2 = nk.pow_int(nk.const_pi(CTX), 2, CTX)
    combo = nk.sub(nk.div(ln2, nk.from_int(12, CTX), CTX),
                   nk.div(nk.mul(nk.from_int(3, CTX), zeta_ref(3, CTX), CTX),
                          nk.mul(nk.from_int(8, CTX), pi2, CTX), CTX), CTX)
    gap = upper_bound(nk.abs_(nk.sub(diff, combo, CTX)))
    assert gap < F(1, 10 ** 30)


def test_param_sum_passes_and_quarters():
    r = idn.eval_param_sum(F(1, 2), CTX)
    assert r.passed and r.params == (("t", F(1, 2)),)
    # at t = 1/2 the parametric sum is exactly 4x the Wilton member
    rb = idn.eval_sum_b(CTX)
    four_b = nk.mul(nk.from_int(4, CTX), rb.lhs, CTX)
    gap = upper_bound(nk.abs_(nk.sub(r.lhs, four_b, CTX)))
    assert gap < F(1, 10 ** 30)


@settings(max_examples=12)
@given(st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=16))
def test_param_sum_passes_across_t(t):
    r = idn.eval_param_sum(t, make_context(15))
    assert r.passed, t


def test_param_sum_domain():
    for t in (F(0), F(1), F(3, 2), F(-1, 2)):
        with pytest.raises(DomainError):
            idn.eval_param_sum(t, CTX)


def test_bracket_shrinks_toward_endpoint():
    widths = []
    for t in (F(9, 10), F(99, 100), F(999, 1000)):
        b = nk.sub(hurwitz_ds_ref(-3, 1 + t, CTX),
                   hurwitz_ds_ref(-3, 1 - t, CTX), CTX)
        widths.append(abs(magnitude_fraction(b)))
    assert widths[0] > widths[1] > widths[2]
    assert widths[2] < F(1, 1000)


def test_tyagi_holm_passes():
    r = idn.eval_tyagi_holm(F(3, 2), CTX)
    assert r.passed and r.digits_agreed >= 30
    assert r.identity_name == "tyagi-holm"


def test_tyagi_holm_other_points():
    for s in (F(5, 4), F(7, 4)):
        r = idn.eval_tyagi_holm(s, CTX)
        assert r.passed, s


def test_tyagi_holm_domain():
    for s in (F(1), F(2), F(5, 2), F(1, 2)):
        with pytest.raises(DomainError):
            idn.eval_tyagi_holm(s, CTX)


def test_prefactor_limit_is_ln2():
    # (1 - 2^{1-s})/(s - 1) -> ln 2 as s -> 1, checked one step off the pole
    ln2 = nk.eval_elementary("ln", nk.from_int(2, CTX), CTX)
    from zetaforge.zetacore import _rpow
    for eps in (F(1, 10 ** 8), -F(1, 10 ** 8)):
        s = 1 + eps
        val = nk.div(nk.sub(nk.from_int(1, CTX), _rpow(F(2), 1 - s, CTX), CTX),
                     nk.from_fraction(eps, CTX), CTX)
        gap = upper_bound(nk.abs_(nk.sub(val, ln2, CTX)))
        assert gap < F(1, 10 ** 7), eps


def test_eval_general_m_1_through_4():
    for m in range(1, 5):
        r = idn.eval_general(m, CTX)
        assert r.passed and r.params == (("m", m),)


def test_eval_general_rejects_bad_m():
    for m in (0, -2, 1.5, True):
        with pytest.raises(UsageError):
            idn.eval_general(m, CTX)


def test_milgram_passes_and_maps_agree():
    for m in range(1, 9):
        gmap, mmap = idn.milgram_coeff_maps(m)
        assert gmap == mmap
        assert set(gmap) == {"ln2", "base"} | {("zeta", j) for j in range(1, m)}
    r = idn.eval_milgram(2, CTX)
    assert r.passed and r.identity_name == "milgram"


def test_milgram_and_general_residuals_comparable():
    rg = idn.eval_general(3, CTX)
    rm = idn.eval_milgram(3, CTX)
    # same series, same oracle family: both certify past the tolerance
    assert rg.passed and rm.passed
    assert rg.digits_agreed >= 30 and rm.digits_agreed >= 30


def test_report_pass_matches_digit_rule():
    r = idn.eval_sum_a(CTX)
    assert r.passed == (upper_bound(r.abs_residual) <= F(1, 10 ** 30))
    assert r.passed == (r.digits_agreed >= 30)


def test_direct_mode_report_fails_honestly():
    r = idn.eval_zeta3("direct", CTX, max_terms=400)
    assert not r.passed
    assert 0 < r.digits_agreed < 30
