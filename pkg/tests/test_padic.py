import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from phantomlab.fgab import FgGroup
from phantomlab.padic import (
    AffineTail,
    BtClass,
    PadicInt,
    PrecisionExhausted,
    SumFamily,
    UnsupportedGroup,
    ValSeq,
    classify,
    completion_triple,
    divide_by_p,
    finite_support_in_kernel,
    pinf_witness,
    w_certificate,
    wbi_check,
)

primes = st.sampled_from([2, 3, 5, 7])


# -- PadicInt -----------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(primes, st.integers(-10**12, 10**12), st.integers(-10**12, 10**12), st.integers(-10**6, 10**6),
       st.integers(1, 30))
def test_ring_laws_mod_p_power(p, a, b, c, N):
    x, y, z = PadicInt(p, a, N), PadicInt(p, b, N), PadicInt(p, c, N)
    assert x + y == y + x and x * y == y * x
    assert (x + y) + z == x + (y + z) and (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0 and x + (-x) == 0
    assert (x * y).value == (a * b) % p**N


@settings(max_examples=200, deadline=None)
@given(primes, st.integers(-10**9, 10**9), st.integers(-10**9, 10**9))
def test_valuation_rules(p, a, b):
    N = 60
    x, y = PadicInt(p, a, N), PadicInt(p, b, N)
    assert x.valuation == oracles.valuation(a, p)
    if a and b:
        assert (x * y).valuation == x.valuation + y.valuation
        if a + b:
            assert (x + y).valuation >= min(x.valuation, y.valuation)


def test_digits_round_trip_and_marker():
    x = PadicInt(3, 5 * 27, 6)
    assert x.digits == (0, 0, 0, 2, 1, 0)
    assert PadicInt.from_digits(3, x.digits) == x
    assert x.valuation == 3
    z = PadicInt(3, 3**6, 6)
    assert z.is_zero() and z.valuation is None
    with pytest.raises(ValueError):
        PadicInt.from_digits(2, [0, 2])


def test_equality_uses_smaller_precision():
    assert PadicInt(2, 5, 2) == PadicInt(2, 1, 10)
    assert hash(PadicInt(2, 5, 2)) == hash(PadicInt(2, 1, 10))


# -- sequences and membership ---------------------------------------------------

def test_classify_examples():
    B = SumFamily(2)
    assert classify(ValSeq.from_rule(2, 2, 0), B) == {"v_to_inf": True, "v_minus_f_nonneg": True, "v_minus_f_to_inf": True}
    assert classify(ValSeq.from_rule(2, 1, 0), B) == {"v_to_inf": True, "v_minus_f_nonneg": True, "v_minus_f_to_inf": False}
    assert classify(ValSeq.from_rule(2, 0, 0), B) == {"v_to_inf": False, "v_minus_f_nonneg": False, "v_minus_f_to_inf": False}


seqs = st.builds(
    lambda p, prefix, alpha, beta, zero_tail: (p, prefix, None if zero_tail else (alpha, beta)),
    st.sampled_from([2, 3]),
    st.lists(st.integers(0, 10**6), max_size=5),
    st.integers(0, 3),
    st.integers(0, 6),
    st.booleans(),
)


def _brute_membership(x: ValSeq, B: SumFamily, K: int = 60):
    """Decide the three memberships by scanning entries far past the prefix.

    With affine laws, a gap that has not grown by index ``K`` never will.
    """
    vals = [x.entry_valuation(k) for k in range(K)]
    big = 10**9
    vs = [big if v is None else v for v in vals]
    gaps = [v - B.exponent(k) for k, v in enumerate(vs)]
    far = range(K - 10, K)
    to_inf = all(vs[k] >= 30 for k in far)
    nonneg = all(g >= 0 for g in gaps)
    gap_inf = nonneg and all(gaps[k] >= 20 for k in far)
    return {"v_to_inf": to_inf, "v_minus_f_nonneg": nonneg, "v_minus_f_to_inf": gap_inf}


@settings(max_examples=300, deadline=None)
@given(seqs, st.integers(0, 2), st.integers(0, 3))
def test_classify_matches_entry_scan_and_nests(data, fa, fb):
    p, prefix, tail = data
    tail = None if tail is None else AffineTail(*tail)
    if tail is not None and tail.exponent(len(prefix)) < 0:
        return
    x = ValSeq(p, tuple(prefix), tail, 40)
    B = SumFamily(p, fa, fb)
    m = classify(x, B)
    assert m == _brute_membership(x, B)
    if m["v_minus_f_to_inf"]:
        assert m["v_minus_f_nonneg"] and (m["v_to_inf"] or not B.unbounded)


@settings(max_examples=100, deadline=None)
@given(seqs, st.integers(20, 40))
def test_classify_stable_under_precision_increase(data, N):
    p, prefix, tail = data
    tail = None if tail is None else AffineTail(*tail)
    B = SumFamily(p)
    lo = ValSeq(p, tuple(prefix), tail, N)
    hi = ValSeq(p, tuple(prefix), tail, N + 20)
    assert classify(lo, B) == classify(hi, B)


def test_classify_reports_precision_exhaustion():
    B = SumFamily(2, 3, 0)
    x = ValSeq(2, (PadicInt(2, 0, 4),) * 3, None, 4)  # f(2) = 6 > 4
    with pytest.raises(PrecisionExhausted):
        classify(x, B)


def test_valseq_dict_round_trip():
    x = ValSeq(3, (PadicInt(3, 7, 10), PadicInt(3, 9, 10)), AffineTail(2, 1, 2), 10)
    y = ValSeq.from_dict(x.to_dict())
    assert y == x
    assert ValSeq.from_dict({"p": 2, "prefix": [3, [1, 1]], "tail": None}).prefix[1] == PadicInt(2, 3, 40)


# -- completions ------------------------------------------------------------------

def test_completion_examples():
    for r in (1, 2, 4):
        c = completion_triple(FgGroup.free(r), 2)
        assert c.completion == c.ext_completion == f"Z_2^{r}" and c.pinf == "0" and c.kernel_is_zero
        assert c.checks["pext_zero"]
    c = completion_triple(FgGroup.cyclic(27), 3)
    assert c.completion == "Z/3^3" and c.pinf == "0"
    c = completion_triple(SumFamily(2))
    assert not c.kernel_is_zero and "v(b_k) -> ∞" in c.pinf and "a_k = 2^k b_k" in c.pinf
    assert not c.checks["pext_zero"]
    with pytest.raises(UnsupportedGroup):
        completion_triple(SumFamily(2), 3)


def test_pinf_witness_orders():
    for p in (2, 3, 5):
        w = pinf_witness(SumFamily(p), 10, precision=40)
        assert w.nonzero and all(w.scaled_nonzero.values()) and len(w.scaled_nonzero) == 11
        assert all(w.b_check.values())
        assert w.division_ok and not w.divided_in_pinf
        for k in range(11):
            xk = p**k * w.x
            # b-coordinates of p^k x are all p^k: valuation k, never growing
            bs = xk.b_coordinates(12)
            assert all(b.valuation == k for b in bs)


def test_pinf_witness_precision_guard():
    with pytest.raises(PrecisionExhausted):
        pinf_witness(SumFamily(2), 10, precision=11)
    with pytest.raises(UnsupportedGroup):
        pinf_witness(SumFamily(2, 0, 3))


def test_divide_by_p_entrywise():
    for fam in (SumFamily(2), SumFamily(3, 2, 1), SumFamily(2, 1, 3)):
        x = BtClass(ValSeq(fam.p, (), AffineTail(fam.alpha, fam.beta)), fam, "pinf")
        y = divide_by_p(x)
        diff = (fam.p * y.representative) - x.representative
        assert diff.tail is None
        # entries of the difference, checked one by one
        for k in range(diff.L):
            d = diff.entry(k).value
            assert d == 0 or oracles.valuation(d, fam.p) >= fam.exponent(k)
        assert finite_support_in_kernel(diff, fam)
        assert (fam.p * y).equals(BtClass(x.representative, fam, "Bt"))


def test_finite_support_kernel_criterion():
    B = SumFamily(2)
    assert finite_support_in_kernel(ValSeq(2, (PadicInt(2, 1), PadicInt(2, 2), PadicInt(2, 12))), B)
    assert not finite_support_in_kernel(ValSeq(2, (PadicInt(2, 0), PadicInt(2, 1))), B)
    with pytest.raises(ValueError):
        finite_support_in_kernel(ValSeq.from_rule(2, 1, 0), B)


SUPPORTED = [
    (FgGroup.free(1), 2), (FgGroup.free(3), 3), (FgGroup.cyclic(8), 2), (FgGroup.cyclic(9), 3),
    (FgGroup(2, (4, 12)), 2), (FgGroup.cyclic(5), 2), (SumFamily(2), None), (SumFamily(3), None),
    (SumFamily(2, 2, 1), None), (SumFamily(3, 0, 2), None), (SumFamily(5, 1, 1), None),
]


@pytest.mark.parametrize("B,p", SUPPORTED)
def test_wbi_conditions_agree(B, p):
    r = wbi_check(B, p)
    assert r.consistent
    unbounded = isinstance(B, SumFamily) and B.unbounded
    assert r.pinf_zero == (not unbounded)
    if not r.pinf_zero:
        assert r.kernel_witness is not None and r.kernel_witness.nonzero


def test_w_certificates():
    c = w_certificate(SumFamily(2), 10, precision=40)
    assert c.kind == "order_lower_bound" and "p^10 w != 0" in c.claims
    assert c.to_dict()["order_lower_bound"] == 2**11
    assert not c.supporting_witness.is_zero()
    c0 = w_certificate(SumFamily(3), 0)
    assert "B~ -> B^ does not split" in c0.claims
    for r in (1, 2, 3):
        assert w_certificate(FgGroup.free(r), 7, 2).kind == "trivial"
    with pytest.raises(PrecisionExhausted):
        w_certificate(SumFamily(2), 10, precision=11)
