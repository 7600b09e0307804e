"""Dedekind sums, lens rho invariants, lambda_I, and the lens theorem."""

import math
from fractions import Fraction

import mpmath
import pytest

from instanton.casson import (CassonError, LensSpace, dedekind_cotangent_numeric,
                              dedekind_reciprocity_residual, dedekind_s,
                              lambda_I_general, lambda_I_lens, lens_sweep,
                              rho_lens, sin2_sum_check,
                              wallcross_invariance_residual)


def test_dedekind_small_values():
    assert dedekind_s(1, 2) == 0
    assert dedekind_s(1, 3) == Fraction(1, 18)
    assert dedekind_s(1, 5) == Fraction(1, 5)
    assert dedekind_s(2, 5) == 0


def test_dedekind_sawtooth_oracle():
    # independent double-sum oracle with explicit floor arithmetic
    def oracle(q, p):
        total = Fraction(0)
        for k in range(1, p):
            a = Fraction(k, p)
            b = Fraction(k * q % p, p)
            ta = a - math.floor(a) - Fraction(1, 2) if a.denominator != 1 else Fraction(0)
            tb = b - math.floor(b) - Fraction(1, 2) if b.denominator != 1 else Fraction(0)
            total += ta * tb
        return total
    for p in range(2, 30):
        for q in range(1, p):
            if math.gcd(p, q) == 1:
                assert dedekind_s(q, p) == oracle(q, p)


def test_dedekind_matches_cotangent_form():
    with mpmath.workdps(30):
        for p, q in ((5, 1), (7, 3), (12, 5), (25, 7)):
            exact = dedekind_s(q, p)
            numeric = dedekind_cotangent_numeric(q, p, digits=30)
            assert abs(numeric - mpmath.mpf(exact.numerator) / exact.denominator) < 1e-25


def test_dedekind_rejects_non_coprime():
    with pytest.raises(CassonError, match="non-coprime"):
        dedekind_s(2, 4)


def test_reciprocity_up_to_200():
    for p in range(1, 201):
        for q in range(1, p + 1):
            if math.gcd(p, q) == 1:
                assert dedekind_reciprocity_residual(q, p) == 0


def test_lens_space_normalization():
    L = LensSpace(5, 7)
    assert (L.p, L.q) == (5, 2)
    with pytest.raises(CassonError):
        LensSpace(4, 2)


def test_abelian_levels():
    assert LensSpace(2, 1).abelian_levels("trivial") == []
    assert LensSpace(5, 1).abelian_levels("trivial") == [1, 2]
    assert LensSpace(6, 1).abelian_levels("trivial") == [1, 2]
    assert LensSpace(6, 1).abelian_levels("odd") == [1, 3, 5]
    with pytest.raises(CassonError, match="bundle-parity"):
        LensSpace(5, 1).abelian_levels("odd")


def test_rho_L31():
    entry = rho_lens(LensSpace(3, 1), 1, "trivial", precision=15)
    assert abs(entry.value - mpmath.mpf(2) / 3) < 1e-15
    assert entry.exact == Fraction(2, 3)


def test_rho_sum_L51_matches_dedekind():
    L = LensSpace(5, 1)
    total = sum(rho_lens(L, ell).value for ell in L.abelian_levels())
    # sum rho = 4 p s(q;p) = 4*5*(1/5) = 4
    assert abs(total - 4) < 1e-10


def test_rho_out_of_range():
    with pytest.raises(CassonError, match="out-of-range"):
        rho_lens(LensSpace(5, 1), 3, "trivial")


def test_rho_error_certification_stable():
    L = LensSpace(7, 2)
    low = rho_lens(L, 1, precision=10)
    high = rho_lens(L, 1, precision=20)
    assert abs(low.value - high.value) <= low.error_bound


def test_lambda_lens_examples():
    out = lambda_I_lens(LensSpace(3, 1))
    assert out["pass"] and out["dedekind"] == Fraction(1, 18)
    out5 = lambda_I_lens(LensSpace(5, 1))
    assert out5["pass"] and out5["dedekind"] == Fraction(1, 5)
    out2 = lambda_I_lens(LensSpace(2, 1))
    assert out2["pass"] and out2["dedekind"] == 0
    assert out2["lambda_I"] == 0  # empty abelian sum


def test_lambda_lens_odd_bundle():
    out = lambda_I_lens(LensSpace(4, 1), bundle="odd")
    assert out["pass"]
    out6 = lambda_I_lens(LensSpace(6, 1), bundle="odd")
    assert out6["pass"]


def test_lambda_general():
    assert lambda_I_general(3, [], 1) == 3
    assert lambda_I_general(3, [4], 2) == 2
    assert lambda_I_general(0, [Fraction(2, 3), Fraction(4, 3)], 3) \
        == Fraction(1, 6)
    with pytest.raises(CassonError):
        lambda_I_general(1, [], 0)


def test_wallcross_invariance_exact():
    assert wallcross_invariance_residual(3, [Fraction(1, 3), 2], 5) == 0
    assert wallcross_invariance_residual(-2, [0], 7, index=0) == 0


def test_sin2_sums():
    assert sin2_sum_check(5, 1) == Fraction(5, 2)
    assert sin2_sum_check(6, 2) == 3
    with pytest.raises(CassonError, match="excluded-k"):
        sin2_sum_check(4, 2)


def test_small_sweep_all_pass():
    rows = lens_sweep(12, "trivial", precision=10)
    assert rows and all(r["pass"] for r in rows)
    rows_odd = lens_sweep(8, "odd", precision=10)
    assert rows_odd and all(r["pass"] for r in rows_odd)


def test_sweep_per_level_agrees_with_fast_path():
    slow = lens_sweep(9, "trivial", precision=10, per_level=True)
    fast = lens_sweep(9, "trivial", precision=10, per_level=False)
    assert len(slow) == len(fast)
    for a, b in zip(slow, fast):
        assert a["pass"] and b["pass"]
        assert a["dedekind"] == b["dedekind"]
        with mpmath.workdps(25):
            assert abs(a["lambda_I"] - b["lambda_I"]) < 1e-9
