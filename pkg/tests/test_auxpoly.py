from fractions import Fraction

import mpmath as mp
import pytest

from abssep.auxpoly import (COMPLEX_COMPLEX, M_DIFF, M_SUM, R_REALCOMPLEX,
                            REAL_COMPLEX, REAL_REAL, T1_REPART, AuxError,
                            aux_root_lower_bound, build_aux,
                            cauchy_lower_bound, certified_gap_threshold,
                            exponent_of)
from abssep.polycore import IntPolynomial
from abssep.sepmeasure import measure


def test_m_diff_two_real_roots():
    # X^2 - X - 1: root difference is sqrt(5), squared difference 5
    aux = build_aux(IntPolynomial([-1, -1, 1]), M_DIFF)
    assert aux.poly.coeffs == (-5, 1)


def test_m_sum_two_real_roots():
    # X^2 - X - 1: root sum is 1
    aux = build_aux(IntPolynomial([-1, -1, 1]), M_SUM)
    assert aux.poly.coeffs == (-1, 1)


def test_m_diff_conjugate_pair():
    # X^2 + 1: (i - (-i))^2 = -4
    aux = build_aux(IntPolynomial([1, 0, 1]), M_DIFF)
    assert aux.poly.coeffs == (4, 1)


def test_m_diff_cubic_exact():
    # (X^2-1)(X-2): squared differences {4, 1, 9}
    p = IntPolynomial([-1, 1]) * IntPolynomial([1, 1]) * IntPolynomial([-2, 1])
    aux = build_aux(p, M_DIFF)
    assert aux.poly.coeffs == (-36, 49, -14, 1)


def test_r_realcomplex_cubic_exact():
    # same cubic: z_k^2 - z_i z_j over {5, -1, 3}
    p = IntPolynomial([-1, 1]) * IntPolynomial([1, 1]) * IntPolynomial([-2, 1])
    aux = build_aux(p, R_REALCOMPLEX)
    assert aux.poly.coeffs == (15, 7, -7, 1)


def test_t1_repart_cubic_exact():
    # same cubic: z_i + z_j - 2 z_k over {-4, 5, -1}
    p = IntPolynomial([-1, 1]) * IntPolynomial([1, 1]) * IntPolynomial([-2, 1])
    aux = build_aux(p, T1_REPART)
    assert aux.poly.coeffs == (-20, -21, 0, 1)


def test_leading_coefficient_scaling():
    # 2X^2 - 1: squared root difference is 2, scale lc^2 = 4
    aux = build_aux(IntPolynomial([-1, 0, 2]), M_DIFF)
    assert aux.poly.coeffs == (-8, 4)


def test_cauchy_lower_bound():
    p = IntPolynomial([-1, -1, 1])
    assert cauchy_lower_bound(p) == Fraction(1, 2)
    # every root modulus is indeed >= the bound (golden ratio pair)
    assert abs((1 - mp.sqrt(5)) / 2) >= 0.5


def test_aux_root_lower_bound_strips_zero_roots():
    # (X-1)(X+1)(X-2): M_sum has the value 0 for the (1,-1) pair; the
    # stripped polynomial is (X-9)(X-1), height 10
    p = IntPolynomial([-1, 1]) * IntPolynomial([1, 1]) * IntPolynomial([-2, 1])
    aux = build_aux(p, M_SUM)
    assert aux.poly.coeffs[0] == 0
    assert aux_root_lower_bound(aux) == Fraction(1, 11)


def test_degree_guards():
    p = IntPolynomial([-1, -1, 1])
    with pytest.raises(AuxError):
        certified_gap_threshold(p, "abssep", REAL_COMPLEX)
    q = IntPolynomial([3, -2, -3, 10])
    with pytest.raises(AuxError):
        certified_gap_threshold(q, "abssep", COMPLEX_COMPLEX)
    with pytest.raises(AuxError):
        certified_gap_threshold(q, "im_gap", REAL_REAL)


def test_exponent_of():
    assert exponent_of("sep", REAL_REAL, 4) == 3
    assert exponent_of("abssep", REAL_COMPLEX, 3) == 4
    assert exponent_of("abssep", REAL_COMPLEX, 4) == 12
    assert exponent_of("abssep", COMPLEX_COMPLEX, 4) == 3
    with pytest.raises(AuxError):
        exponent_of("im_gap", REAL_REAL, 3)


@pytest.mark.parametrize("coeffs,kind,cls", [
    ((3, -2, -3, 10), "abssep", REAL_COMPLEX),
    ((3, -2, -3, 10), "sep", REAL_REAL),
    ((-2, -9, -8, 5), "sep", REAL_REAL),
    ((1, 5, 5, 7), "re_gap", REAL_COMPLEX),
    ((1, -6, 6, 10), "im_gap", REAL_COMPLEX),
])
def test_threshold_below_actual_gap(coeffs, kind, cls):
    """tau must undercut the measured (certified nonzero) gap."""
    p = IntPolynomial(coeffs)
    tau = certified_gap_threshold(p, kind, cls)
    assert tau > 0
    res = measure(p, kind)
    tau_f = mp.mpf(tau.numerator) / tau.denominator
    assert res.value_lo >= tau_f


def test_threshold_is_deterministic():
    p = IntPolynomial((3, -2, -3, 10))
    a = certified_gap_threshold(p, "abssep", REAL_COMPLEX)
    b = certified_gap_threshold(p, "abssep", REAL_COMPLEX)
    assert a == b and isinstance(a, Fraction)
