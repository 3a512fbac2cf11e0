import mpmath as mp
import pytest

from abssep.polycore import IntPolynomial, parse_poly
from abssep.rootfind import RepeatedRootError
from abssep.sepmeasure import (MEASURES, NoQualifyingPairError, measure,
                               quality)


def _val4(res):
    return mp.nstr(res.value, 4, min_fixed=1, max_fixed=0)


def test_known_record_values_degree3():
    cases = {
        "sep": ("5X^3+8X^2-9X+2", "1.421e-2"),
        "abssep": ("10X^3-3X^2-2X+3", "5.394e-4"),
        "re_gap": ("7X^3+5X^2+5X+1", "5.952e-4"),
        "im_gap": ("10X^3+6X^2-6X+1", "2.403e-2"),
    }
    for m, (poly, want) in cases.items():
        res = measure(parse_poly(poly), m)
        assert _val4(res) == want, (m, poly)
        assert res.decided_nonzero
        with mp.workprec(res.precision_bits):
            assert res.value_lo <= (res.value_lo + res.value_hi) / 2 \
                <= res.value_hi


def test_sep_of_quadratic():
    res = measure(IntPolynomial([-1, 0, 1]), "sep")
    assert res.value == 2


def test_abssep_conjugate_pair_excluded():
    with pytest.raises(NoQualifyingPairError):
        measure(IntPolynomial([1, 0, 1]), "abssep")      # X^2+1
    with pytest.raises(NoQualifyingPairError):
        measure(IntPolynomial([-1, 0, 1]), "abssep")     # X^2-1, |1|=|-1|


def test_im_gap_conjugate_pair_contributes():
    res = measure(IntPolynomial([1, 0, 1]), "im_gap")    # roots +-i
    assert res.value == 2


def test_exact_integer_roots_terminate():
    # (X+10)(X^2-1): equal-modulus pair is certified equal and the
    # remaining gaps are exactly 9, with radius-0 balls along the way
    res = measure(IntPolynomial([-10, -1, 10, 1]), "abssep")
    assert res.value == 9


def test_repeated_root_handling():
    p = IntPolynomial([-1, 1]) * IntPolynomial([-1, 1]) * IntPolynomial([3, 1])
    with pytest.raises(RepeatedRootError):
        measure(p, "sep")
    res = measure(p, "sep", use_squarefree_part=True)
    assert res.value == 4


def test_quality_known_value():
    q = quality(parse_poly("2X^3+X^2-X-1"), "abssep")
    assert q == pytest.approx(4.24, abs=0.01)


def test_quality_undefined_for_height_one():
    p = IntPolynomial([1, 1, 1])
    res = measure(p, "im_gap")
    assert res.quality is None


def test_top_two_abs_gap_distinct_moduli():
    p = IntPolynomial([-1, 1]) * IntPolynomial([-2, 1]) * IntPolynomial([-3, 1])
    res = measure(p, "top_two_abs_gap")
    assert res.value == 1


def test_top_two_abs_gap_collapses_certified_ties():
    # (X^2+4)(X-2)(X-5): moduli {2, 2, 2, 5}; the three-way tie is one
    # modulus class, so the top-two gap is 3
    p = IntPolynomial([4, 0, 1]) * IntPolynomial([-2, 1]) * IntPolynomial([-5, 1])
    res = measure(p, "top_two_abs_gap")
    assert res.value == 3


def test_top_two_abs_gap_all_equal_moduli():
    p = IntPolynomial([4, 0, 1]) * IntPolynomial([-2, 1])
    with pytest.raises(NoQualifyingPairError):
        measure(p, "top_two_abs_gap")


def test_scaling_invariance():
    p = parse_poly("10X^3-3X^2-2X+3")
    for m in MEASURES:
        a = measure(p, m)
        b = measure(p * 7, m)
        assert not (b.value_hi < a.value_lo or b.value_lo > a.value_hi)


def test_tight_enclosure():
    res = measure(parse_poly("10X^3-3X^2-2X+3"), "abssep")
    assert (res.value_hi - res.value_lo) <= mp.mpf("1e-18") * res.value_hi


def test_unknown_measure_rejected():
    with pytest.raises(Exception):
        measure(IntPolynomial([-1, 0, 1]), "nope")
