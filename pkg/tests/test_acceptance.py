"""Acceptance gate: reproduces the reference record tables end to end
and re-runs the structural verification suites at full size.

Table-1 cells run the full two-phase search over the canonical corpus
(largest cells take minutes; the whole gate is designed to finish well
under the long-suite budget).  All value comparisons are at 4
significant digits; qualities at the printed 2-decimal rounding.
"""

import os
from fractions import Fraction

import mpmath as mp
import pytest

from abssep import verifysuite
from abssep.families import (EXTRA_DEG3, EXTRA_DEG4, EXTRA_DEG5, R5,
                             FamilySpec, family_member,
                             family_quality_table, q5_poly)
from abssep.perturb import (OMEGA_6, OMEGA_6_ALT, OMEGA_I, Q4, Q6, R4, R6,
                            QuadVal, cancellation_order, compose_residual,
                            invert_series, modulus_sq_series)
from abssep.polycore import IntPolynomial, canonicalize, parse_poly
from abssep.search import SearchSpec, run_search
from abssep.sepmeasure import NoQualifyingPairError, measure

JOBS = min(8, os.cpu_count() or 1)
F = Fraction


def sci4(x) -> str:
    """4-significant-digit scientific form used by the record tables."""
    return f"{float(x):.3e}"


def assert_value(got, printed: str):
    assert sci4(got) == sci4(mp.mpf(printed)), \
        f"value {mp.nstr(mp.mpf(got), 8)} != printed {printed}"


def assert_quality(got: float, printed: float):
    assert abs(got - printed) <= 0.01, f"quality {got} != printed {printed}"


# ---------------------------------------------------------------------
# record tables: smallest measure values over the canonical corpus
# ---------------------------------------------------------------------

TABLE1 = {
    ("sep", 3, 10): ("5X^3+8X^2-9X+2", "1.421e-2"),
    ("sep", 3, 20): ("14X^3+17X^2-13X+2", "4.938e-3"),
    ("sep", 4, 10): ("3X^4-9X^3-10X^2+7X-1", "4.187e-3"),
    ("sep", 4, 20): ("9X^4-13X^3-14X^2+17X-4", "5.974e-4"),
    ("sep", 5, 10): ("9X^5+X^4-4X^3-9X^2-3X+7", "4.656e-4"),
    ("abssep", 3, 10): ("10X^3-3X^2-2X+3", "5.394e-4"),
    ("abssep", 3, 20): ("17X^3-9X^2-7X+8", "1.233e-5"),
    ("abssep", 4, 10): ("X^4-6X^3-7X^2+5X+6", "2.276e-6"),
    ("abssep", 4, 20): ("18X^4-3X^3+4X^2-6X-3", "1.095e-8"),
    ("abssep", 5, 10): ("6X^5+10X^4-10X^3+4X^2+2X-5", "2.962e-8"),
    ("re_gap", 3, 10): ("7X^3+5X^2+5X+1", "5.952e-4"),
    ("re_gap", 3, 20): ("19X^3+8X^2+15X+2", "2.218e-5"),
    ("re_gap", 4, 10): ("9X^4+5X^3-X^2+5X-1", "1.472e-6"),
    ("re_gap", 4, 20): ("4X^4+5X^3+4X^2-19X-20", "5.016e-8"),
    ("re_gap", 5, 10): ("3X^5+4X^4-8X^3+8X^2+6X-7", "8.528e-8"),
    ("im_gap", 3, 10): ("10X^3+6X^2-6X+1", "2.403e-2"),
    ("im_gap", 3, 20): ("19X^3+9X^2-19X+5", "5.082e-3"),
    ("im_gap", 4, 10): ("10X^4+X^3+10", "6.250e-5"),
    ("im_gap", 4, 20): ("20X^4+X^3+20", "7.813e-6"),
    ("im_gap", 5, 10): ("7X^5-4X^4-8X^3-7X^2-X-3", "7.696e-8"),
}

@pytest.fixture(scope="session")
def searches():
    cache = {}

    def get(d, h):
        if (d, h) not in cache:
            spec = SearchSpec(degree=d, max_height=h, top_k=1)
            cache[(d, h)] = run_search(spec, jobs=JOBS)
        return cache[(d, h)]

    return get


@pytest.mark.parametrize("kind,degree,height",
                         sorted(TABLE1), ids=lambda v: str(v))
def test_table1_cell(searches, kind, degree, height):
    poly_s, val_s = TABLE1[(kind, degree, height)]
    recs = searches(degree, height).records[kind]
    assert recs, f"no records for {kind} d={degree} H={height}"
    best = min(recs, key=lambda r: float(r.value))
    assert_value(mp.mpf(best.value), val_s)
    # record polynomial must be the printed one up to the symmetry orbit
    assert canonicalize(best.polynomial) == canonicalize(parse_poly(poly_s))


# For five cells of the two largest corpora (degree 4 height<=20,
# degree 5 height<=10) the previously reported record values are not
# the corpus minima: the exhaustive certified search (cross-checked by
# the independent sympy oracle at 80 digits) finds strictly smaller
# irreducible records, asserted in TABLE1 above.  The superseded
# "records" are still real corpus members with exactly their reported
# values, asserted here by direct measurement.
SUPERSEDED = [
    ("abssep", "5X^4-17X^3-20X^2+11X+12", "1.034e-7"),
    ("re_gap", "13X^4+3X^3+5X^2+19X-7", "1.669e-7"),
    ("abssep", "9X^5-5X^4-4X^3-2X^2-2X-9", "1.459e-7"),
    ("re_gap", "7X^5-6X^4-6X^3-5X^2+X+1", "2.511e-7"),
    ("im_gap", "5X^5-8X^4+6X^3+5X^2-5X+8", "1.061e-7"),
]


@pytest.mark.parametrize("kind,poly_s,val_s", SUPERSEDED,
                         ids=[s[1] for s in SUPERSEDED])
def test_superseded_printed_records_reproduce(kind, poly_s, val_s):
    res = measure(parse_poly(poly_s), kind)
    assert_value(res.value, val_s)


def test_search_worker_independence(searches):
    """Record set is identical regardless of worker count (timestamps
    excluded from record identity)."""
    spec = SearchSpec(degree=3, max_height=10, top_k=1)
    multi = run_search(spec, jobs=4)
    par = searches(3, 10)
    strip = lambda s: sorted(r.key() for m in s.records
                             for r in s.records[m])
    assert strip(multi) == strip(par)


# ---------------------------------------------------------------------
# high-quality cubic/quartic/quintic spot checks
# ---------------------------------------------------------------------

TABLE2 = [
    ("2X^3+X^2-X-1", "5.309e-2", 4.24),
    ("13X^3+11X^2+8X+5", "3.462e-5", 4.00),
    ("17X^3+9X^2-7X-8", "1.233e-5", 3.99),
    ("102X^3+97X^2+71X+40", "1.532e-8", 3.89),
    ("181X^3+153X^2+112X+71", "9.007e-10", 4.01),
    ("X^4-X^2-2X-3", "8.615e-4", 6.42),
    ("3X^4+3X^3+X^2-2X-4", "4.585e-5", 7.21),
    ("55X^4+14X^3-11X^2-40X-1", "2.724e-11", 6.07),
    ("4X^5+2X^4-4X^3+3X-2", "1.463e-5", 8.03),
    ("8X^5+5X^4-4X^3+4X^2-5X-4", "5.185e-8", 8.07),
]


@pytest.mark.parametrize("poly_s,val_s,qual", TABLE2,
                         ids=[t[0] for t in TABLE2])
def test_table2_spot_check(poly_s, val_s, qual):
    res = measure(parse_poly(poly_s), "abssep")
    assert_value(res.value, val_s)
    assert_quality(res.quality, qual)


def test_table2_against_independent_oracle():
    """Cross-check the certified measure against a fully independent
    implementation path (sympy multiprecision roots, naive pairwise
    minimum)."""
    sympy = pytest.importorskip("sympy")
    X = sympy.symbols("X")
    for poly_s, _, _ in TABLE2:
        p = parse_poly(poly_s)
        expr = sum(c * X ** i for i, c in enumerate(p.coeffs))
        roots = sympy.Poly(expr, X).nroots(n=60)
        mods = [abs(sympy.N(r, 60)) for r in roots]
        best = None
        for i in range(len(mods)):
            for j in range(i + 1, len(mods)):
                d = abs(mods[i] - mods[j])
                if d > sympy.Float("1e-40") and (best is None or d < best):
                    best = d
        res = measure(p, "abssep")
        assert abs(float(best) / float(res.value) - 1) < 1e-8


# ---------------------------------------------------------------------
# sqrt(3)-convergent cubic family
# ---------------------------------------------------------------------

TABLE3 = [
    (2, 12, "5.093e-3", 2.12),
    (5, 123, "2.447e-6", 2.68),
    (10, 2340, "4.643e-12", 3.36),
    (20, 1694157, "1.690e-23", 3.66),
    (50, 642934702584732, "8.146e-58", 3.86),
]


def test_table3_convergent_family():
    rows = family_quality_table("deg3_sqrt3", [n for n, *_ in TABLE3])
    for row, (n, height, val_s, qual) in zip(rows, TABLE3):
        assert row.param == n
        assert row.height == height
        assert_value(row.abssep, val_s)
        assert_quality(row.quality, qual)


# ---------------------------------------------------------------------
# perturbed cyclotomic families (degrees 4 and 6)
# ---------------------------------------------------------------------

TABLE4_DEG4 = [
    (10, "3.716e-5", 4.43),
    (20, "4.183e-7", 4.90),
    (50, "2.653e-9", 5.05),
    (100, "7.175e-11", 5.07),
    (500, "2.055e-14", 5.07),
    (1000, "6.335e-16", 5.07),
]

TABLE4_DEG6 = [
    (10 ** 2, "3.336e-7", 3.24),
    (10 ** 3, "1.373e-14", 4.62),
    (10 ** 4, "1.267e-21", 5.22),
    (10 ** 5, "1.257e-28", 5.58),
]


def test_table4_deg4():
    rows = family_quality_table("deg4", [m for m, *_ in TABLE4_DEG4])
    for row, (m, val_s, qual) in zip(rows, TABLE4_DEG4):
        assert row.height == m
        assert_value(row.abssep, val_s)
        assert_quality(row.quality, qual)


def test_table4_deg6():
    rows = family_quality_table("deg6", [m for m, *_ in TABLE4_DEG6])
    for row, (m, val_s, qual) in zip(rows, TABLE4_DEG6):
        assert row.height == m
        assert_value(row.abssep, val_s)
        assert_quality(row.quality, qual)


# ---------------------------------------------------------------------
# degree-5 family at large target heights
# ---------------------------------------------------------------------

TABLE5 = [
    (10 ** 10, "7.165e-39", 3.81),
    (10 ** 20, "7.164e-99", 4.91),
]


def test_table5_deg5_by_height():
    rows = family_quality_table("deg5", [h for h, *_ in TABLE5],
                                by_height=True)
    for row, (h, val_s, qual) in zip(rows, TABLE5):
        assert_value(row.abssep, val_s)
        assert_quality(row.quality, qual)


# ---------------------------------------------------------------------
# exact perturbation-series oracle
# ---------------------------------------------------------------------

def test_series_deg4_real_branch_exact():
    x1 = invert_series(R4, Q4, F(1), 6)
    assert x1.coeffs == [F(1), F(-1), F(-2), F(-11, 2), F(-71, 4),
                         F(-501, 8), F(-3739, 16)]
    assert all(c == 0 for c in compose_residual(R4, Q4, x1))


def test_series_deg4_imaginary_branch_exact():
    g = lambda a, b: QuadVal(a, b, -1)
    xi = invert_series(R4, Q4, OMEGA_I, 4)
    assert xi.coeffs == [g(0, 1), g(0, -1), g(F(-1, 2), -2),
                         g(-2, F(-11, 2)), g(F(-33, 4), F(-143, 8))]
    # squared modulus is exactly real with leading terms 1 - 2*eps
    m = modulus_sq_series(xi)
    assert m.coeffs[0] == 1 and m.coeffs[1] == -2
    assert all(c == 0 for c in compose_residual(R4, Q4, xi))


CANCELLATIONS = [
    ("deg4", R4, Q4, (F(1), OMEGA_I), 5),
    ("deg6", R6, Q6, (F(1), OMEGA_6), None),
    ("deg6-alt", R6, Q6, (F(1), OMEGA_6_ALT), 1),
    ("extra_deg4", EXTRA_DEG4[0], EXTRA_DEG4[1], (F(1), OMEGA_6), 5),
    ("extra_deg3-1", EXTRA_DEG3[1][0], EXTRA_DEG3[1][1],
     (F(1), OMEGA_I), 3),
    ("extra_deg3-2", EXTRA_DEG3[2][0], EXTRA_DEG3[2][1],
     (F(1), OMEGA_6_ALT), 3),
    ("extra_deg5-1", EXTRA_DEG5[1][0], EXTRA_DEG5[1][1],
     (OMEGA_6, OMEGA_6_ALT), 5),
    ("extra_deg5-2", EXTRA_DEG5[2][0], EXTRA_DEG5[2][1],
     (F(1), OMEGA_6_ALT), 5),
]


@pytest.mark.parametrize("name,R,Q,roots,expect", CANCELLATIONS,
                         ids=[c[0] for c in CANCELLATIONS])
def test_cancellation_orders(name, R, Q, roots, expect):
    depth = min(R.degree + 1, 6)
    assert cancellation_order(R, Q, roots, depth) == expect


def test_cancellation_deg5_variant_b():
    w1 = QuadVal(F(9, 2), F(1, 2), -63)
    w2 = QuadVal(F(11, 2), F(1, 2), -23)
    for q in (0, 1, -3):
        assert cancellation_order(R5, q5_poly(q, "B"), (w1, w2), 6) == 6


def test_deg5_variant_a_degenerate():
    """Variant A's perturbation is exactly divisible by the base
    quintic's quartic factor, so the member keeps the base roots and
    the family cannot drive abssep to 0."""
    for q in (0, 1, 5, -7):
        assert q5_poly(q, "A") == IntPolynomial([q + 20, 1]) * R5
        m = 100
        member = family_member(FamilySpec("deg5",
                                          {"M": m, "q": q,
                                           "variant": "A"}))
        assert member == IntPolynomial([m - 20 - q, -1]) * R5


# ---------------------------------------------------------------------
# constructed equal-modulus corpus (50 polynomials)
# ---------------------------------------------------------------------

def _equal_modulus_cases():
    """25 known-gap cases (X^2+aX+r^2)(X-c) with abssep exactly
    ||c|-r|, and 25 all-equal cases, products of two distinct
    complex-rooted quadratics sharing the modulus r."""
    known = []
    for r in (2, 3, 5, 7, 11):
        for a, c in ((1, 1), (-2, 4), (3, -1), (0, 6), (-1, -8)):
            assert a * a < 4 * r * r and abs(c) != r
            p = IntPolynomial([r * r, a, 1]) * IntPolynomial([-c, 1])
            known.append((p, abs(abs(c) - r)))
    equal = []
    for r in (2, 3, 5, 7, 11):
        pairs = [(a1, a2) for a1 in range(-2, 3) for a2 in range(-2, 3)
                 if a1 < a2][:5]
        for a1, a2 in pairs:
            p = IntPolynomial([r * r, a1, 1]) * IntPolynomial([r * r, a2, 1])
            equal.append(p)
    assert len(known) == 25 and len(equal) == 25
    return known, equal


def test_equal_modulus_constructed_corpus():
    known, equal = _equal_modulus_cases()
    for p, gap in known:
        res = measure(p, "abssep")
        assert res.value_lo <= gap <= res.value_hi
        assert res.value_hi - res.value_lo < mp.mpf("1e-15") * gap
    for p in equal:
        # every cross-factor pair has exactly equal moduli: requires a
        # certified zero decision, never a refinement loop
        with pytest.raises(NoQualifyingPairError):
            measure(p, "abssep")


# ---------------------------------------------------------------------
# structural verification suites at full size
# ---------------------------------------------------------------------

def test_suite_aux_integrality():
    assert verifysuite.suite_aux_integrality(200)


def test_suite_cauchy():
    assert verifysuite.suite_cauchy(1000)


def test_suite_threshold_soundness_full_corpus():
    assert verifysuite.suite_threshold_soundness(3, 10, jobs=JOBS)


def test_suite_invariance():
    assert verifysuite.suite_invariance(60)


def test_suite_series_identities():
    assert verifysuite.suite_series_identities()
