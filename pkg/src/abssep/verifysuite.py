"""Property-based verification suites (the ``verify`` subcommand).

Each suite checks an invariant that must hold for *every* instance, so
a pass is evidence of soundness rather than agreement with any single
tabulated value:

- auxiliary polynomials produced by interval resultants are integral;
- the Cauchy bound really bounds every root modulus from below;
- every certified nonzero pair gap is at least its class threshold tau
  (threshold soundness over the whole degree-3, height<=10 corpus);
- sep(P) * H^(d-1) stays positive, with the corpus minimum reported;
- all measures are invariant under scaling and the symmetry orbit;
- the exact perturbation-series identities hold.
"""

from __future__ import annotations

import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import mpmath as mp

from . import auxpoly, perturb, sepmeasure
from .auxpoly import (ALL_KINDS, COMPLEX_COMPLEX, REAL_COMPLEX, REAL_REAL,
                      AuxError, build_aux, cauchy_lower_bound,
                      certified_gap_threshold)
from .polycore import IntPolynomial, orbit
from .rootfind import certified_roots, has_repeated_root
from .search import enumerate_slice
from .sepmeasure import measure


def _random_poly(rng, max_degree, max_height, min_degree=2):
    while True:
        d = rng.randint(min_degree, max_degree)
        coeffs = [rng.randint(-max_height, max_height) for _ in range(d)]
        coeffs.append(rng.randint(1, max_height))
        p = IntPolynomial(coeffs)
        if p.degree == d:
            return p


def suite_aux_integrality(samples=200, seed=7, log=lambda s: None):
    """Interval-resultant auxiliary polynomials must round to integers
    for every applicable kind (build_aux raises if the enclosure does
    not pin an integer)."""
    rng = random.Random(seed)
    built = 0
    while built < samples:
        p = _random_poly(rng, 5, 30)
        if has_repeated_root(p):
            continue
        for kind in ALL_KINDS:
            try:
                aux = build_aux(p, kind)
            except AuxError:
                continue            # kind not applicable at this degree
            if aux.poly.degree < 0:
                return False
        built += 1
    log(f"checked {built} random polynomials x all applicable kinds")
    return True


def suite_cauchy(samples=1000, seed=11, log=lambda s: None):
    """cauchy_lower_bound must bound every root modulus from below
    (verified against certified root balls)."""
    rng = random.Random(seed)
    done = 0
    while done < samples:
        p = _random_poly(rng, 5, 30)
        if p.coeffs[0] == 0 or has_repeated_root(p):
            continue
        b = cauchy_lower_bound(p)
        bf = mp.mpf(b.numerator) / b.denominator
        rs = certified_roots(p)
        for ball in rs.balls:
            if not abs(mp.mpc(ball.center)) + ball.radius >= bf:
                return False
            if abs(mp.mpc(ball.center)) - ball.radius < bf * mp.mpf("0.999999"):
                return False
        done += 1
    log(f"checked {done} random polynomials")
    return True


_GAP_MEASURES = ("sep", "abssep", "re_gap", "im_gap")


def _pairclass(bi, bj):
    if bi.is_real and bj.is_real:
        return REAL_REAL
    if bi.is_real or bj.is_real:
        return REAL_COMPLEX
    return COMPLEX_COMPLEX


def _threshold_slice(args):
    """One leading-coefficient slice of the threshold-soundness /
    Mahler corpus check; returns (ok, n, min_mahler, failures)."""
    degree, max_height, lead = args
    ok = True
    n = 0
    min_mahler = None
    failures = []
    for p in enumerate_slice(degree, max_height, lead):
        if has_repeated_root(p):
            continue
        n += 1
        rs = certified_roots(p)
        taus = {}
        balls = rs.balls
        prec = rs.precision_bits
        sep_lo = None
        with mp.workprec(prec + 32):
            for m in _GAP_MEASURES:
                for i in range(len(balls)):
                    for j in range(i + 1, len(balls)):
                        q = sepmeasure._quantity_interval(
                            m, balls[i], balls[j], prec)
                        if q is None:
                            continue
                        lo, hi = q
                        if not lo > 0:
                            if m == "sep":
                                # roots are distinct, so a straddling
                                # sep enclosure just needs refinement
                                lo = measure(p, "sep").value_lo
                            else:
                                # near-zero pair: the certified-equality
                                # machinery owns this decision
                                continue
                        if m == "sep" and (sep_lo is None or lo < sep_lo):
                            sep_lo = lo
                        cls = _pairclass(balls[i], balls[j])
                        key = (m, cls)
                        if key not in taus:
                            try:
                                taus[key] = certified_gap_threshold(
                                    p, m, cls, warm=rs)
                            except AuxError:
                                taus[key] = None
                        tau = taus[key]
                        if tau is None:
                            continue
                        tau_f = mp.mpf(tau.numerator) / tau.denominator
                        if not lo >= tau_f:
                            # loose enclosure or genuine violation:
                            # re-measure with certification
                            res = measure(p, m)
                            if res.value_lo < tau_f:
                                ok = False
                                failures.append((p.coeffs, m, cls))
            # Mahler-style consistency on the certified sep enclosure
            if sep_lo is not None:
                mah = sep_lo * mp.mpf(p.height) ** (p.degree - 1)
                if not mah > 0:
                    ok = False
                    failures.append((p.coeffs, "mahler", ""))
                if min_mahler is None or mah < min_mahler:
                    min_mahler = mah
    return ok, n, (None if min_mahler is None else mp.nstr(min_mahler, 10)), \
        failures


def suite_threshold_soundness(degree=3, max_height=10, jobs=1,
                              log=lambda s: None):
    """Every certified nonzero pair gap >= its class threshold, over
    the full canonical corpus; also reports the corpus minimum of
    sep(P) * H^(d-1)."""
    args = [(degree, max_height, lead)
            for lead in range(1, max_height + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_threshold_slice, args))
    else:
        results = [_threshold_slice(a) for a in args]
    ok = all(r[0] for r in results)
    total = sum(r[1] for r in results)
    mins = [mp.mpf(r[2]) for r in results if r[2] is not None]
    for r in results:
        for f in r[3]:
            log(f"violation: {f}")
    log(f"checked {total} polynomials; corpus min of "
        f"sep*H^(d-1) = {mp.nstr(min(mins), 6)}")
    return ok


def suite_invariance(samples=60, seed=13, log=lambda s: None):
    """All measures agree across the symmetry orbit and under integer
    scaling (enclosures of equal quantities must overlap)."""
    rng = random.Random(seed)
    done = 0
    while done < samples:
        p = _random_poly(rng, 4, 10)
        if has_repeated_root(p):
            continue
        for m in _GAP_MEASURES:
            try:
                base = measure(p, m)
            except sepmeasure.NoQualifyingPairError:
                continue
            variants = list(orbit(p)) + [p * 3]
            for v in variants:
                res = measure(v, m)
                if res.value_hi < base.value_lo or \
                        res.value_lo > base.value_hi:
                    log(f"mismatch: {p.coeffs} vs {v.coeffs} on {m}")
                    return False
        done += 1
    log(f"checked {done} random polynomials x 4 measures x orbit+scale")
    return True


def suite_series_identities(log=lambda s: None):
    """Exact perturbation-series identities for the reference data."""
    F = Fraction
    x1 = perturb.invert_series(perturb.R4, perturb.Q4, F(1), 4)
    if [x1[k] for k in range(5)] != [F(1), F(-1), F(-2), F(-11, 2),
                                     F(-71, 4)]:
        return False
    # residual of substituting the series back: all computable orders 0
    resid = perturb.compose_residual(perturb.R4, perturb.Q4, x1)
    if any(c != 0 for c in resid):
        return False
    # squared-modulus coefficients are real and the reference
    # cancellation orders hold
    if perturb.cancellation_order(perturb.R4, perturb.Q4,
                                  (F(1), perturb.OMEGA_I), 4) is not None:
        return False
    if perturb.cancellation_order(perturb.R4, perturb.Q4,
                                  (F(1), perturb.OMEGA_I), 5) != 5:
        return False
    if not perturb.check_other_roots_deg6():
        return False
    log("series coefficients, residual, and cancellation orders exact")
    return True


SUITES = ("aux_integrality", "cauchy", "threshold_soundness",
          "invariance", "series_identities")


def run_all(jobs: int = 1, out=sys.stdout, quick: bool = False) -> bool:
    """Run every suite; prints one PASS/FAIL line per suite."""
    def log(s):
        print(f"    {s}", file=out)

    all_ok = True
    plan = [
        ("aux_integrality",
         lambda: suite_aux_integrality(40 if quick else 200, log=log)),
        ("cauchy",
         lambda: suite_cauchy(100 if quick else 1000, log=log)),
        ("threshold_soundness",
         lambda: suite_threshold_soundness(
             3, 4 if quick else 10, jobs=jobs, log=log)),
        ("invariance",
         lambda: suite_invariance(12 if quick else 60, log=log)),
        ("series_identities",
         lambda: suite_series_identities(log=log)),
    ]
    for name, fn in plan:
        ok = fn()
        all_ok = all_ok and ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}", file=out)
    return all_ok
