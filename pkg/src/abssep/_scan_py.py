"""Pure-Python scanning kernel.

Reference implementation of the fast filtering pass used by the search
module: enumerate one leading-coefficient slice of the canonical search
space, approximate all roots in double precision, and keep the best
candidates per measure.  The compiled extension implements the same
contract; import goes through ``_kernel`` which picks whichever is
available.

Values produced here are *filter* values only — every reported record
is re-measured with certified arithmetic downstream.  Pair quantities
that fall below the suspicion band (possible exact zeros, or possible
tiny records) are excluded from the filter value and the polynomial is
flagged for certified review instead.
"""

from __future__ import annotations

import cmath
from math import gcd

MEASURES = ("sep", "abssep", "re_gap", "im_gap")

# classification thresholds (relative to root magnitude scale):
# below SURE -> structural (real root / conjugate pair), between SURE
# and AMBIG -> undecidable in double precision, flag for review.
_SURE = 1e-9
_AMBIG = 1e-6


def _aberth_double(coeffs, warm=None):
    """All roots of the ascending integer-coefficient polynomial, in
    double precision; returns (roots, converged)."""
    d = len(coeffs) - 1
    lead = coeffs[-1]
    if warm is not None and len(warm) == d:
        z = list(warm)
    else:
        r = 1.0 + max(abs(c) for c in coeffs) / abs(lead)
        z = [r * cmath.exp(1j * (6.283185307179586 * k / d + 0.397))
             * (1.0 + k / (17.0 * d)) for k in range(d)]
    for _ in range(80):
        maxcorr = 0.0
        scale = 1.0
        for i in range(d):
            az = abs(z[i])
            if az > scale:
                scale = az
            p = complex(coeffs[-1])
            dp = 0j
            for c in reversed(coeffs[:-1]):
                dp = dp * z[i] + p
                p = p * z[i] + c
            if p == 0:
                continue
            if dp == 0:
                z[i] += 1e-7 * scale * (1 + 1j)
                maxcorr = 1.0
                continue
            newton = p / dp
            s = 0j
            for j in range(d):
                if j != i:
                    diff = z[i] - z[j]
                    if diff == 0:
                        diff = complex(1e-14 * scale)
                    s += 1.0 / diff
            denom = 1.0 - newton * s
            corr = newton / denom if denom != 0 else newton
            z[i] -= corr
            ac = abs(corr)
            if ac > maxcorr:
                maxcorr = ac
        if maxcorr < 1e-13 * scale:
            return z, True
    return z, False


def _is_canonical_tuple(coeffs):
    """Mirror of polycore.canonicalize restricted to primitive tuples
    with positive leading coefficient: lexicographically minimal versus
    the reflected representative with positive leading coefficient."""
    d = len(coeffs) - 1
    sign = 1 if d % 2 == 0 else -1
    for i, a in enumerate(coeffs):
        b = a * sign if i % 2 == 0 else -a * sign
        if b != coeffs[i]:
            return coeffs[i] < b
    return True


class _TopK:
    """Bounded ascending list of (value, coeffs) candidate entries,
    plus unbounded keepers below an absolute quality threshold."""

    def __init__(self, k):
        self.k = k
        self.items = []
        self.extras = []

    def offer(self, value, coeffs, keep_always):
        if keep_always:
            self.extras.append((value, coeffs))
        items = self.items
        if len(items) < self.k or value < items[-1][0]:
            lo, hi = 0, len(items)
            while lo < hi:
                mid = (lo + hi) // 2
                if items[mid][0] <= value:
                    lo = mid + 1
                else:
                    hi = mid
            items.insert(lo, (value, coeffs))
            if len(items) > self.k:
                items.pop()


def scan_slice(degree, max_height, lead, top_k, min_quality=None,
               band=1e-7):
    """Scan the slice of canonical representatives with the given
    leading coefficient.

    Returns ``{"measures": {m: [(value, coeffs), ...]},
    "suspicious": {m: [coeffs, ...]}, "count": n}`` where count is the
    number of polynomials measured.  Entries are kept when within the
    current top_k for their measure or when their filter quality
    -log(value)/log(height) exceeds ``min_quality``.
    """
    if not (1 <= lead <= max_height):
        raise ValueError("leading coefficient outside slice range")
    d = degree
    h = max_height
    best = {m: _TopK(top_k) for m in MEASURES}
    suspicious = {m: [] for m in MEASURES}
    sus_seen = {m: set() for m in MEASURES}
    count = 0
    coeffs = [-h] * d + [lead]
    warm = None
    import math
    logh_cache = {}
    while True:
        count += _scan_one(coeffs, d, best, suspicious, sus_seen, band,
                           min_quality, logh_cache, math)
        # odometer over a_0..a_{d-1}
        i = 0
        while i < d:
            if coeffs[i] < h:
                coeffs[i] += 1
                break
            coeffs[i] = -h
            i += 1
        if i == d:
            break
    return {
        "measures": {m: [(v, list(c)) for v, c in
                         sorted(dict(((vv, tuple(cc)), None) for vv, cc
                                     in best[m].items + best[m].extras))]
                     for m in MEASURES},
        "suspicious": {m: sorted(suspicious[m]) for m in MEASURES},
        "count": count,
    }


def _scan_one(coeffs, d, best, suspicious, sus_seen, band,
              min_quality, logh_cache, math):
    g = 0
    for a in coeffs:
        g = gcd(g, a if a >= 0 else -a)
        if g == 1:
            break
    if g != 1:
        return 0
    if not _is_canonical_tuple(coeffs):
        return 0
    roots, converged = _aberth_double(coeffs, None)
    tup = tuple(coeffs)
    if not converged:
        for m in MEASURES:
            _flag(suspicious, sus_seen, m, tup)
        return 1
    scale = max(1.0, max(abs(z) for z in roots))
    sure = _SURE * scale
    ambig = _AMBIG * scale
    is_real = []
    real_doubt = []
    for z in roots:
        ai = abs(z.imag)
        is_real.append(ai < sure)
        real_doubt.append(sure <= ai < ambig)
    height = max(abs(a) for a in coeffs)
    if min_quality is not None and height >= 2:
        logh = logh_cache.get(height)
        if logh is None:
            logh = math.log(height)
            logh_cache[height] = logh
        keep_thr = math.exp(-min_quality * logh)
    else:
        keep_thr = 0.0
    mins = {m: None for m in MEASURES}
    n = len(roots)
    for i in range(n):
        for j in range(i + 1, n):
            zi, zj = roots[i], roots[j]
            dc = abs(zi - zj.conjugate())
            conj_pair = (not is_real[i] and not is_real[j]
                         and dc < sure)
            conj_doubt = sure <= dc < ambig
            # sep
            v = abs(zi - zj)
            _consider("sep", v, band, mins, suspicious, sus_seen, tup,
                      False)
            # abssep
            v = abs(abs(zi) - abs(zj))
            if conj_pair:
                pass
            else:
                _consider("abssep", v, band, mins, suspicious,
                          sus_seen, tup, conj_doubt or real_doubt[i]
                          or real_doubt[j])
            # re_gap
            v = abs(zi.real - zj.real)
            if not conj_pair:
                _consider("re_gap", v, band, mins, suspicious,
                          sus_seen, tup, conj_doubt)
            # im_gap
            v = abs(zi.imag - zj.imag)
            if not (is_real[i] and is_real[j]):
                _consider("im_gap", v, band, mins, suspicious,
                          sus_seen, tup, real_doubt[i] or real_doubt[j])
    for m in MEASURES:
        v = mins[m]
        if v is not None:
            best[m].offer(v, tup, v < keep_thr)
    return 1


def _consider(m, v, band, mins, suspicious, sus_seen, tup, doubt):
    if v < band or doubt:
        _flag(suspicious, sus_seen, m, tup)
        if v < band:
            return
    cur = mins[m]
    if cur is None or v < cur:
        mins[m] = v


def _flag(suspicious, sus_seen, m, tup):
    if tup not in sus_seen[m]:
        sus_seen[m].add(tup)
        suspicious[m].append(list(tup))
