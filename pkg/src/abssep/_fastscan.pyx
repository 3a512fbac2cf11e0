# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scanning kernel.

Same contract as ``_scan_py.scan_slice``: enumerate one
leading-coefficient slice of canonical primitive polynomials, solve
roots in double precision, track per-measure minimal positive pair
gaps, and report top-k candidates plus polynomials flagged for
certified review.
"""

from libc.math cimport cos, exp, fabs, log, sin

MEASURES = ("sep", "abssep", "re_gap", "im_gap")

DEF MAXD = 12

cdef double SURE_REL = 1e-9
cdef double AMBIG_REL = 1e-6


cdef inline double _cabs2(double re, double im) nogil:
    return re * re + im * im


cdef int _aberth(long* a, int d, double complex* z) nogil:
    """Roots of sum a[i] X^i into z[0..d-1]; returns 1 on convergence."""
    cdef int i, j, it
    cdef double r, maxc, scale, ac
    cdef double complex p, dp, newton, s, diff, denom, corr
    cdef double maxco = 0.0
    for i in range(d + 1):
        if fabs(<double> a[i]) > maxco:
            maxco = fabs(<double> a[i])
    r = 1.0 + maxco / fabs(<double> a[d])
    cdef double theta
    for i in range(d):
        theta = 6.283185307179586 * i / d + 0.397
        z[i] = r * (cos(theta) + 1j * sin(theta)) * (1.0 + i / (17.0 * d))
    for it in range(80):
        maxc = 0.0
        scale = 1.0
        for i in range(d):
            ac = abs(z[i])
            if ac > scale:
                scale = ac
            p = a[d]
            dp = 0
            for j in range(d - 1, -1, -1):
                dp = dp * z[i] + p
                p = p * z[i] + a[j]
            if p == 0:
                continue
            if dp == 0:
                z[i] = z[i] + 1e-7 * scale * (1 + 1j)
                maxc = 1.0
                continue
            newton = p / dp
            s = 0
            for j in range(d):
                if j != i:
                    diff = z[i] - z[j]
                    if diff == 0:
                        diff = 1e-14 * scale
                    s = s + 1.0 / diff
            denom = 1.0 - newton * s
            if denom != 0:
                corr = newton / denom
            else:
                corr = newton
            z[i] = z[i] - corr
            ac = abs(corr)
            if ac > maxc:
                maxc = ac
        if maxc < 1e-13 * scale:
            return 1
    return 0


cdef inline long _labs(long x) nogil:
    return x if x >= 0 else -x


cdef long _gcd(long x, long y) nogil:
    cdef long t
    while y:
        t = x % y
        x = y
        y = t
    return x


cdef int _is_canonical(long* a, int d) nogil:
    """Lexicographic minimality against the reflected representative
    with positive leading coefficient (mirror of polycore)."""
    cdef int sign = 1 if d % 2 == 0 else -1
    cdef int i
    cdef long b
    for i in range(d + 1):
        if i % 2 == 0:
            b = a[i] * sign
        else:
            b = -a[i] * sign
        if b != a[i]:
            return 1 if a[i] < b else 0
    return 1


class _TopK:
    __slots__ = ("k", "items", "extras")

    def __init__(self, k):
        self.k = k
        self.items = []
        self.extras = []

    def offer(self, value, coeffs, keep_always):
        if keep_always:
            self.extras.append((value, coeffs))
        items = self.items
        if len(items) < self.k or value < items[len(items) - 1][0]:
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


def scan_slice(int degree, int max_height, int lead, int top_k,
               min_quality=None, double band=1e-7):
    """See ``_scan_py.scan_slice``; identical contract and semantics."""
    if degree < 1 or degree > MAXD:
        raise ValueError("degree out of supported range")
    if not (1 <= lead <= max_height):
        raise ValueError("leading coefficient outside slice range")
    cdef int d = degree
    cdef long h = max_height
    cdef long a[MAXD + 1]
    cdef double complex z[MAXD]
    cdef int is_real[MAXD]
    cdef int real_doubt[MAXD]
    cdef double mins[4]
    cdef int have[4]
    cdef int sus[4]
    cdef int i, j, m, conv, conj_pair, conj_doubt
    cdef long g
    cdef double scale, sure, ambig, v, dc, ai
    cdef double keep_thr
    cdef long count = 0
    cdef double mq = 0.0
    cdef int has_mq = 0
    if min_quality is not None:
        mq = min_quality
        has_mq = 1
    # keep threshold per height value
    cdef double thr_by_h[4097]
    cdef long hh
    if h > 4096:
        raise ValueError("height out of supported range")
    for hh in range(h + 1):
        if has_mq and hh >= 2:
            thr_by_h[hh] = exp(-mq * log(<double> hh))
        else:
            thr_by_h[hh] = 0.0

    best = {mm: _TopK(top_k) for mm in MEASURES}
    suspicious = {mm: [] for mm in MEASURES}
    sus_seen = {mm: set() for mm in MEASURES}
    # C-visible k-th thresholds to avoid Python calls in the hot path
    cdef double kth[4]
    cdef int nitems[4]
    for m in range(4):
        kth[m] = 0.0
        nitems[m] = 0

    for i in range(d):
        a[i] = -h
    a[d] = lead

    cdef long height
    cdef int carry
    while True:
        # primitivity
        g = 0
        for i in range(d + 1):
            g = _gcd(g, _labs(a[i]))
            if g == 1:
                break
        if g == 1 and _is_canonical(a, d):
            count += 1
            conv = _aberth(a, d, z)
            tup = None
            if not conv:
                tup = tuple([a[i] for i in range(d + 1)])
                for mm in MEASURES:
                    if tup not in sus_seen[mm]:
                        sus_seen[mm].add(tup)
                        suspicious[mm].append(list(tup))
            else:
                scale = 1.0
                for i in range(d):
                    v = abs(z[i])
                    if v > scale:
                        scale = v
                sure = SURE_REL * scale
                ambig = AMBIG_REL * scale
                for i in range(d):
                    ai = fabs(z[i].imag)
                    is_real[i] = 1 if ai < sure else 0
                    real_doubt[i] = 1 if (ai >= sure and ai < ambig) else 0
                height = 0
                for i in range(d + 1):
                    if _labs(a[i]) > height:
                        height = _labs(a[i])
                keep_thr = thr_by_h[height]
                for m in range(4):
                    have[m] = 0
                    sus[m] = 0
                    mins[m] = 0.0
                for i in range(d):
                    for j in range(i + 1, d):
                        dc = abs(z[i] - z[j].conjugate())
                        conj_pair = (is_real[i] == 0 and is_real[j] == 0
                                     and dc < sure)
                        conj_doubt = 1 if (dc >= sure and dc < ambig) else 0
                        # sep
                        v = abs(z[i] - z[j])
                        if v < band:
                            sus[0] = 1
                        elif have[0] == 0 or v < mins[0]:
                            mins[0] = v
                            have[0] = 1
                        # abssep
                        if not conj_pair:
                            v = fabs(abs(z[i]) - abs(z[j]))
                            if conj_doubt or real_doubt[i] or real_doubt[j]:
                                sus[1] = 1
                            if v < band:
                                sus[1] = 1
                            elif have[1] == 0 or v < mins[1]:
                                mins[1] = v
                                have[1] = 1
                        # re_gap
                        if not conj_pair:
                            v = fabs(z[i].real - z[j].real)
                            if conj_doubt:
                                sus[2] = 1
                            if v < band:
                                sus[2] = 1
                            elif have[2] == 0 or v < mins[2]:
                                mins[2] = v
                                have[2] = 1
                        # im_gap
                        if not (is_real[i] and is_real[j]):
                            v = fabs(z[i].imag - z[j].imag)
                            if real_doubt[i] or real_doubt[j]:
                                sus[3] = 1
                            if v < band:
                                sus[3] = 1
                            elif have[3] == 0 or v < mins[3]:
                                mins[3] = v
                                have[3] = 1
                for m in range(4):
                    if sus[m]:
                        if tup is None:
                            tup = tuple([a[i] for i in range(d + 1)])
                        mm = MEASURES[m]
                        if tup not in sus_seen[mm]:
                            sus_seen[mm].add(tup)
                            suspicious[mm].append(list(tup))
                    if have[m] and (nitems[m] < top_k or mins[m] < kth[m]
                                    or mins[m] < keep_thr):
                        if tup is None:
                            tup = tuple([a[i] for i in range(d + 1)])
                        tk = best[MEASURES[m]]
                        tk.offer(mins[m], tup, mins[m] < keep_thr)
                        nitems[m] = len(tk.items)
                        kth[m] = tk.items[len(tk.items) - 1][0]
        # odometer
        carry = 1
        for i in range(d):
            if a[i] < h:
                a[i] += 1
                carry = 0
                break
            a[i] = -h
        if carry:
            break

    return {
        "measures": {mm: [(v, list(c)) for v, c in
                          sorted(dict(((vv, tuple(cc)), None) for vv, cc
                                      in best[mm].items + best[mm].extras))]
                     for mm in MEASURES},
        "suspicious": {mm: sorted(suspicious[mm]) for mm in MEASURES},
        "count": count,
    }
