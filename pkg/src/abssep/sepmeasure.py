"""The separation measures, with certified zero/nonzero decisions.

Every pairwise quantity is enclosed from certified root balls.  A pair
whose enclosure cannot exclude 0 is decided by refinement against the
effective threshold tau of its class: once the enclosure width drops
below tau/4 while still straddling 0, the true gap is < tau and hence
provably 0, so the pair is certified EQUAL and excluded.  No heuristic
epsilon is ever involved in a zero decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import mpmath as mp

from . import auxpoly
from .auxpoly import COMPLEX_COMPLEX, REAL_COMPLEX, REAL_REAL
from .polycore import IntPolynomial, squarefree_part
from .rootfind import (PrecisionExceededError, RepeatedRootError,
                       RootFindError, certified_roots, has_repeated_root,
                       precision_ceiling_default)

MEASURES = ("sep", "abssep", "re_gap", "im_gap", "top_two_abs_gap")


class MeasureError(RootFindError):
    pass


class NoQualifyingPairError(MeasureError):
    """Every candidate pair has quantity exactly 0 (or none exists)."""


@dataclass(frozen=True)
class SeparationResult:
    measure: str
    value_lo: mp.mpf
    value_hi: mp.mpf
    witness: Tuple[int, int]
    quality: Optional[float]
    decided_nonzero: bool
    precision_bits: int

    @property
    def value(self) -> mp.mpf:
        return (self.value_lo + self.value_hi) / 2


def _pad(lo, hi, prec):
    eps = mp.mpf(2) ** (-prec + 8) * (1 + abs(hi))
    return lo - eps, hi + eps


def _eval_prec_limit(prec_ceiling):
    ceiling = (precision_ceiling_default() if prec_ceiling is None
               else prec_ceiling)
    # evaluation works on exact centers, so it may run somewhat past the
    # root-finding ceiling before giving up
    return 4 * ceiling


def _pair_class(bi, bj):
    if bi.is_real and bj.is_real:
        return REAL_REAL
    if bi.is_real or bj.is_real:
        return REAL_COMPLEX
    return COMPLEX_COMPLEX


def _quantity_interval(measure, bi, bj, prec):
    """Enclosure of the pair quantity, or None for structural exclusion
    (exact zero or exact conjugate handling)."""
    is_conj_pair = False
    if not bi.is_real and not bj.is_real:
        is_conj_pair = mp.mpc(bi.center) == mp.conj(mp.mpc(bj.center))
    if measure == "sep":
        d = abs(mp.mpc(bi.center) - mp.mpc(bj.center))
        return _pad(d - bi.radius - bj.radius, d + bi.radius + bj.radius, prec)
    if measure in ("abssep", "top_two_abs_gap"):
        if is_conj_pair:
            return None  # moduli exactly equal
        a_lo, a_hi = bi.abs_interval()
        b_lo, b_hi = bj.abs_interval()
        lo = max(a_lo - b_hi, b_lo - a_hi)
        hi = max(a_hi - b_lo, b_hi - a_lo)
        return _pad(max(lo, -hi), hi, prec)
    if measure == "re_gap":
        if is_conj_pair:
            return None  # real parts exactly equal
        a_lo, a_hi = bi.re_interval()
        b_lo, b_hi = bj.re_interval()
        lo = max(a_lo - b_hi, b_lo - a_hi)
        hi = max(a_hi - b_lo, b_hi - a_lo)
        return _pad(max(lo, -hi), hi, prec)
    if measure == "im_gap":
        if bi.is_real and bj.is_real:
            return None  # both zero
        a_lo, a_hi = bi.im_interval()
        b_lo, b_hi = bj.im_interval()
        lo = max(a_lo - b_hi, b_lo - a_hi)
        hi = max(a_hi - b_lo, b_hi - a_lo)
        return _pad(max(lo, -hi), hi, prec)
    raise MeasureError(f"unknown measure {measure!r}")


class _ThresholdCache:
    def __init__(self, p, measure, prec_ceiling):
        self.p = p
        self.measure = measure
        self.prec_ceiling = prec_ceiling
        self.warm = None            # latest RootSet of p, seeds build_aux
        self._cache = {}

    def get(self, pairclass) -> Fraction:
        if pairclass not in self._cache:
            self._cache[pairclass] = auxpoly.certified_gap_threshold(
                self.p, self.measure, pairclass, self.prec_ceiling,
                warm=self.warm)
        return self._cache[pairclass]


def measure(p: IntPolynomial, kind: str,
            prec_ceiling: Optional[int] = None,
            use_squarefree_part: bool = False,
            rel_tol=mp.mpf("1e-18")) -> SeparationResult:
    """Certified separation measure of the given kind.

    Conjugate pairs are excluded structurally for abssep and re_gap
    (their quantities are exactly zero) and included for im_gap, where
    they contribute 2|Im alpha| as in the record tables.
    """
    if kind not in MEASURES:
        raise MeasureError(f"unknown measure {kind!r}")
    if p.degree < 2:
        raise MeasureError("degree must be >= 2")
    if has_repeated_root(p):
        if not use_squarefree_part:
            raise RepeatedRootError(
                f"{p} has a repeated root (pass use_squarefree_part=True "
                "to measure the squarefree part)")
        p = squarefree_part(p)
        if p.degree < 2:
            raise NoQualifyingPairError("squarefree part has a single root")
    taus = _ThresholdCache(p, kind, prec_ceiling)
    target = mp.mpf("1e-18")
    rs = None
    eval_prec = 0
    while True:
        rs = certified_roots(p, target_radius=target,
                             start_prec=(rs.precision_bits if rs else 64),
                             prec_ceiling=prec_ceiling,
                             check_squarefree=False, warm=rs)
        # pair quantities must be evaluated at the precision the balls
        # were certified at, not the ambient working precision; the
        # evaluation precision also grows with every refinement pass so
        # enclosure widths shrink even when the balls are already exact
        # (radius 0) and the root finder never escalates.
        taus.warm = rs
        eval_prec = max(eval_prec, rs.precision_bits)
        if eval_prec > _eval_prec_limit(prec_ceiling):
            raise PrecisionExceededError(
                f"evaluation precision limit reached for {p}")
        with mp.workprec(eval_prec + 32):
            result = _evaluate(p, kind, rs, taus, eval_prec)
            if result == "refine":
                target = target * mp.mpf(2) ** -64
                eval_prec += 64
                continue
            values, equal_pairs = result
            if not values:
                raise NoQualifyingPairError(
                    f"no pair with nonzero {kind} for {p}")
            lo = min(v[0] for v in values)
            hi = min(v[1] for v in values)
            witness = min(values, key=lambda v: v[1])[2]
            if lo <= 0 or (hi - lo) > rel_tol * hi:
                target = target * mp.mpf(2) ** -64
                eval_prec += 64
                continue
            h = p.height
            q = None
            if h >= 2:
                mid = (lo + hi) / 2
                q = float(-mp.log(mid) / mp.log(h))
        return SeparationResult(kind, lo, hi, witness, q, True,
                                rs.precision_bits)


def _evaluate(p, kind, rs, taus, prec=None):
    """Per-pair enclosures with certified zero decisions; returns
    ("refine") when some pair is still undecided at this radius, else
    (qualifying values, certified-equal pairs)."""
    balls = rs.balls
    d = len(balls)
    if prec is None:
        prec = rs.precision_bits
    if kind == "top_two_abs_gap":
        return _evaluate_top_two(p, rs, taus, prec)
    values = []
    equal_pairs = []
    for i in range(d):
        for j in range(i + 1, d):
            q = _quantity_interval(kind, balls[i], balls[j], prec)
            if q is None:
                continue
            lo, hi = q
            if lo > 0:
                values.append((lo, hi, (i, j)))
                continue
            tau = taus.get(_pair_class(balls[i], balls[j]))
            # 0.99: guards the to-nearest rounding of the exact rational
            tau_f = mp.mpf(tau.numerator) / tau.denominator * mp.mpf("0.99")
            if hi < tau_f or hi - lo < tau_f / 4:
                equal_pairs.append((i, j))  # certified exact zero
                continue
            return "refine"
    return values, equal_pairs


def _evaluate_top_two(p, rs, taus, prec=None):
    """Gap between the two largest distinct absolute values: certified
    ties are collapsed before taking the gap to the next modulus."""
    balls = rs.balls
    d = len(balls)
    if prec is None:
        prec = rs.precision_bits
    # union-find over certified-equal moduli
    parent = list(range(d))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pair_state = {}
    for i in range(d):
        for j in range(i + 1, d):
            q = _quantity_interval("abssep", balls[i], balls[j], prec)
            if q is None:
                pair_state[(i, j)] = "equal"
                parent[find(i)] = find(j)
                continue
            lo, hi = q
            if lo > 0:
                pair_state[(i, j)] = (lo, hi)
                continue
            tau = taus.get(_pair_class(balls[i], balls[j]))
            tau_f = mp.mpf(tau.numerator) / tau.denominator * mp.mpf("0.99")
            if hi < tau_f or hi - lo < tau_f / 4:
                pair_state[(i, j)] = "equal"
                parent[find(i)] = find(j)
            else:
                return "refine"
    classes = {}
    for i in range(d):
        classes.setdefault(find(i), []).append(i)
    if len(classes) < 2:
        return [], [k for k, v in pair_state.items() if v == "equal"]
    # representative per class: tightest modulus enclosure
    reps = []
    for members in classes.values():
        rep = min(members, key=lambda i: balls[i].radius)
        reps.append(rep)
    reps.sort(key=lambda i: -abs(mp.mpc(balls[i].center)))
    i, j = reps[0], reps[1]
    lo, hi = _quantity_interval("abssep", balls[i], balls[j], prec)
    return [(lo, hi, (i, j))], \
        [k for k, v in pair_state.items() if v == "equal"]


def quality(p: IntPolynomial, kind: str, **kw) -> float:
    """-ln(value)/ln(height); raises for height 1."""
    if p.height < 2:
        raise MeasureError("quality undefined for height < 2")
    res = measure(p, kind, **kw)
    return res.quality
