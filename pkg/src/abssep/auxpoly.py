"""Auxiliary integer polynomials from symmetric functions of roots, and
the fully effective gap thresholds they yield.

The construction is numeric-then-round: the product over the prescribed
index tuples is formed in interval arithmetic seeded with certified root
balls, scaled by the appropriate power of the leading coefficient, and
each coefficient enclosure is required to pin down a unique integer
(width < 1/2 and midpoint within 1/4 of it).  Since the scaled product
is a symmetric function with integer coefficients, the rounding is then
exact; if an enclosure is too wide the working precision is doubled and
the construction retried.

Applying the Cauchy bound 1/(1+H) to the (zero-root-stripped) auxiliary
polynomial turns each asymptotic ">>" bound into an explicit positive
rational threshold below which a pairwise gap is provably zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath as mp
from mpmath import iv

from .polycore import IntPolynomial, PolynomialError, reciprocal
from .rootfind import (PrecisionExceededError, certified_roots,
                       precision_ceiling_default)


class AuxError(ValueError):
    pass


@dataclass(frozen=True)
class AuxKind:
    """One of the seven named symmetric root-function constructions."""
    tag: str
    min_degree: int

    def per_root_degree(self, d: int) -> int:
        """Degree in each root; also the exponent of a_d in the scaling."""
        if d < self.min_degree:
            raise AuxError(f"{self.tag} needs degree >= {self.min_degree}, got {d}")
        if self.tag in ("M_diff", "M_sum"):
            return 2 * (d - 1)
        if self.tag == "R_realcomplex":
            return 2 * (d - 1) * (d - 2)
        if self.tag in ("S_complexcomplex", "T2_partdiff"):
            return (d - 1) * (d - 2) * (d - 3)
        if self.tag == "T1_repart":
            k = 3 * (d - 1) * (d - 2)
            assert k % 2 == 0
            return k // 2
        if self.tag == "T3_impart":
            # the product over unordered pairs is not symmetric; we use
            # the symmetrized product over ordered pairs, doubling the
            # per-root degree
            return 6 * (d - 1) * (d - 2)
        raise AuxError(f"unknown kind {self.tag}")

    def root_values(self, b):
        """The multiset of aux-polynomial roots as functions of the root
        enclosures b[0..d-1] (any ring with +,-,*)."""
        d = len(b)
        idx = range(d)
        vals = []
        if self.tag == "M_diff":
            for i, j in itertools.combinations(idx, 2):
                vals.append((b[i] - b[j]) ** 2)
        elif self.tag == "M_sum":
            for i, j in itertools.combinations(idx, 2):
                vals.append((b[i] + b[j]) ** 2)
        elif self.tag == "R_realcomplex":
            for i, j in itertools.combinations(idx, 2):
                for k in idx:
                    if k != i and k != j:
                        vals.append(b[k] * b[k] - b[i] * b[j])
        elif self.tag == "S_complexcomplex":
            for (i, j), (k, l) in itertools.combinations(
                    itertools.combinations(idx, 2), 2):
                if len({i, j, k, l}) == 4:
                    vals.append((b[i] * b[j] - b[k] * b[l]) ** 2)
        elif self.tag == "T1_repart":
            for i, j in itertools.combinations(idx, 2):
                for k in idx:
                    if k != i and k != j:
                        vals.append(b[i] + b[j] - 2 * b[k])
        elif self.tag == "T2_partdiff":
            for (i, j), (k, l) in itertools.combinations(
                    itertools.combinations(idx, 2), 2):
                if len({i, j, k, l}) == 4:
                    vals.append((b[i] + b[j] - b[k] - b[l]) ** 2)
        elif self.tag == "T3_impart":
            for i, j in itertools.permutations(idx, 2):
                for k in idx:
                    if k != i and k != j:
                        vals.append((b[i] - b[j] - 2 * b[k]) ** 2)
        else:
            raise AuxError(f"unknown kind {self.tag}")
        return vals


M_DIFF = AuxKind("M_diff", 2)
M_SUM = AuxKind("M_sum", 2)
R_REALCOMPLEX = AuxKind("R_realcomplex", 3)
S_COMPLEXCOMPLEX = AuxKind("S_complexcomplex", 4)
T1_REPART = AuxKind("T1_repart", 3)
T2_PARTDIFF = AuxKind("T2_partdiff", 4)
T3_IMPART = AuxKind("T3_impart", 3)

ALL_KINDS = (M_DIFF, M_SUM, R_REALCOMPLEX, S_COMPLEXCOMPLEX,
             T1_REPART, T2_PARTDIFF, T3_IMPART)
KINDS_BY_TAG = {k.tag: k for k in ALL_KINDS}


@dataclass(frozen=True)
class AuxPolynomial:
    kind: AuxKind
    source: IntPolynomial
    poly: IntPolynomial

    @property
    def height(self) -> int:
        return self.poly.height


def _ivc(re, im=0):
    return iv.mpc(iv.mpf(re), iv.mpf(im))


def _ball_enclosure(ball):
    c = mp.mpc(ball.center)
    r = ball.radius
    re = iv.mpf([c.real - r, c.real + r])
    if ball.is_real:
        im = iv.mpf(0)
    else:
        im = iv.mpf([c.imag - r, c.imag + r])
    return iv.mpc(re, im)


def _poly_from_roots_iv(vals):
    coeffs = [_ivc(1)]
    for s in vals:
        nxt = [_ivc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= s * c
        coeffs = nxt
    return coeffs


def _pin_integer(x_iv):
    """The unique integer certified by the real interval, or None."""
    lo, hi = mp.mpf(x_iv.a), mp.mpf(x_iv.b)
    if hi - lo >= mp.mpf("0.5"):
        return None
    mid = (lo + hi) / 2
    n = int(mp.nint(mid))
    if abs(mid - n) >= mp.mpf("0.25"):
        return None
    if not (lo <= n <= hi):
        return None
    return n


def build_aux(p: IntPolynomial, kind: AuxKind,
              prec_ceiling: Optional[int] = None,
              warm=None) -> AuxPolynomial:
    """The integer polynomial whose roots are the kind's symmetric
    function of the roots of P, scaled by the matching power of the
    leading coefficient.

    ``warm`` may carry an existing RootSet of P to seed the root
    finder; the result is unchanged.

    Raises AuxError for too-small degree and PrecisionExceededError if
    integrality cannot be validated below the ceiling.
    """
    d = p.degree
    k = kind.per_root_degree(d)
    if prec_ceiling is None:
        prec_ceiling = precision_ceiling_default()
    scale = p.coeffs[-1] ** k
    prec = 64
    rootset = warm if (warm is not None and warm.source == p) else None
    while prec <= prec_ceiling:
        rootset = certified_roots(p, target_radius=mp.mpf(2) ** (-prec // 2),
                                  start_prec=prec, prec_ceiling=prec_ceiling,
                                  check_squarefree=False, warm=rootset)
        old = iv.prec
        iv.prec = max(rootset.precision_bits, prec) + 30
        try:
            with mp.workprec(iv.prec):
                balls = [_ball_enclosure(b) for b in rootset.balls]
                vals = kind.root_values(balls)
                coeffs = _poly_from_roots_iv(vals)
                ints = []
                ok = True
                for c in coeffs:
                    if not (c.imag.a <= 0 <= c.imag.b):
                        ok = False
                        break
                    n = _pin_integer(c.real * _ivc(scale).real)
                    if n is None:
                        ok = False
                        break
                    ints.append(n)
        finally:
            iv.prec = old
        if ok:
            return AuxPolynomial(kind, p, IntPolynomial(ints))
        prec *= 2
    raise PrecisionExceededError(
        f"could not validate integrality of {kind.tag} for {p}")


def cauchy_lower_bound(p: IntPolynomial) -> Fraction:
    """Every nonzero root of P has modulus >= 1/(1 + height(P))."""
    if p.is_zero():
        raise PolynomialError("zero polynomial")
    return Fraction(1, 1 + p.height)


def aux_root_lower_bound(aux: AuxPolynomial) -> Fraction:
    """Cauchy bound applied after dividing out zero roots of the aux
    polynomial (equal-value coincidences produce zero roots which the
    bound machinery must exclude)."""
    stripped = aux.poly.strip_zero_roots()
    if stripped.degree <= 0:
        # aux is a power of X (or constant): no nonzero roots to bound
        return Fraction(1)
    return cauchy_lower_bound(stripped)


# ---------------------------------------------------------------------
# Effective thresholds per measure and pair class
# ---------------------------------------------------------------------

REAL_REAL = "real-real"
REAL_COMPLEX = "real-complex"
COMPLEX_COMPLEX = "complex-complex"


def _tau(p, kind, prec_ceiling, warm=None):
    return aux_root_lower_bound(build_aux(p, kind, prec_ceiling, warm=warm))


def _tau_with_reciprocal(p, kind, prec_ceiling, warm=None):
    """min(tau/2, tau'/6): the direct branch covers pairs with
    |alpha|+|beta| <= 2, the reciprocal branch (with its factor-6 bound)
    the rest; pairs with gap > 1 exceed any tau <= 1/2 anyway."""
    tau_direct = _tau(p, kind, prec_ceiling, warm) / 2
    ps = p.strip_zero_roots()
    if ps.degree >= kind.min_degree:
        tau_recip = _tau(reciprocal(ps), kind, prec_ceiling) / 6
        return min(tau_direct, tau_recip)
    return tau_direct


def certified_gap_threshold(p: IntPolynomial, measure: str, pairclass: str,
                            prec_ceiling: Optional[int] = None,
                            warm=None) -> Fraction:
    """An explicit positive rational tau: any pair of roots of P in the
    given class has its measure-quantity either exactly 0 or >= tau.

    Square roots are absorbed using t <= 1 => sqrt(t) >= t, so the
    returned tau is valid for the unsquared quantity directly.
    """
    d = p.degree
    if measure == "top_two_abs_gap":
        measure = "abssep"
    if measure == "sep":
        return _tau(p, M_DIFF, prec_ceiling, warm)
    if measure == "abssep":
        if pairclass == REAL_REAL:
            return min(_tau(p, M_DIFF, prec_ceiling, warm),
                       _tau(p, M_SUM, prec_ceiling, warm))
        if pairclass == REAL_COMPLEX:
            if d < 3:
                raise AuxError("real-complex abssep needs degree >= 3")
            return _tau_with_reciprocal(p, R_REALCOMPLEX, prec_ceiling, warm)
        if pairclass == COMPLEX_COMPLEX:
            if d < 4:
                raise AuxError("complex-complex abssep needs degree >= 4")
            return _tau_with_reciprocal(p, S_COMPLEXCOMPLEX, prec_ceiling, warm)
    if measure == "re_gap":
        if pairclass == REAL_REAL:
            return _tau(p, M_DIFF, prec_ceiling, warm)
        if pairclass == REAL_COMPLEX:
            return _tau(p, T1_REPART, prec_ceiling, warm) / 2
        if pairclass == COMPLEX_COMPLEX:
            return _tau(p, T2_PARTDIFF, prec_ceiling, warm) / 2
    if measure == "im_gap":
        if pairclass == REAL_REAL:
            raise AuxError("imaginary parts of two real roots are equal")
        if pairclass == REAL_COMPLEX:
            return _tau(p, M_DIFF, prec_ceiling, warm) / 2
        if pairclass == COMPLEX_COMPLEX:
            tau = _tau(p, M_DIFF, prec_ceiling, warm) / 2
            if d >= 4:
                tau = min(tau, _tau(p, T2_PARTDIFF, prec_ceiling, warm) / 2)
            return tau
    raise AuxError(f"no threshold for measure={measure!r} class={pairclass!r}")


def exponent_of(measure: str, pairclass: str, d: int) -> int:
    """Theoretical exponent E with gap >> H^-E; exponents are stated
    per measure and pair class."""
    if pairclass == REAL_REAL:
        if measure == "im_gap":
            raise AuxError("no real-real imaginary-part gap")
        return d - 1
    if measure in ("abssep", "top_two_abs_gap"):
        if pairclass == REAL_COMPLEX:
            if d < 3:
                raise AuxError("needs degree >= 3")
            return 2 * (d - 1) * (d - 2)
        if pairclass == COMPLEX_COMPLEX:
            if d < 4:
                raise AuxError("needs degree >= 4")
            return (d - 1) * (d - 2) * (d - 3) // 2
    if measure in ("re_gap", "im_gap"):
        if pairclass == REAL_COMPLEX:
            if d < 3:
                raise AuxError("needs degree >= 3")
            e2 = 3 * (d - 1) * (d - 2)
            assert e2 % 2 == 0
            return e2 // 2
        if pairclass == COMPLEX_COMPLEX:
            if d < 4:
                raise AuxError("needs degree >= 4")
            return (d - 1) * (d - 2) * (d - 3) // 2
    if measure == "sep":
        return d - 1
    raise AuxError(f"no exponent for measure={measure!r} class={pairclass!r}")
