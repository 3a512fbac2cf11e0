"""Certified complex roots of integer polynomials.

Roots are approximated by a simultaneous Aberth-Ehrlich iteration at an
adaptively increased binary working precision, then certified a
posteriori with interval arithmetic: for any point z with P'(z) != 0,
the disk centered at z of radius d*|P(z)/P'(z)| contains at least one
root of P (this follows from P'/P being the sum of the 1/(z-alpha_i)).
When the d disks obtained from d approximations are pairwise disjoint,
each contains exactly one root.

Realness is certified geometrically rather than numerically: a disk
centered on the real axis is its own mirror image, so the unique root it
contains must equal its own conjugate; a disk with |Im center| > radius
cannot contain a real root.  Conjugate pairing is therefore structural
(roots are computed in the upper half plane and reflected), never a
post-hoc matching.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Union

import mpmath as mp
from mpmath import iv

from .polycore import IntPolynomial, rational_gcd_degree

DEFAULT_PRECISION_CEILING = 4096


def precision_ceiling_default() -> int:
    env = os.environ.get("ABSSEP_PRECISION_CEILING")
    return int(env) if env else DEFAULT_PRECISION_CEILING


class RootFindError(Exception):
    pass


class RepeatedRootError(RootFindError):
    """Isolation is impossible: gcd(P, P') is nonconstant."""


class PrecisionExceededError(RootFindError):
    """The adaptive loop hit the precision ceiling before certifying."""


REAL = "real"


@dataclass(frozen=True)
class RootBall:
    """A complex root with a certified error radius.

    The true root lies within ``radius`` of ``center``.  ``conjugate_index``
    is "real" for certified real roots, else the index of the paired
    conjugate ball in the owning RootSet.
    """
    center: Union[mp.mpf, mp.mpc]
    radius: mp.mpf
    conjugate_index: Union[int, str]

    @property
    def is_real(self) -> bool:
        return self.conjugate_index == REAL

    def abs_interval(self):
        """Certified enclosure (lo, hi) of |root| as mpf's (lo clipped at 0)."""
        m = abs(mp.mpc(self.center))
        lo = m - self.radius
        return (lo if lo > 0 else mp.mpf(0)), m + self.radius

    def re_interval(self):
        c = mp.mpc(self.center)
        return c.real - self.radius, c.real + self.radius

    def im_interval(self):
        c = mp.mpc(self.center)
        if self.is_real:
            return mp.mpf(0), mp.mpf(0)
        return c.imag - self.radius, c.imag + self.radius


@dataclass(frozen=True)
class RootSet:
    source: IntPolynomial
    balls: tuple
    precision_bits: int

    def __len__(self):
        return len(self.balls)


def has_repeated_root(p: IntPolynomial) -> bool:
    """Exact test: gcd(P, P') nonconstant over Q."""
    if p.degree < 1:
        raise RootFindError("degree must be >= 1")
    return rational_gcd_degree(p, p.derivative()) > 0


# ---------------------------------------------------------------------
# Aberth-Ehrlich at working precision
# ---------------------------------------------------------------------

def _horner2(coeffs, z):
    """(P(z), P'(z)) by a fused Horner pass."""
    p = coeffs[-1]
    dp = mp.mpc(0)
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _initial_points(coeffs, d):
    lead = abs(coeffs[-1])
    r = 1 + max(abs(c) for c in coeffs) / lead
    pts = []
    for k in range(d):
        theta = 2 * mp.pi * k / d + mp.mpf("0.397")
        pts.append(r * mp.exp(1j * theta) * (1 + mp.mpf(k) / (17 * d)))
    return pts


def _aberth(coeffs, warm=None, maxiter=None):
    """All roots of the polynomial with the given (mpc) coefficients.

    Returns the root list or None if the iteration failed to converge at
    the current working precision.
    """
    d = len(coeffs) - 1
    z = [mp.mpc(w) for w in warm] if warm and len(warm) == d \
        else _initial_points(coeffs, d)
    tol = mp.mpf(2) ** (-mp.mp.prec + 8)
    scale = max(mp.mpf(1), max(abs(w) for w in z))
    if maxiter is None:
        maxiter = 60 + mp.mp.prec // 2
    for _ in range(maxiter):
        maxcorr = mp.mpf(0)
        for i in range(d):
            p, dp = _horner2(coeffs, z[i])
            if p == 0:
                continue
            if dp == 0:
                z[i] += tol * scale * (1 + 1j)
                maxcorr = mp.inf
                continue
            newton = p / dp
            s = mp.mpc(0)
            for j in range(d):
                if j != i:
                    diff = z[i] - z[j]
                    if diff == 0:
                        diff = tol * scale
                    s += 1 / diff
            denom = 1 - newton * s
            corr = newton / denom if denom != 0 else newton
            z[i] -= corr
            if abs(corr) > maxcorr:
                maxcorr = abs(corr)
        if maxcorr < tol * scale:
            return z
    return None


def _newton_polish(coeffs, z, steps=3):
    for _ in range(steps):
        p, dp = _horner2(coeffs, z)
        if dp == 0:
            return z
        z = z - p / dp
    return z


def _newton_polish_real(coeffs_real, x, steps=4):
    for _ in range(steps):
        p = coeffs_real[-1]
        dp = mp.mpf(0)
        for c in reversed(coeffs_real[:-1]):
            dp = dp * x + p
            p = p * x + c
        if dp == 0:
            return x
        x = x - p / dp
    return x


# ---------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------

def _iv_abs(z):
    return iv.sqrt(z.real ** 2 + z.imag ** 2)


def _to_ivc(z):
    z = mp.mpc(z)
    return iv.mpc(iv.mpf(z.real), iv.mpf(z.imag))


def _certified_radius(int_coeffs, center, degree):
    """Rigorous upper bound on degree*|P(c)/P'(c)|, or None if P'(c)
    cannot be bounded away from 0."""
    c = _to_ivc(center)
    p = _to_ivc(int_coeffs[-1])
    dp = _to_ivc(0)
    for a in reversed(int_coeffs[:-1]):
        dp = dp * c + p
        p = p * c + _to_ivc(a)
    pa = _iv_abs(p)
    dpa = _iv_abs(dp)
    if dpa.a <= 0:
        return None
    return mp.mpf(degree) * mp.mpf(pa.b) / mp.mpf(dpa.a)


def _try_certify(p: IntPolynomial, centers_real, centers_upper, target):
    """Build certified balls from polished candidate centers, or return
    None if certification fails at the current precision."""
    d = p.degree
    int_coeffs = list(p.coeffs)
    balls = []
    # real balls first, then conjugate pairs (upper, lower).
    layout = [(x, REAL) for x in centers_real]
    for z in centers_upper:
        layout.append((z, "pair"))
    centers = []
    kinds = []
    for c, kind in layout:
        centers.append(c)
        kinds.append(kind)
        if kind == "pair":
            centers.append(mp.conj(c))
            kinds.append("pair")
    radii = []
    for c in centers:
        r = _certified_radius(int_coeffs, c, d)
        if r is None or not r < target:
            return None
        radii.append(r)
    # pairwise disjointness certifies one root per disk
    for i in range(d):
        for j in range(i + 1, d):
            if not abs(mp.mpc(centers[i]) - mp.mpc(centers[j])) > radii[i] + radii[j]:
                return None
    idx = 0
    out = []
    while idx < len(centers):
        if kinds[idx] == REAL:
            out.append(RootBall(centers[idx], radii[idx], REAL))
            idx += 1
        else:
            # nonreal disks must stay clear of the real axis
            if not abs(mp.mpc(centers[idx]).imag) > radii[idx]:
                return None
            if not abs(mp.mpc(centers[idx + 1]).imag) > radii[idx + 1]:
                return None
            k = len(out)
            out.append(RootBall(centers[idx], radii[idx], k + 1))
            out.append(RootBall(centers[idx + 1], radii[idx + 1], k))
            idx += 2
    return tuple(out)


def certified_roots(p: IntPolynomial,
                    target_radius=mp.mpf("1e-20"),
                    start_prec: int = 64,
                    prec_ceiling: Optional[int] = None,
                    check_squarefree: bool = True,
                    warm: Optional[RootSet] = None) -> RootSet:
    """All complex roots of P as pairwise disjoint certified balls of
    radius at most ``target_radius``.

    Deterministic for fixed inputs.  Raises RepeatedRootError for
    non-squarefree P and PrecisionExceededError if the ceiling (default
    4096 bits, override via ABSSEP_PRECISION_CEILING) is reached first.
    """
    if p.degree < 1:
        raise RootFindError("degree must be >= 1")
    if check_squarefree and has_repeated_root(p):
        raise RepeatedRootError(f"{p} has a repeated root")
    if prec_ceiling is None:
        prec_ceiling = precision_ceiling_default()
    target = mp.mpf(target_radius)
    prec = max(start_prec, 53)
    warm_roots = None
    if warm is not None:
        warm_roots = [mp.mpc(b.center) for b in warm.balls]
    while prec <= prec_ceiling:
        with mp.workprec(prec):
            coeffs = [mp.mpc(c) for c in p.coeffs]
            roots = _aberth(coeffs, warm=warm_roots)
            if roots is not None:
                roots = [_newton_polish(coeffs, z) for z in roots]
                balls = _classify_and_certify(p, coeffs, roots, target, prec)
                if balls is not None:
                    return RootSet(p, balls, prec)
                warm_roots = roots
        prec *= 2
    raise PrecisionExceededError(
        f"precision ceiling {prec_ceiling} reached for {p}")


def _classify_and_certify(p, coeffs, roots, target, prec):
    d = p.degree
    # candidates with tiny imaginary part are projected onto the real
    # axis; certification rejects wrong projections, and the threshold
    # shrinks with precision so true complex roots eventually escape it.
    thr = mp.mpf(2) ** (-prec // 4)
    coeffs_real = [mp.mpf(c) for c in p.coeffs]
    reals, upper = [], []
    for z in roots:
        if abs(z.imag) < thr * (1 + abs(z)):
            reals.append(_newton_polish_real(coeffs_real, z.real))
        elif z.imag > 0:
            upper.append(z)
    if len(reals) + 2 * len(upper) != d:
        return None
    reals.sort()
    upper.sort(key=lambda z: (z.real, z.imag))
    old_prec = iv.prec
    iv.prec = prec + 30
    try:
        return _try_certify(p, reals, upper, target)
    finally:
        iv.prec = old_prec
