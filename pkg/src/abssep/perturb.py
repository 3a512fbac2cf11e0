"""Exact perturbation series for roots of M*R(X) - Q(X).

Writing eps = 1/M, the root equation becomes R(X) = eps*Q(X).  Around a
simple root omega of R, the perturbed root X_omega(eps) is computed
order by order: with the series truncated at order k-1, the order-k
residual of R(x) - eps*Q(x) is linear in the next coefficient with slope
R'(omega).  All arithmetic is exact, either over Q, over a quadratic
field Q(sqrt(m)) (enough for every base root used: i, sqrt(-3),
sqrt(-63), ...), or over a sparse multivariate polynomial ring when the
coefficients of Q are kept symbolic.

Multiplying X_omega by its coefficient-conjugated series (the expansion
at the conjugate base root, valid because R and Q are real) gives the
exact expansion of |X_omega|^2, whose coefficients must come out real;
this is asserted, never rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import mpmath as mp

from .polycore import IntPolynomial, rational_gcd_degree


class PerturbError(ValueError):
    pass


# ---------------------------------------------------------------------
# Quadratic field elements a + b*sqrt(m)
# ---------------------------------------------------------------------

class QuadVal:
    """Exact element a + b*sqrt(m) of a quadratic field, m a nonsquare
    integer (negative m gives the imaginary quadratic fields used for
    the complex base roots)."""

    __slots__ = ("a", "b", "m")

    def __init__(self, a, b=0, m=0):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.m = m if self.b else 0

    def _coerce(self, other):
        if isinstance(other, QuadVal):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadVal(other)
        return None

    def _join(self, other):
        if self.m and other.m and self.m != other.m:
            raise PerturbError(f"mixed radicands {self.m} and {other.m}")
        return self.m or other.m

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadVal(self.a + o.a, self.b + o.b, self._join(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadVal(-self.a, -self.b, self.m)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        m = self._join(o)
        return QuadVal(self.a * o.a + m * self.b * o.b,
                       self.a * o.b + self.b * o.a, m)

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.m * self.b * self.b
        if n == 0:
            raise ZeroDivisionError("division by zero QuadVal")
        return QuadVal(self.a / n, -self.b / n, self.m)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def field_conj(self):
        return QuadVal(self.a, -self.b, self.m)

    def complex_conj(self):
        """Complex conjugation: nontrivial only for imaginary fields."""
        return self.field_conj() if self.m < 0 else self

    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise PerturbError(f"{self} is irrational")
        return self.a

    def to_mpc(self):
        if self.m >= 0:
            s = mp.sqrt(self.m)
            return mp.mpf(self.a.numerator) / self.a.denominator + \
                mp.mpf(self.b.numerator) / self.b.denominator * s
        s = mp.sqrt(-self.m)
        return mp.mpc(mp.mpf(self.a.numerator) / self.a.denominator,
                      mp.mpf(self.b.numerator) / self.b.denominator * s)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b and \
            (self.b == 0 or self.m == o.m)

    def __hash__(self):
        return hash((self.a, self.b, self.m))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        return f"({self.a}+{self.b}*sqrt({self.m}))"


def gaussian(a, b=0):
    """Shorthand for a + b*i."""
    return QuadVal(a, b, -1)


# ---------------------------------------------------------------------
# Sparse multivariate polynomials over exact coefficients
# ---------------------------------------------------------------------

class MultiPoly:
    """Sparse multivariate polynomial; terms map exponent tuples to
    exact coefficients (Fraction or QuadVal).  Zero coefficients are
    never stored."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def const(cls, vars, c):
        return cls(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, vars, name):
        e = [0] * len(vars)
        e[tuple(vars).index(name)] = 1
        return cls(vars, {tuple(e): Fraction(1)})

    def is_zero(self):
        return not self.terms

    __bool__ = lambda self: not self.is_zero()

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise PerturbError("mixed variable sets")
            return other
        if isinstance(other, (int, Fraction, QuadVal)):
            return MultiPoly.const(self.vars, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly(self.vars, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, QuadVal):
            inv = scalar.inverse()
        else:
            inv = Fraction(1, 1) / Fraction(scalar)
        return self * inv

    def map_coeffs(self, f):
        return MultiPoly(self.vars, {e: f(c) for e, c in self.terms.items()})

    def complex_conj(self):
        return self.map_coeffs(
            lambda c: c.complex_conj() if isinstance(c, QuadVal) else c)

    def rationalized(self):
        """Coefficients forced down to Fraction; raises if any is
        genuinely irrational."""
        def down(c):
            return c.to_fraction() if isinstance(c, QuadVal) else Fraction(c)
        return self.map_coeffs(down)

    def substitute(self, values: dict):
        """Full evaluation at a point; returns a scalar."""
        acc = 0
        for e, c in self.terms.items():
            t = c
            for name, k in zip(self.vars, e):
                if k:
                    t = t * values[name] ** k
            acc = acc + t
        return acc

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}^{k}" if k > 1 else v
                            for v, k in zip(self.vars, e) if k)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


# ---------------------------------------------------------------------
# Truncated series in the small parameter
# ---------------------------------------------------------------------

@dataclass
class SeriesExpansion:
    """x(eps) = sum coeffs[k] * eps^k, exact coefficients, truncated at
    the stated order (inclusive); arithmetic never extends the order."""
    base: object
    coeffs: list
    order: int

    def __post_init__(self):
        assert len(self.coeffs) == self.order + 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def complex_conj(self) -> "SeriesExpansion":
        def cc(c):
            if isinstance(c, (MultiPoly, QuadVal)):
                return c.complex_conj()
            return c
        return SeriesExpansion(cc(self.base), [cc(c) for c in self.coeffs],
                               self.order)

    def eval_numeric(self, eps):
        """Numeric value at a concrete eps (mpmath)."""
        acc = mp.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * eps + _to_mpc(c)
        return acc


def _to_mpc(c):
    if isinstance(c, QuadVal):
        return c.to_mpc()
    if isinstance(c, Fraction):
        return mp.mpf(c.numerator) / c.denominator
    return mp.mpc(c)


def _ser_mul(a, b, order):
    out = [0] * (order + 1)
    for i, ca in enumerate(a[:order + 1]):
        if isinstance(ca, (int, Fraction)) and ca == 0:
            continue
        for j, cb in enumerate(b[:order + 1 - i]):
            out[i + j] = out[i + j] + ca * cb
    return out


def _poly_at_series(poly_coeffs, x, order):
    """Evaluate a polynomial (ascending coefficient list) at a truncated
    series, truncating at the given order."""
    acc = [poly_coeffs[-1]] + [0] * order
    for c in reversed(poly_coeffs[:-1]):
        acc = _ser_mul(acc, x, order)
        acc[0] = acc[0] + c
    return acc


def _aspoly(p) -> list:
    if isinstance(p, IntPolynomial):
        return [Fraction(c) for c in p.coeffs]
    return list(p)


def invert_series(R, Q, omega, order: int) -> SeriesExpansion:
    """Expansion X_omega(eps) of the root of R(X) = eps*Q(X) near the
    simple root omega of R, with exact coefficients.

    R and Q are polynomials (IntPolynomial or ascending coefficient
    sequences; Q's coefficients may be MultiPoly for symbolic work).
    """
    if order > 12:
        raise PerturbError("expansion order capped at 12")
    rc = _aspoly(R)
    qc = _aspoly(Q)
    dR = [i * c for i, c in enumerate(rc)][1:]
    rp = 0
    for c in reversed(dR):
        rp = rp * omega + c
    if not rp:
        raise PerturbError(f"{omega} is a multiple root of R")
    rp_inv = rp.inverse() if isinstance(rp, QuadVal) else Fraction(1) / rp
    x = [omega] + [0] * order
    for k in range(1, order + 1):
        rx = _poly_at_series(rc, x, k)
        qx = _poly_at_series(qc, x, k - 1)
        resid = rx[k] - qx[k - 1]
        x[k] = -resid * rp_inv
    return SeriesExpansion(omega, x, order)


def compose_residual(R, Q, x: SeriesExpansion):
    """Coefficients of R(x) - eps*Q(x) through x.order; all must vanish
    by construction (exactness check used in the tests)."""
    rc, qc = _aspoly(R), _aspoly(Q)
    rx = _poly_at_series(rc, x.coeffs, x.order)
    qx = _poly_at_series(qc, x.coeffs, x.order - 1)
    return [rx[0]] + [rx[k] - qx[k - 1] for k in range(1, x.order + 1)]


def modulus_sq_series(x: SeriesExpansion,
                      conj: Optional[SeriesExpansion] = None) -> SeriesExpansion:
    """|X_omega(eps)|^2 as an exact real series: the product of x with
    the expansion at the conjugate base point (defaulting to the
    coefficient-conjugated series).  Raises if any product coefficient
    has a nonzero imaginary part."""
    if conj is None:
        conj = x.complex_conj()
    if conj.order != x.order:
        raise PerturbError("mismatched truncation orders")
    prod = _ser_mul(x.coeffs, conj.coeffs, x.order)
    out = []
    for c in prod:
        out.append(_real_part_exact(c))
    return SeriesExpansion(_real_part_exact(x.base * conj.base), out, x.order)


def _real_part_exact(c):
    if isinstance(c, QuadVal):
        if c.m < 0 and c.b != 0:
            raise PerturbError(f"nonzero imaginary residue {c!r}")
        return c.to_fraction() if c.m < 0 or c.b == 0 else c
    if isinstance(c, MultiPoly):
        def down(v):
            if isinstance(v, QuadVal):
                if v.m < 0 and v.b != 0:
                    raise PerturbError(f"nonzero imaginary residue {v!r}")
                return v.to_fraction()
            return v
        return c.map_coeffs(down)
    return c


# ---------------------------------------------------------------------
# Cancellation systems
# ---------------------------------------------------------------------

def modulus_coefficients(R, Q, omega, order) -> list:
    """c_{k} for |X_omega(eps)|^2 = sum c_k eps^k, k = 0..order."""
    x = invert_series(R, Q, omega, order)
    return modulus_sq_series(x).coeffs


def cancellation_system(R, Q, base_roots, depth: int) -> list:
    """The polynomials c_{1,k} - c_{2,k} for k = 1..depth, where c_{i,k}
    are the squared-modulus expansion coefficients at the two base
    roots.  With symbolic Q coefficients these are MultiPoly's; with
    concrete Q they are exact rationals."""
    dR = IntPolynomial(_coerce_int_list(R)).degree if isinstance(R, (list, tuple)) \
        else R.degree
    if depth > dR + 2:
        raise PerturbError("cancellation depth capped at degree + 2")
    w1, w2 = base_roots
    c1 = modulus_coefficients(R, Q, w1, depth)
    c2 = modulus_coefficients(R, Q, w2, depth)
    return [_norm_diff(c1[k], c2[k]) for k in range(1, depth + 1)]


def _coerce_int_list(coeffs):
    return [int(c) for c in coeffs]


def _norm_diff(a, b):
    if isinstance(a, MultiPoly) or isinstance(b, MultiPoly):
        ref = a if isinstance(a, MultiPoly) else b
        if not isinstance(a, MultiPoly):
            a = MultiPoly.const(ref.vars, a)
        if not isinstance(b, MultiPoly):
            b = MultiPoly.const(ref.vars, b)
        return (a - b).rationalized()
    fa = a.to_fraction() if isinstance(a, QuadVal) else Fraction(a)
    fb = b.to_fraction() if isinstance(b, QuadVal) else Fraction(b)
    return fa - fb


def cancellation_order(R, Q, base_roots, max_order: int) -> Optional[int]:
    """First k in 1..max_order with c_{1,k} != c_{2,k}, or None if the
    two squared moduli agree through max_order."""
    diffs = cancellation_system(R, Q, base_roots, max_order)
    for k, dv in enumerate(diffs, start=1):
        nz = (not dv.is_zero()) if isinstance(dv, MultiPoly) else dv != 0
        if nz:
            return k
    return None


def symbolic_q(degree: int, monic: bool = True,
               extra_vars: Sequence[str] = ()) -> list:
    """Coefficient list of a symbolic Q of the given degree: q_0..q_{d-1}
    as MultiPoly generators (plus optional extra parameter variables),
    with leading coefficient 1 when monic."""
    vars = tuple(f"q{i}" for i in range(degree)) + tuple(extra_vars)
    coeffs = [MultiPoly.var(vars, f"q{i}") for i in range(degree)]
    lead = MultiPoly.const(vars, Fraction(1)) if monic else \
        MultiPoly.var(vars, f"q{degree}")
    return coeffs + [lead]


# reference perturbation data ------------------------------------------

Q4 = IntPolynomial([-5, 1, -1, 1])
Q6 = IntPolynomial([-28, 9, -9, -26, -9, 9])
R4 = IntPolynomial([-1, 0, 0, 0, 1])
R6 = IntPolynomial([-1, 0, 0, 0, 0, 0, 1])

OMEGA_I = gaussian(0, 1)
OMEGA_6 = QuadVal(Fraction(-1, 2), Fraction(1, 2), -3)    # (-1+i*sqrt3)/2
OMEGA_6_ALT = QuadVal(Fraction(1, 2), Fraction(1, 2), -3)  # (1+i*sqrt3)/2


def check_other_roots_deg6(qpoly=None) -> bool:
    """Confirms the reference degree-6 perturbation data: Q6 cancels the
    squared-modulus difference for base roots (1, (-1+i*sqrt3)/2)
    through order 6 but fails for the alternative pair
    (1, (1+i*sqrt3)/2) at some order <= 6."""
    q = Q6 if qpoly is None else qpoly
    if rational_gcd_degree(q, R6) > 0:
        raise PerturbError("Q shares a factor with X^6-1: excluded")
    good = cancellation_order(R6, q, (Fraction(1), OMEGA_6), 6)
    alt = cancellation_order(R6, q, (Fraction(1), OMEGA_6_ALT), 6)
    return good is None and alt is not None
