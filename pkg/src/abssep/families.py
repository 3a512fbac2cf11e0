"""Explicit families of integer polynomials with small absolute separation.

Three constructions are provided:

* a cubic family obtained by evaluating a bivariate polynomial with
  three equal-modulus roots at continued-fraction convergents of
  sqrt(3), together with the 3-parameter surface it lives on and the
  algebraic equal-modulus criterion for cubics;
* perturbed cyclotomic products M*R(X) - Q(X) in degrees 4, 5 and 6,
  including the two one-parameter degree-5 variants;
* the smaller "extra" cyclotomic examples in degrees 3, 4 and 5.

Each family carries its expected asymptotic quality exponent, and
``family_quality_table`` measures certified abssep/quality along a
parameter list in the layout of the standard record tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath as mp

from .perturb import Q4, Q6, R4, R6, QuadVal
from .polycore import IntPolynomial, reciprocal
from .sepmeasure import SeparationResult, measure


class FamilyError(ValueError):
    pass


class DegenerateFamilyError(FamilyError):
    pass


# ---------------------------------------------------------------------
# sqrt(3) convergents
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class Convergent:
    n: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def sqrt3_convergent(n: int) -> Convergent:
    """n-th convergent of sqrt(3) = [1; 1, 2, 1, 2, ...], indexed so
    that n=1 gives 1/1 and n=2 gives 2/1."""
    if n < 1:
        raise FamilyError("convergent index must be >= 1")
    # partial quotients a_0=1, then alternating 1, 2
    p_prev, q_prev = 1, 0
    p, q = 1, 1          # convergent for [1] = 1/1, i.e. n = 1
    for k in range(2, n + 1):
        a = 1 if k % 2 == 0 else 2
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    return Convergent(n, p, q)


# ---------------------------------------------------------------------
# family definitions
# ---------------------------------------------------------------------

# cubic family bases: p*(3X^3 - 2X^2 + 4X - 6) + 6q*(X^3 - X^2 + 1)
CUBIC_BASE_P = IntPolynomial([-6, 4, -2, 3])
CUBIC_BASE_Q = IntPolynomial([1, 0, -1, 1])

# degree-5 base: (X^2 - 9X + 36)(X^2 - 11X + 36)
R5 = IntPolynomial([36, -9, 1]) * IntPolynomial([36, -11, 1])


def q5_poly(q: int = 0, variant: str = "B") -> IntPolynomial:
    """Quintic perturbation polynomial of the chosen one-parameter
    variant; variant B at q=0 is the base quintic construction."""
    if variant == "A":
        return IntPolynomial([25920 + 1296 * q, -(13104 + 720 * q),
                              2700 + 171 * q, -(20 * q + 229), q, 1])
    if variant == "B":
        return IntPolynomial([20736 + 1296 * q, -(11088 + 720 * q),
                              2404 + 171 * q, -(20 * q + 213), q, 1])
    raise FamilyError(f"unknown deg5 variant {variant!r}")


# extra cyclotomic-product examples: (base R, Q) with P = M*R - Q.
# The degree-3 variant-2 constant is +3: the printed form with -3 makes
# the leading modulus-difference coefficient survive at order 1 (the
# pair gap is ~6/M), contradicting the advertised order-d behaviour,
# while the +3 form cancels through order d-1 exactly.
EXTRA_DEG4 = (IntPolynomial([-1, 0, 1]) * IntPolynomial([1, 1, 1]),
              IntPolynomial([-4, -3, 0, 1]))         # X^3 - 3X - 4
EXTRA_DEG3 = {
    1: (IntPolynomial([1, 0, 1]) * IntPolynomial([-1, 1]),
        IntPolynomial([-3, 2, -1])),                 # -(X^2 - 2X + 3)
    2: (IntPolynomial([1, -1, 1]) * IntPolynomial([-1, 1]),
        IntPolynomial([-3, 4, -2])),                 # -(2X^2 - 4X + 3)
}
EXTRA_DEG5 = {
    1: (IntPolynomial([-1, 1]) * IntPolynomial([1, 1, 1])
        * IntPolynomial([1, -1, 1]),
        IntPolynomial([-7, 4, -5, 2, -3])),  # -(3X^4-2X^3+5X^2-4X+7)
    2: (IntPolynomial([-1, 1]) * IntPolynomial([1, 0, 1])
        * IntPolynomial([1, -1, 1]),
        IntPolynomial([-7, 12, -13, 8, -2])),  # -(2X^4-8X^3+13X^2-12X+7)
}

FAMILY_NAMES = ("deg3_sqrt3", "deg4", "deg5", "deg6",
                "extra_deg4", "extra_deg3", "extra_deg5")

_EXPECTED_EXPONENT = {
    "deg3_sqrt3": 4, "deg4": 5, "deg5": 6, "deg6": 7,
    "extra_deg4": 5, "extra_deg3": 3, "extra_deg5": 5,
}


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise FamilyError(f"unknown family {self.name!r}")

    @property
    def expected_exponent(self) -> int:
        return _EXPECTED_EXPONENT[self.name]


def family_member(spec: FamilySpec) -> IntPolynomial:
    """The exact integer polynomial for the given family member."""
    name, par = spec.name, spec.params
    if name == "deg3_sqrt3":
        conv = sqrt3_convergent(par["n"])
        return CUBIC_BASE_P * conv.p + CUBIC_BASE_Q * (6 * conv.q)
    if name in ("deg4", "deg6"):
        m = _positive(par, "M")
        base, qd = (R4, Q4) if name == "deg4" else (R6, Q6)
        return base * m - qd
    if name == "deg5":
        m = _positive(par, "M")
        return R5 * m - q5_poly(par.get("q", 0), par.get("variant", "B"))
    if name == "extra_deg4":
        base, qd = EXTRA_DEG4
        return base * _positive(par, "M") - qd
    if name in ("extra_deg3", "extra_deg5"):
        table = EXTRA_DEG3 if name == "extra_deg3" else EXTRA_DEG5
        variant = par.get("variant", 1)
        if variant not in table:
            raise FamilyError(f"unknown {name} variant {variant!r}")
        base, qd = table[variant]
        return base * _positive(par, "M") - qd
    raise FamilyError(f"unknown family {name!r}")


def _positive(par, key) -> int:
    m = par.get(key)
    if not isinstance(m, int) or m < 1:
        raise FamilyError(f"parameter {key} must be a positive integer")
    return m


def deg5_m_for_height(height: int) -> int:
    """Scale parameter whose member has height closest to the target:
    the dominant coefficient of the degree-5 member is 1296*M."""
    m = round(Fraction(height, 1296))
    if m < 1:
        raise FamilyError("target height too small for the quintic family")
    return m


# ---------------------------------------------------------------------
# quality tables
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyRow:
    param: int
    height: int
    result: SeparationResult

    @property
    def abssep(self) -> mp.mpf:
        return self.result.value

    @property
    def quality(self) -> float:
        return self.result.quality


def family_quality_table(name: str, params: Sequence[int],
                         by_height: bool = False,
                         prec_ceiling: Optional[int] = None,
                         use_reciprocal: Optional[bool] = None) -> List[FamilyRow]:
    """Certified abssep and quality along a parameter list.

    With ``by_height`` the parameters are target heights and are mapped
    to the family's scale parameter (identity for deg4/deg6, whose
    members have height exactly M once M exceeds the perturbation's
    largest coefficient; 1296-fold smaller for deg5).

    ``use_reciprocal`` controls whether the reversed-coefficient
    polynomial is measured instead of the member itself.  The default
    (None) follows the record-table convention: reciprocal for deg4,
    direct everywhere else.  abssep of the reciprocal is the minimal
    gap between *reciprocals* of moduli, which the degree-4 table
    tracks; the member and its reciprocal have the same height.
    """
    if use_reciprocal is None:
        use_reciprocal = (name == "deg4")
    rows = []
    for raw in params:
        if by_height and name == "deg5":
            param = deg5_m_for_height(raw)
        else:
            param = raw
        key = "n" if name == "deg3_sqrt3" else "M"
        p = family_member(FamilySpec(name, {key: param}))
        target = reciprocal(p) if use_reciprocal else p
        res = measure(target, "abssep", prec_ceiling=prec_ceiling)
        rows.append(FamilyRow(raw, p.height, res))
    return rows


# ---------------------------------------------------------------------
# equal-modulus cubics
# ---------------------------------------------------------------------

Coeff = Union[int, Fraction, float, QuadVal]


@dataclass(frozen=True)
class EqualModulusReport:
    residual: Coeff                 # a1^3*a3 - a0*a2^3, exact when possible
    residual_is_zero: bool
    chain_holds: bool               # a1a2 < 0 <= a1a3 <= a2^2 <= 3a1a3
    derived_criterion_holds: bool   # residual 0, a1a3 > 0, neg. discriminant
    moduli: Tuple[float, float, float]
    moduli_agree: bool              # numeric confirmation at 1e-12

    @property
    def all_equal_modulus(self) -> bool:
        return self.derived_criterion_holds


def _as_real(c) -> mp.mpf:
    if isinstance(c, QuadVal):
        z = c.to_mpc()
        return z.real
    return mp.mpf(c) if not isinstance(c, Fraction) \
        else mp.mpf(c.numerator) / c.denominator


def _is_zero(c) -> bool:
    if isinstance(c, QuadVal):
        return c.a == 0 and c.b == 0
    return c == 0


def equal_modulus_cubic_check(coeffs) -> EqualModulusReport:
    """Algebraic test for a cubic having all three root moduli equal.

    ``coeffs`` is ascending [a0, a1, a2, a3] with real entries (int,
    Fraction, float, or real quadratic values), or an IntPolynomial of
    degree 3.  The necessary vanishing condition a1^3*a3 = a0*a2^3 is
    evaluated exactly when the inputs are exact.  When it holds the
    cubic factors as (a2*X + a1) times a quadratic; the derived
    criterion additionally requires a1*a3 > 0 and the quadratic's
    discriminant to be negative, which together are sufficient.
    """
    if isinstance(coeffs, IntPolynomial):
        coeffs = list(coeffs.coeffs)
    if len(coeffs) != 4:
        raise FamilyError("expected ascending cubic coefficients [a0..a3]")
    a0, a1, a2, a3 = coeffs
    if _is_zero(a3):
        raise FamilyError("leading coefficient is zero")
    if _is_zero(a2) or _is_zero(a1):
        raise DegenerateFamilyError(
            "criterion undefined for a1 = 0 or a2 = 0")
    residual = a1 * a1 * a1 * a3 - a0 * a2 * a2 * a2
    residual_zero = _is_zero(residual)

    r1, r2, r3 = (_as_real(c) for c in (a1, a2, a3))
    chain = (r1 * r2 < 0) and (0 <= r1 * r3 <= r2 * r2 <= 3 * r1 * r3)
    # quadratic cofactor a2*a3*X^2 + a2^2*X + a1*a2 (up to scaling by
    # a2): discriminant sign is that of (a2^2 - a1*a3)^2 - 4*a1^2*a3^2
    # after completing the square of a2^4 - 4*a1*a2^2*a3.
    derived = residual_zero and (r1 * r3 > 0) and \
        ((r2 * r2 - r1 * r3) ** 2 < 4 * (r1 * r3) ** 2)

    with mp.workdps(60):
        roots = mp.polyroots([mp.mpc(_as_real(c)) for c in
                              (a3, a2, a1, a0)], maxsteps=200,
                             extraprec=200)
        mods = sorted(float(abs(z)) for z in roots)
    agree = mods[-1] - mods[0] <= 1e-12 * max(1.0, mods[-1])
    return EqualModulusReport(residual, residual_zero, bool(chain),
                              bool(derived), tuple(mods), agree)


# ---------------------------------------------------------------------
# the 3-parameter sqrt(3) surface
# ---------------------------------------------------------------------

def sqrt3_surface_cubic(a: int, b: int, c: int) -> List[QuadVal]:
    """Ascending coefficients, in Z[sqrt(3)], of the surface member
    a(X^3 + 10c^3) + b(3X^2 + 6cX) - ((X^2 + 4cX)b + 6ac^3)sqrt(3)."""
    s3 = QuadVal(0, 1, 3)
    return [
        QuadVal(10 * a * c ** 3, 0, 3) - s3 * (6 * a * c ** 3),
        QuadVal(6 * b * c, 0, 3) - s3 * (4 * b * c),
        QuadVal(3 * b, 0, 3) - s3 * b,
        QuadVal(a, 0, 3),
    ]


def verify_sqrt3_surface(a: int, b: int, c: int) -> bool:
    """True when the surface member has all three root moduli equal.

    Checked both algebraically (the cubic vanishing condition holds
    exactly in Z[sqrt(3)]) and numerically at high precision (moduli
    agree within 1e-20).  Degenerate members (a = 0 or c = 0, which
    force roots at the origin) are rejected.
    """
    if a == 0 or c == 0:
        raise DegenerateFamilyError(
            "surface member degenerates for a = 0 or c = 0")
    a0, a1, a2, a3 = sqrt3_surface_cubic(a, b, c)
    residual = a1 * a1 * a1 * a3 - a0 * a2 * a2 * a2
    if not (residual.a == 0 and residual.b == 0):
        return False
    with mp.workdps(40):
        roots = mp.polyroots([z.to_mpc() for z in (a3, a2, a1, a0)],
                             maxsteps=200, extraprec=200)
        mods = sorted(abs(z) for z in roots)
        return bool(mods[-1] - mods[0] < mp.mpf("1e-20") * (1 + mods[-1]))


def sqrt3_surface_member(a: int, b: int, c: int, n: int) -> IntPolynomial:
    """Integer polynomial from the surface member with sqrt(3) replaced
    by its n-th convergent and denominators cleared."""
    conv = sqrt3_convergent(n)
    coeffs = []
    for z in sqrt3_surface_cubic(a, b, c):
        coeffs.append(z.a + z.b * conv.value)
    lcm = 1
    for f in coeffs:
        q = Fraction(f).denominator
        lcm = lcm * q // _gcd(lcm, q)
    ints = [int(f * lcm) for f in coeffs]
    if ints[-1] == 0:
        raise DegenerateFamilyError("leading coefficient vanished")
    return IntPolynomial(ints)


def _gcd(x, y):
    while y:
        x, y = y, x % y
    return x
