"""Exact integer and rational univariate polynomial arithmetic.

Polynomials are stored densely, ascending by power, with arbitrary-size
coefficients.  Everything here is exact: no floats ever enter a
coefficient.  Degrees stay small (at most a few dozen even for the
auxiliary polynomials), so no attempt is made at sparse or asymptotically
fast arithmetic.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence


class PolynomialError(ValueError):
    pass


class ParseError(PolynomialError):
    pass


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class IntPolynomial:
    """Dense univariate polynomial over the integers.

    ``coeffs[i]`` is the coefficient of ``X^i``.  Trailing zeros are
    stripped on construction, so the leading coefficient is nonzero
    unless the polynomial is identically zero.  Instances are immutable
    and hashable; they can be shared freely across worker processes.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = _strip(coeffs)
        for c in cs:
            if not isinstance(c, int):
                raise PolynomialError(f"non-integer coefficient {c!r}")
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    # -- basic queries ------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports degree -1."""
        return len(self.coeffs) - 1

    @property
    def height(self) -> int:
        """max_i |a_i|, computed on demand."""
        return max((abs(c) for c in self.coeffs), default=0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self):
        return render_poly(self)

    # -- evaluation ---------------------------------------------------

    def __call__(self, x):
        """Horner evaluation; works for any ring element (int, Fraction,
        complex, mpmath types, series, ...)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- arithmetic ---------------------------------------------------

    def __neg__(self):
        return IntPolynomial([-c for c in self.coeffs])

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial([other * c for c in self.coeffs])
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    # -- structure ----------------------------------------------------

    def content(self) -> int:
        if self.is_zero():
            raise PolynomialError("content of the zero polynomial")
        return math.gcd(*(abs(c) for c in self.coeffs)) if len(self.coeffs) > 1 \
            else abs(self.coeffs[0])

    def primitive_part(self) -> "IntPolynomial":
        g = self.content()
        return IntPolynomial([c // g for c in self.coeffs])

    def reflected(self) -> "IntPolynomial":
        """P(-X)."""
        return IntPolynomial([c if i % 2 == 0 else -c
                              for i, c in enumerate(self.coeffs)])

    def trailing_zero_count(self) -> int:
        """Multiplicity of the root 0."""
        n = 0
        while n < len(self.coeffs) and self.coeffs[n] == 0:
            n += 1
        return n

    def strip_zero_roots(self) -> "IntPolynomial":
        """Divide out X^m where m is the multiplicity of the root 0."""
        return IntPolynomial(self.coeffs[self.trailing_zero_count():])

    def to_rational(self) -> "RatPolynomial":
        return RatPolynomial([Fraction(c) for c in self.coeffs])


class RatPolynomial:
    """Dense polynomial with exact rational coefficients.

    Intermediate object for the family constructions; ``Fraction`` keeps
    every coefficient in lowest terms with a positive denominator.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = _strip([Fraction(c) for c in coeffs])
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RatPolynomial is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, RatPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RatPolynomial({[str(c) for c in self.coeffs]})"

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self):
        return RatPolynomial([-c for c in self.coeffs])

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPolynomial(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatPolynomial([other * c for c in self.coeffs])
        if not isinstance(other, RatPolynomial):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return RatPolynomial([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPolynomial(out)

    __rmul__ = __mul__

    def derivative(self) -> "RatPolynomial":
        return RatPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def clear_denominators(self) -> IntPolynomial:
        """Smallest positive multiple with integer coefficients."""
        if not self.coeffs:
            return IntPolynomial([])
        lcm = 1
        for c in self.coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        return IntPolynomial([int(c * lcm) for c in self.coeffs])


# ---------------------------------------------------------------------
# Parsing and rendering
# ---------------------------------------------------------------------

_TERM_RE = re.compile(
    r"([+-]?)\s*(?:(\d+)\s*\*?\s*)?(?:([Xx])(?:\s*\^\s*(\d+))?)?")


def parse_poly(text: str) -> IntPolynomial:
    """Parse either a comma-separated ascending coefficient list
    ("-6,8,-10,12") or a human form ("12X^3-10X^2+8X-6").

    Both syntaxes for the same polynomial parse identically.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty input")
    if "," in text or ("X" not in text.upper()):
        parts = [p.strip() for p in text.split(",")]
        try:
            return IntPolynomial([int(p) for p in parts])
        except ValueError as e:
            raise ParseError(f"bad coefficient list {text!r}: {e}") from None
    return _parse_human(text)


def _parse_human(text: str) -> IntPolynomial:
    s = text.replace(" ", "")
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"malformed token at {s[pos:]!r}")
        sign, num, var, exp = m.groups()
        if num is None and var is None:
            raise ParseError(f"malformed token at {s[pos:]!r}")
        c = int(num) if num is not None else 1
        if sign == "-":
            c = -c
        if var is None:
            power = 0
        elif exp is None:
            power = 1
        else:
            power = int(exp)
        coeffs[power] = coeffs.get(power, 0) + c
        pos = m.end()
    deg = max(coeffs)
    return IntPolynomial([coeffs.get(i, 0) for i in range(deg + 1)])


def render_poly(p: IntPolynomial) -> str:
    """Human form with X as variable and caret powers ("12X^3-10X^2+8X-6")."""
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            body = "" if mag == 1 else str(mag)
            body += "X" if i == 1 else f"X^{i}"
        parts.append(sign + body)
    return "".join(parts)


def render_coeff_list(p: IntPolynomial) -> str:
    return ",".join(str(c) for c in p.coeffs)


# ---------------------------------------------------------------------
# Symmetry orbit and canonical form
# ---------------------------------------------------------------------

def orbit(p: IntPolynomial) -> list[IntPolynomial]:
    """The four polynomials {±P(±X)}; they share all root absolute
    values (and all separation measures)."""
    r = p.reflected()
    return [p, -p, r, -r]


def canonicalize(p: IntPolynomial) -> IntPolynomial:
    """Canonical representative of the orbit of P under negation and
    X -> -X, with content divided out.

    The representative is primitive, has positive leading coefficient,
    and is the lexicographically smallest coefficient tuple among the
    qualifying orbit members.  The reciprocal transform is deliberately
    not part of the orbit: absolute separation is not invariant under it.
    """
    if p.is_zero():
        raise PolynomialError("cannot canonicalize the zero polynomial")
    p = p.primitive_part()
    candidates = [q for q in orbit(p) if q.coeffs[-1] > 0]
    return min(candidates, key=lambda q: q.coeffs)


def is_canonical(p: IntPolynomial) -> bool:
    return not p.is_zero() and p == canonicalize(p)


# ---------------------------------------------------------------------
# Classical transforms
# ---------------------------------------------------------------------

def reciprocal(p: IntPolynomial) -> IntPolynomial:
    """X^d P(1/X): reversed coefficients.  Roots are the inverses of the
    roots of P; the height is unchanged.  Requires P(0) != 0 so that the
    degree is preserved."""
    if p.is_zero() or p.coeffs[0] == 0:
        raise PolynomialError("reciprocal requires a nonzero constant term")
    return IntPolynomial(list(reversed(p.coeffs)))


def cyclotomic_like_product(factors: Sequence[IntPolynomial]) -> IntPolynomial:
    """Exact product of the given factors (used to assemble the R_d
    polynomials with factors X ± r and X^2 + aX + r^2)."""
    acc = IntPolynomial([1])
    for f in factors:
        if f.is_zero():
            raise PolynomialError("zero factor in product")
        acc = acc * f
    return acc


# ---------------------------------------------------------------------
# Exact gcd over Q (for squarefree detection)
# ---------------------------------------------------------------------

def _rat_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1) if len(a) >= len(b) else []
    while len(a) >= len(b) and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        f = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _rat_gcd(p: IntPolynomial, q: IntPolynomial) -> list[Fraction]:
    a = [Fraction(c) for c in p.coeffs]
    b = [Fraction(c) for c in q.coeffs]
    while b:
        _, r = _rat_divmod(a, b)
        a, b = b, r
    return a


def rational_gcd_degree(p: IntPolynomial, q: IntPolynomial) -> int:
    """Degree of gcd(p, q) over Q (exact Euclidean algorithm)."""
    return len(_rat_gcd(p, q)) - 1


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    """Primitive polynomial with the same roots as P, all simple:
    P / gcd(P, P'), content removed, leading coefficient positive."""
    if p.degree < 1:
        raise PolynomialError("degree must be >= 1")
    g = _rat_gcd(p, p.derivative())
    if len(g) == 1:
        q = p
    else:
        quot, rem = _rat_divmod([Fraction(c) for c in p.coeffs], g)
        assert not rem
        q = RatPolynomial(quot).clear_denominators()
    q = q.primitive_part()
    return q if q.coeffs[-1] > 0 else -q
