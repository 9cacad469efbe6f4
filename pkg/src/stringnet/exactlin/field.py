"""Exact arithmetic in a number field Q(x)/(p(x)).

A :class:`NumberField` is described by a monic minimal polynomial with
rational coefficients.  Elements (:class:`Scalar`) are coefficient vectors
of length ``degree`` over ``fractions.Fraction``; all arithmetic is exact
and no floating point is involved anywhere.

Degree 1 recovers the rational field.  Irreducibility of the minimal
polynomial is verified for degree <= 4 (rational-root tests plus the
resolvent-cubic criterion for quartics); higher degrees are trusted as
input and flagged as unverified.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

RationalLike = Union[int, Fraction]


class ReducibleMinimalPolynomial(ValueError):
    """Raised when a declared minimal polynomial has a proper rational factor."""

    def __init__(self, message: str, factor: Sequence[Fraction]):
        super().__init__(message)
        self.factor = tuple(factor)


def _as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an integer or Fraction, got {value!r}")


def poly_trim(coeffs: Sequence[Fraction]) -> tuple:
    """Drop trailing zero coefficients (coeffs are low degree first)."""
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return poly_trim(out)


def poly_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, ai in enumerate(a):
        out[i] += ai
    for i, bi in enumerate(b):
        out[i] += bi
    return poly_trim(out)


def poly_scale(a: Sequence[Fraction], c: Fraction) -> tuple:
    if c == 0:
        return ()
    return tuple(ai * c for ai in a)


def poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple:
    """Quotient and remainder of polynomial division; b must be nonzero."""
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(poly_trim(a))
    db = len(b) - 1
    lead = b[-1]
    if len(rem) - 1 < db:
        return (), tuple(rem)
    quot = [Fraction(0)] * (len(rem) - db)
    while len(rem) - 1 >= db and rem:
        shift = len(rem) - 1 - db
        factor = rem[-1] / lead
        quot[shift] = factor
        for i in range(db + 1):
            rem[shift + i] -= factor * b[i]
        rem = list(poly_trim(rem))
    return poly_trim(quot), tuple(rem)


def poly_eval(a: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(a)):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list:
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def rational_roots(coeffs: Sequence[Fraction]) -> list:
    """All rational roots of a nonzero polynomial, each listed once."""
    coeffs = poly_trim(coeffs)
    if not coeffs:
        raise ValueError("zero polynomial has every root")
    # factor out powers of x first
    shift = 0
    while coeffs[shift] == 0:
        shift += 1
    roots = []
    if shift:
        roots.append(Fraction(0))
        coeffs = coeffs[shift:]
    if len(coeffs) == 1:
        return roots
    # clear denominators to a primitive integer polynomial
    denom = 1
    for c in coeffs:
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    ints = [int(c * denom) for c in coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    lead = ints[-1]
    const = ints[0]
    for p in _divisors(const):
        for q in _divisors(lead):
            for sign in (1, -1):
                cand = Fraction(sign * p, q)
                if cand in roots:
                    continue
                if poly_eval(coeffs, cand) == 0:
                    roots.append(cand)
    return roots


def _rational_square_root(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def _quartic_quadratic_factor(coeffs: Sequence[Fraction]) -> Optional[tuple]:
    """A monic quadratic factor of a monic rational quartic, if one exists.

    Works on the depressed quartic t^4 + p t^2 + q t + r via the resolvent
    cubic z^3 + 2p z^2 + (p^2 - 4r) z - q^2: a factorization into two
    rational quadratics corresponds to a rational root z of the resolvent
    that is a square (q != 0), or to the elementary discriminant conditions
    when q = 0.  Returns coefficients of one factor in x, low degree first.
    """
    a3, a2, a1 = coeffs[3], coeffs[2], coeffs[1]
    a0 = coeffs[0]
    s = a3 / 4  # x = t - s
    p = a2 - 6 * s * s
    q = a1 - 2 * a2 * s + 8 * s**3
    r = a0 - a1 * s + a2 * s * s - 3 * s**4

    def undepress(u: Fraction, v: Fraction) -> tuple:
        # t^2 + u t + v with t = x + s
        return (v + u * s + s * s, u + 2 * s, Fraction(1))

    if q == 0:
        root = _rational_square_root(p * p - 4 * r)
        if root is not None:
            return undepress(Fraction(0), (p + root) / 2)
        sq = _rational_square_root(r)
        if sq is not None:
            for v in (sq, -sq):
                usq = 2 * v - p
                u = _rational_square_root(usq)
                if u is not None:
                    return undepress(u, v)
        return None
    resolvent = (-q * q, p * p - 4 * r, 2 * p, Fraction(1))
    for z in rational_roots(resolvent):
        if z == 0:
            continue
        u = _rational_square_root(z)
        if u is None:
            continue
        v = (p + z - q / u) / 2
        w = (p + z + q / u) / 2
        if v * w == r:
            return undepress(u, v)
    return None


def check_irreducible(coeffs: Sequence[Fraction]) -> Optional[bool]:
    """True/False for degree <= 4; None when the degree is out of range."""
    coeffs = poly_trim(coeffs)
    degree = len(coeffs) - 1
    if degree < 1:
        raise ValueError("minimal polynomial must have degree >= 1")
    if degree == 1:
        return True
    roots = rational_roots(coeffs)
    if roots:
        return False
    if degree <= 3:
        return True
    if degree == 4:
        return _quartic_quadratic_factor(coeffs) is None
    return None


class NumberField:
    """A number field presented by a monic minimal polynomial.

    Attributes
    ----------
    name:
        Display name, e.g. ``"Q"`` or ``"Q(sqrt5)"``.
    modulus:
        Monic minimal polynomial, low degree first, length ``degree + 1``.
    degree:
        Extension degree over the rationals.
    embedding_hint:
        Optional decimal approximation of the generator, display only.
    irreducibility_verified:
        False when the degree exceeds 4 and the polynomial was trusted.
    """

    def __init__(
        self,
        name: str,
        minimal_polynomial: Iterable[RationalLike],
        embedding_hint: Optional[float] = None,
    ):
        coeffs = tuple(_as_fraction(c) for c in minimal_polynomial)
        coeffs = poly_trim(coeffs)
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        verdict = check_irreducible(coeffs)
        if verdict is False:
            root = rational_roots(coeffs)
            if root:
                witness = (-root[0], Fraction(1))
            else:
                witness = _quartic_quadratic_factor(coeffs)
            raise ReducibleMinimalPolynomial(
                f"minimal polynomial of {name} is reducible; "
                f"factor with coefficients {tuple(witness)}",
                witness,
            )
        self.name = name
        self.modulus = coeffs
        self.degree = len(coeffs) - 1
        self.embedding_hint = embedding_hint
        self.irreducibility_verified = verdict is True
        # reduction table for x^k, k = degree .. 2*degree - 2
        d = self.degree
        table = []
        xd = tuple(-c for c in coeffs[:d])
        table.append(xd)
        for _ in range(d - 2):
            prev = table[-1]
            shifted = [Fraction(0)] + list(prev)
            top = shifted.pop()
            row = [shifted[i] + top * xd[i] for i in range(d)]
            table.append(tuple(row))
        self._xpow = table
        self.zero = Scalar(self, (Fraction(0),) * d)
        self.one = Scalar(self, (Fraction(1),) + (Fraction(0),) * (d - 1))
        if d > 1:
            self.gen = Scalar(
                self, (Fraction(0), Fraction(1)) + (Fraction(0),) * (d - 2)
            )
        else:
            self.gen = self.zero

    def scalar(self, coeffs: Iterable[RationalLike]) -> "Scalar":
        vec = tuple(_as_fraction(c) for c in coeffs)
        if len(vec) > self.degree:
            if any(vec[self.degree :]):
                raise ValueError("coefficient vector longer than field degree")
            vec = vec[: self.degree]
        elif len(vec) < self.degree:
            vec = vec + (Fraction(0),) * (self.degree - len(vec))
        return Scalar(self, vec)

    def from_rational(self, value: RationalLike) -> "Scalar":
        c = _as_fraction(value)
        return Scalar(self, (c,) + (Fraction(0),) * (self.degree - 1))

    def same_field(self, other: "NumberField") -> bool:
        return self is other or self.modulus == other.modulus

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(self.modulus)

    def __repr__(self) -> str:
        return f"NumberField({self.name!r}, degree {self.degree})"


class Scalar:
    """Element of a :class:`NumberField`: a polynomial of degree < d in the generator."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other) -> Optional["Scalar"]:
        if isinstance(other, Scalar):
            if not self.field.same_field(other.field):
                raise ValueError(
                    f"scalars from different fields: {self.field.name} vs {other.field.name}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(
            self.field,
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(
            self.field,
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Scalar(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        field = self.field
        d = field.degree
        if d == 1:
            return Scalar(field, (self.coeffs[0] * other.coeffs[0],))
        prod = [Fraction(0)] * (2 * d - 1)
        for i, ai in enumerate(self.coeffs):
            if ai:
                for j, bj in enumerate(other.coeffs):
                    if bj:
                        prod[i + j] += ai * bj
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                red = field._xpow[k - d]
                for i in range(d):
                    if red[i]:
                        out[i] += c * red[i]
        return Scalar(field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        field = self.field
        if field.degree == 1:
            return Scalar(field, (1 / self.coeffs[0],))
        # extended Euclid in Q[x]: u*self + v*modulus = gcd = const
        r0, r1 = poly_trim(field.modulus), poly_trim(self.coeffs)
        s0, s1 = (), (Fraction(1),)
        while True:
            q, r = poly_divmod(r0, r1)
            if not r:
                break
            s = poly_add(s0, poly_scale(poly_mul(q, s1), Fraction(-1)))
            r0, r1, s0, s1 = r1, r, s1, s
        if len(r1) != 1:
            # cannot happen over an irreducible modulus
            raise ArithmeticError("gcd with modulus is not constant")
        inv = poly_scale(s1, 1 / r1[0])
        return field.scalar(inv)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        acc = self.field.one
        base = self
        e = exponent
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.field.same_field(other.field):
            return False
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field.modulus, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self.to_expr()} is not rational")
        return self.coeffs[0]

    def to_expr(self, symbol: str = "x") -> str:
        """Canonical textual form, e.g. ``1/2 - x + 3*x^2``."""
        parts = []
        for power, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if power == 0:
                term = str(mag)
            else:
                base = symbol if power == 1 else f"{symbol}^{power}"
                term = base if mag == 1 else f"{mag}*{base}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        if not parts:
            return "0"
        return " ".join(parts)

    def poly_degree(self) -> int:
        """Degree in the field generator, -1 for zero."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def __repr__(self) -> str:
        return f"<{self.to_expr()}>"


RATIONALS = NumberField("Q", (0, 1))
