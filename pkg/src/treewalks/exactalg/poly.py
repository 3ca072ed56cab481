"""Dense univariate polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


def _trim(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Immutable polynomial ``c[0] + c[1] x + ...`` with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_poly(self.coeffs)

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly([other])

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q = c / lead
            quot[k - dq] = q
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= q * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        acc = type(x)(0) if not isinstance(x, int) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def deriv(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.coeffs[-1])

    def valuation(self) -> int:
        """Lowest exponent with a nonzero coefficient (``-1`` for zero)."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return -1

    def is_nonnegative(self) -> bool:
        """All coefficients are >= 0."""
        return all(c >= 0 for c in self.coeffs)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_odd_part(p: Poly) -> Poly:
    """Product of the squarefree factors of odd multiplicity (Yun's algorithm).

    Sign changes of ``p`` happen exactly at the real roots of this product.
    """
    if p.degree <= 0:
        return Poly([1])
    dp = p.deriv()
    a = poly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.deriv()
    out = Poly([1])
    k = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if k % 2 == 1:
            out = out * a
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.deriv()
        k += 1
    return out.monic()


def format_poly(coeffs: Sequence[Fraction], var: str = "x") -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            s = mono
        else:
            s = f"{abs(c)}{'*' if mono else ''}{mono}"
        parts.append(("-" if c < 0 else "+", s))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out
