"""The ring Q[z][y]/(y^2 - (4 - z^2)) and even polynomials.

``y`` stands for sqrt(4 - z^2), the semicircle weight on (-2, 2).  Complex
boundary values are handled as pairs of AlgElem (real, imaginary).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .poly import Poly, squarefree_odd_part

Number = Union[int, Fraction]

FOUR_MINUS_Z2 = Poly([4, 0, -1])


class AlgElem:
    """a(z) + b(z) * y with y^2 = 4 - z^2."""

    __slots__ = ("a", "b")

    def __init__(self, a=Poly(), b=Poly()):
        self.a = a if isinstance(a, Poly) else Poly([a])
        self.b = b if isinstance(b, Poly) else Poly([b])

    @classmethod
    def y(cls) -> "AlgElem":
        return cls(Poly(), Poly([1]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgElem):
            other = AlgElem(other)
        return self.a == other.a and self.b == other.b

    def __repr__(self) -> str:
        return f"AlgElem({self.a} + ({self.b})*y)"

    def _lift(self, other) -> "AlgElem":
        return other if isinstance(other, AlgElem) else AlgElem(other)

    def __add__(self, other) -> "AlgElem":
        other = self._lift(other)
        return AlgElem(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self) -> "AlgElem":
        return AlgElem(-self.a, -self.b)

    def __sub__(self, other) -> "AlgElem":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "AlgElem":
        return self._lift(other) - self

    def __mul__(self, other) -> "AlgElem":
        if isinstance(other, (int, Fraction, Poly)):
            return AlgElem(self.a * other, self.b * other)
        return AlgElem(
            self.a * other.a + self.b * other.b * FOUR_MINUS_Z2,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "AlgElem":
        result, base = AlgElem(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def evaluate(self, z: float) -> float:
        y = (4 - z * z) ** 0.5
        return float(self.a(float(z))) + float(self.b(float(z))) * y


@dataclass(frozen=True)
class CAlg:
    """Complex number re + i*im with AlgElem parts; i^2 = -1 is independent of y."""

    re: AlgElem
    im: AlgElem

    def __add__(self, other: "CAlg") -> "CAlg":
        return CAlg(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "CAlg") -> "CAlg":
        return CAlg(self.re - other.re, self.im - other.im)

    def __mul__(self, other) -> "CAlg":
        if not isinstance(other, CAlg):
            return CAlg(self.re * other, self.im * other)
        return CAlg(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CAlg":
        result, base = CAlg(AlgElem(1), AlgElem(0)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


class EvenPoly:
    """Even polynomial sum_j c_j z^(2j), stored by the coefficients c_j."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        self.coeffs = Poly(coeffs).coeffs

    @classmethod
    def from_poly(cls, p: Poly) -> "EvenPoly":
        if any(p[k] for k in range(1, len(p), 2)):
            raise ValueError(f"{p} is not even")
        return cls(p[k] for k in range(0, len(p), 2))

    def to_poly(self) -> Poly:
        out = []
        for c in self.coeffs:
            out.extend([c, Fraction(0)])
        return Poly(out)

    def in_w(self) -> Poly:
        """The polynomial q with p(z) = q(z^2)."""
        return Poly(self.coeffs)

    def __getitem__(self, j: int) -> Fraction:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Fraction(0)

    @property
    def degree(self) -> int:
        return 2 * (len(self.coeffs) - 1)

    def __eq__(self, other) -> bool:
        if isinstance(other, EvenPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, Poly):
            return self.to_poly() == other
        return NotImplemented

    def __add__(self, other: "EvenPoly") -> "EvenPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return EvenPoly(self[j] + other[j] for j in range(n))

    def scale(self, c: Number) -> "EvenPoly":
        return EvenPoly(x * Fraction(c) for x in self.coeffs)

    def __call__(self, z):
        return self.in_w()(z * z)

    def __repr__(self) -> str:
        return f"EvenPoly({self.to_poly()})"

    def is_zero(self) -> bool:
        return not self.coeffs


def sign_changes(values: Sequence[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.deriv()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def count_roots_half_open(p: Poly, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots of a squarefree ``p`` in (lo, hi]."""
    seq = sturm_sequence(p)
    return sign_changes([q(lo) for q in seq]) - sign_changes([q(hi) for q in seq])


def sturm_sign_constant(p: EvenPoly, lo: Number = -2, hi: Number = 2) -> bool:
    """True iff the even polynomial ``p`` is >= 0 everywhere on the open interval (lo, hi).

    Works in w = z^2.  Sign changes happen only at roots of odd
    multiplicity, which are counted with a Sturm sequence of the odd part.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    q = p.in_w()
    if q.is_zero():
        raise ValueError("p is identically zero")
    a2, b2 = lo * lo, hi * hi
    # w = 0 maps to z = 0, where z^2 has even multiplicity: never a sign change
    wlo = Fraction(0) if lo < 0 < hi else min(a2, b2)
    whi = max(a2, b2)
    odd = squarefree_odd_part(q)
    crossings = 0
    if odd.degree > 0:
        crossings = count_roots_half_open(odd, wlo, whi) - (odd(whi) == 0)
    if crossings > 0:
        return False
    # constant sign on the interval: probe points until q is nonzero
    for k in range(1, 64):
        w = wlo + (whi - wlo) * Fraction(k, 64 + k)
        val = q(w)
        if val != 0:
            return val > 0
    raise ArithmeticError("could not find a nonzero sample point")
