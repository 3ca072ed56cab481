"""Exact Stieltjes-Perron inversion for series that are polynomials in C(z).

On (-2, 2) the boundary value of w S_sigma(w) is C = z (z - i y) / 2 with
y = sqrt(4 - z^2).  A moment series P~(C(z)) has Stieltjes transform
P~(C) / w, and the density is -Im(.) / pi.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence, Union

from .exactalg import AlgElem, CAlg, EvenPoly, Poly, catalan, format_rational, sturm_sign_constant
from .moments import ScalingPoly, ViPolyForm, compute_Vi, P5_SCALING

Number = Union[int, Fraction]

# C on the boundary: z^2/2 - i z y / 2
_C_BOUNDARY = CAlg(AlgElem(Poly([0, 0, Fraction(1, 2)])), AlgElem(Poly(), Poly([0, Fraction(-1, 2)])))
# 1 / (2 - C) = (y - i z) / (2 y); the 1/y is tracked separately
_INV_2_MINUS_C_TIMES_Y = CAlg(AlgElem(Poly(), Poly([Fraction(1, 2)])), AlgElem(Poly([0, Fraction(-1, 2)])))


@dataclass(frozen=True)
class CatalanPoly:
    """V(z) = P~(C(z)) / (2 - C(z))^d, with P~ given by coefficients in C."""

    coeffs: Poly
    d: int = 0

    def to_series(self, order: int):
        from .exactalg import catalan_series, series_reciprocal

        C = catalan_series(order)
        acc = C.scale(0)
        Cp = C ** 0
        for c in self.coeffs.coeffs:
            if c:
                acc = acc + Cp.scale(c)
            Cp = Cp * C
        if self.d:
            acc = acc * series_reciprocal(2 - C) ** self.d
        return acc


class NotPolynomialForm(ValueError):
    pass


def to_catalan_poly(v: ViPolyForm, allow_rational: bool = False) -> CatalanPoly:
    """P~(C) = C * Q(C - 1); with ``allow_rational`` the (1-x) = (2-C) poles are kept."""
    shift = Poly([-1, 1])  # x = C - 1
    C = Poly([0, 1])
    if v.is_polynomial:
        return CatalanPoly(C * v.Q.compose(shift))
    if not allow_rational:
        raise NotPolynomialForm(f"V_{v.i} is not a polynomial in zC^2 times C")
    if v.rest.b:
        raise NotPolynomialForm(f"V_{v.i} has a (1 + x) denominator")
    return CatalanPoly(C * v.rest.num.compose(shift), v.rest.a)


@dataclass(frozen=True)
class SemicircleDensityPoly:
    """Density P(z) sqrt(4 - z^2) / (2 pi) on (-2, 2)."""

    P: EvenPoly

    def moment(self, two_l: int) -> Fraction:
        return density_moment(self, two_l)

    def __call__(self, z: float) -> float:
        return sample_curve(self, [z])[0][1]

    def to_json_obj(self) -> dict:
        return {
            "poly": [format_rational(c) for c in self.P.to_poly().coeffs],
            "weight": "sqrt(4-z^2)/(2pi)",
            "support": [-2, 2],
        }


@dataclass(frozen=True)
class ArcsineDensityPoly:
    """Density T(z) / (pi sqrt(4 - z^2)) on (-2, 2)."""

    T: EvenPoly

    def moment(self, two_l: int) -> Fraction:
        if two_l % 2:
            return Fraction(0)
        l = two_l // 2
        return sum((c * comb(2 * (l + j), l + j) for j, c in enumerate(self.T.coeffs)), Fraction(0))

    def to_json_obj(self) -> dict:
        return {
            "poly": [format_rational(c) for c in self.T.to_poly().coeffs],
            "weight": "1/(pi*sqrt(4-z^2))",
            "support": [-2, 2],
        }


def semicircle_to_arcsine(d: SemicircleDensityPoly) -> ArcsineDensityPoly:
    """P y / (2 pi) = (P (4 - z^2) / 2) / (pi y)."""
    return ArcsineDensityPoly(EvenPoly.from_poly(d.P.to_poly() * Poly([2, 0, Fraction(-1, 2)])))


def _poly_over_z(p: Poly) -> Poly:
    if p[0] != 0:
        raise ArithmeticError("boundary value has a surviving pole at z = 0")
    return Poly(p.coeffs[1:])


def stieltjes_invert(p: CatalanPoly):
    """Density of the (signed) measure whose moment series is P~(C(z)).

    Polynomial P~ gives a SemicircleDensityPoly; a (2 - C)^d denominator gives
    an ArcsineDensityPoly (the weight becomes 1/sqrt(4 - z^2)).
    """
    acc = CAlg(AlgElem(0), AlgElem(0))
    Cp = CAlg(AlgElem(1), AlgElem(0))
    for c in p.coeffs.coeffs:
        if c:
            acc = acc + Cp * c
        Cp = Cp * _C_BOUNDARY
    if p.d == 0:
        im = acc.im
        if not im.a.is_zero():
            raise ArithmeticError("a real pole term survives at the boundary")
        # density = -Im / (pi z) = -b y / (pi z) = P y / (2 pi)
        P = _poly_over_z(im.b) * Fraction(-2)
        return SemicircleDensityPoly(EvenPoly.from_poly(P))
    # V = acc * (y^-1 * X)^d with X = (y - i z)/2
    acc = acc * (_INV_2_MINUS_C_TIMES_Y ** p.d)
    im = acc.im  # true imaginary part is im / y^d
    # T = pi y density = -y Im / z = -(im.a + im.b y) y^(1-d) / z
    if p.d == 1:
        t = im  # y^0
    else:
        # divide by y^(d-1): multiply by y^(d-1) and divide by (4 - z^2)^(d-1)
        t = im * AlgElem.y() ** (p.d - 1)
        q = Poly([4, 0, -1]) ** (p.d - 1)
        t = AlgElem(t.a.exact_div(q), t.b.exact_div(q))
    if not t.b.is_zero():
        raise ArithmeticError("boundary value is not of arcsine type")
    T = _poly_over_z(t.a) * Fraction(-1)
    return ArcsineDensityPoly(EvenPoly.from_poly(T))


def density_moment(d, two_l: int) -> Fraction:
    """Exact moment: sum_j P_2j Cat(l + j) (zero for odd orders)."""
    if two_l < 0:
        raise ValueError("order must be non-negative")
    if isinstance(d, ArcsineDensityPoly):
        return d.moment(two_l)
    if two_l % 2:
        return Fraction(0)
    l = two_l // 2
    return sum((c * catalan(l + j) for j, c in enumerate(d.P.coeffs)), Fraction(0))


@lru_cache(maxsize=None)
def _standard(i: int) -> SemicircleDensityPoly:
    return stieltjes_invert(to_catalan_poly(compute_Vi(i, P5_SCALING)))


def standard_densities(n: int = 5) -> list[SemicircleDensityPoly]:
    """sigma, sigma_1, ..., sigma_n under the p5 scaling."""
    return [_standard(i) for i in range(n + 1)]


def density_sum(c: Number, T: int) -> SemicircleDensityPoly:
    """f_0 + c^-1 f_1 + ... + c^-T f_T."""
    c = Fraction(c)
    acc = EvenPoly()
    for i, d in enumerate(standard_densities(T)):
        acc = acc + d.P.scale(c ** (-i))
    return SemicircleDensityPoly(acc)


def truncation_order_t(c: Number, max_order: int = 5, all_prefixes: bool = False) -> int:
    """Largest T <= max_order with f_0 + ... + c^-T f_T >= 0 on (-2, 2).

    With ``all_prefixes`` every partial sum up to T must be nonnegative.
    """
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    best = 0
    for T in range(max_order + 1):
        ok = sturm_sign_constant(density_sum(c, T).P)
        if ok:
            best = T
        elif all_prefixes:
            break
    return best


def enriquez_menard_scaling() -> ScalingPoly:
    return ScalingPoly.from_a([1, 1, Fraction(1, 4)])


def enriquez_menard_densities():
    """Densities at orders 1 and 2 under p(x) = 1 + x + x^2/4."""
    sc = enriquez_menard_scaling()
    out = []
    for i in (1, 2):
        v = compute_Vi(i, sc)
        out.append(stieltjes_invert(to_catalan_poly(v, allow_rational=True)))
    return out


def sample_curve(d, grid: Sequence[float]) -> list[tuple[float, float]]:
    import math

    out = []
    for z in grid:
        if abs(z) >= 2:
            out.append((z, 0.0))
            continue
        y = math.sqrt(4 - z * z)
        if isinstance(d, SemicircleDensityPoly):
            val = float(d.P.to_poly()(float(z))) * y / (2 * math.pi)
        else:
            val = float(d.T.to_poly()(float(z))) / (math.pi * y)
        out.append((z, val))
    return out
