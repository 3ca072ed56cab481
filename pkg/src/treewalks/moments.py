"""Moments of the limiting spectral measure and the change of scaling.

Everything built from W_xi lives in Q(x) with x = zC(z)^2.  Since C = 1 + x
and z = x/(1+x)^2, each W_xi, its z-derivatives and the combinations V_i are
rational functions N(x) / ((1-x)^a (1+x)^b).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional, Sequence, Union

from .exactalg import (
    ExactSeries,
    Poly,
    catalan_series,
    format_rational,
    ordinary_bell,
    series_reciprocal,
)
from .gf import to_catalan_form, treewalk_gf

Number = Union[int, Fraction]

ONE_MINUS_X = Poly([1, -1])
ONE_PLUS_X = Poly([1, 1])

P5 = (1, 1, 1, 4, 33, 386)
Q5 = (1, -1, 0, -3, -26, -324)
# f(x) with f(x)^2 = p5(x) + O(x^6)
F_SCALE = (
    Fraction(1),
    Fraction(1, 2),
    Fraction(3, 8),
    Fraction(29, 16),
    Fraction(1987, 128),
    Fraction(47247, 256),
)


class XRational:
    """N(x) / ((1-x)^a (1+x)^b), kept with the largest possible cancellation."""

    __slots__ = ("num", "a", "b")

    def __init__(self, num: Poly, a: int = 0, b: int = 0):
        num = num if isinstance(num, Poly) else Poly([num])
        if a < 0:
            num, a = num * ONE_MINUS_X ** (-a), 0
        if b < 0:
            num, b = num * ONE_PLUS_X ** (-b), 0
        if num.is_zero():
            a = b = 0
        while a > 0 and num(Fraction(1)) == 0:
            num, a = num.exact_div(ONE_MINUS_X), a - 1
        while b > 0 and num(Fraction(-1)) == 0:
            num, b = num.exact_div(ONE_PLUS_X), b - 1
        self.num, self.a, self.b = num, a, b

    @classmethod
    def from_catalan_form(cls, polys: Sequence[Poly], xi: int) -> "XRational":
        if xi == 0:
            return cls(ONE_PLUS_X)
        acc = cls(Poly())
        for s, p in enumerate(polys):
            acc = acc + cls(p * ONE_PLUS_X, s + 1, 0)
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, XRational):
            return NotImplemented
        return (self.num, self.a, self.b) == (other.num, other.a, other.b)

    def __repr__(self) -> str:
        return f"XRational(({self.num}) / ((1-x)^{self.a} (1+x)^{self.b}))"

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "XRational") -> "XRational":
        a, b = max(self.a, other.a), max(self.b, other.b)
        n1 = self.num * ONE_MINUS_X ** (a - self.a) * ONE_PLUS_X ** (b - self.b)
        n2 = other.num * ONE_MINUS_X ** (a - other.a) * ONE_PLUS_X ** (b - other.b)
        return XRational(n1 + n2, a, b)

    def __neg__(self) -> "XRational":
        return XRational(-self.num, self.a, self.b)

    def __sub__(self, other: "XRational") -> "XRational":
        return self + (-other)

    def __mul__(self, other) -> "XRational":
        if isinstance(other, (int, Fraction)):
            return XRational(self.num * Fraction(other), self.a, self.b)
        if isinstance(other, Poly):
            return XRational(self.num * other, self.a, self.b)
        return XRational(self.num * other.num, self.a + other.a, self.b + other.b)

    __rmul__ = __mul__

    def d_dx(self) -> "XRational":
        N, a, b = self.num, self.a, self.b
        top = N.deriv() * ONE_MINUS_X * ONE_PLUS_X + N * ONE_PLUS_X * a - N * ONE_MINUS_X * b
        return XRational(top, a + 1, b + 1)

    def d_dz(self) -> "XRational":
        # dz/dx = (1-x)/(1+x)^3
        return XRational(ONE_PLUS_X ** 3, 1, 0) * self.d_dx()

    def times_z_power(self, k: int) -> "XRational":
        return XRational(Poly.monomial(k), 0, 2 * k) * self

    def over_C(self) -> "XRational":
        return XRational(self.num, self.a, self.b + 1)

    def polynomial(self) -> Optional[Poly]:
        return self.num if self.a == 0 and self.b == 0 else None

    def polar_part(self) -> list[Fraction]:
        """alpha_j for j = 1..a in sum_j alpha_j / (1-x)^j (requires b = 0)."""
        if self.b:
            raise ValueError("polar part in (1-x) needs no (1+x) denominator")
        # N(1 - y) / y^a: coefficient of y^(a-j) is alpha_j
        shifted = self.num.compose(Poly([1, -1]))
        return [shifted[self.a - j] for j in range(1, self.a + 1)]

    def to_series(self, order: int) -> ExactSeries:
        """Expansion in z, using x = C - 1 and 1 + x = C."""
        C = catalan_series(order)
        x = C - 1
        acc = ExactSeries(("z",), (order,))
        xp = ExactSeries.constant(1, ("z",), (order,))
        for c in self.num.coeffs:
            if c:
                acc = acc + xp.scale(c)
            xp = xp * x
        one = ExactSeries.constant(1, ("z",), (order,))
        if self.a:
            acc = acc * series_reciprocal(one - x) ** self.a
        if self.b:
            acc = acc * series_reciprocal(C) ** self.b
        return acc


@lru_cache(maxsize=None)
def w_rational(xi: int) -> XRational:
    form = to_catalan_form(xi)
    return XRational.from_catalan_form(form.polys, xi)


# moments ------------------------------------------------------------------


def moment_poly(l: int, max_excess: Optional[int] = None) -> Poly:
    """m_2l as a polynomial in 1/c; the coefficient of c^-xi is [z^l] W_xi."""
    if l < 0:
        raise ValueError("l must be non-negative")
    top = l if max_excess is None else min(l, max_excess)
    coeffs = []
    for xi in range(top + 1):
        # the lowest term of W_xi is z^(xi+1) for xi >= 1
        coeffs.append(Fraction(0) if xi >= 1 and l <= xi else treewalk_gf(xi, l).coeff(l))
    return Poly(coeffs)


def moment_exact(l: int, c: Number) -> Fraction:
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    return moment_poly(l)(1 / c)


@dataclass(frozen=True)
class MomentVector:
    """Even moments m_0..m_2L as polynomials in 1/c, exact through x^order when truncated."""

    entries: tuple  # Poly per l
    order: Optional[int] = None  # None means exact polynomials

    @classmethod
    def of_mu(cls, l_max: int, order: Optional[int] = None) -> "MomentVector":
        return cls(tuple(moment_poly(l, order) for l in range(l_max + 1)), order)

    def at(self, c: Number) -> list[Fraction]:
        x = 1 / Fraction(c)
        return [p(x) for p in self.entries]

    def __getitem__(self, l: int) -> Poly:
        return self.entries[l]


def _trunc(p: Poly, order: Optional[int]) -> Poly:
    return p if order is None else Poly(p.coeffs[: order + 1])


def dilate(m: MomentVector, alpha: Optional[Number] = None, alpha_squared=None) -> MomentVector:
    """Moments of the dilated measure: m_2l -> alpha^(2l) m_2l.

    ``alpha_squared`` may be a Poly in x = 1/c (e.g. 1/p(x)); products are then
    truncated at ``m.order``.
    """
    if (alpha is None) == (alpha_squared is None):
        raise ValueError("give exactly one of alpha, alpha_squared")
    if alpha is not None:
        a2 = Fraction(alpha) ** 2
        return MomentVector(tuple(p * (a2 ** l) for l, p in enumerate(m.entries)), m.order)
    a2 = alpha_squared if isinstance(alpha_squared, Poly) else Poly(alpha_squared)
    out, power = [], Poly([1])
    for p in m.entries:
        out.append(_trunc(p * power, m.order))
        power = _trunc(power * a2, m.order)
    return MomentVector(tuple(out), m.order)


# scaling ---------------------------------------------------------------------


@dataclass(frozen=True)
class ScalingPoly:
    a: tuple  # p_N coefficients, a_0 = 1
    b: tuple  # q_N = 1/p_N through x^N

    @classmethod
    def from_a(cls, a: Sequence[Number]) -> "ScalingPoly":
        a = tuple(Fraction(c) for c in a)
        b = series_reciprocal(ExactSeries.univariate(a, "x", len(a) - 1)).coefficients()
        b = b + [Fraction(0)] * (len(a) - len(b))
        return cls(a, tuple(b))

    @classmethod
    def from_b(cls, b: Sequence[Number]) -> "ScalingPoly":
        b = tuple(Fraction(c) for c in b)
        a = series_reciprocal(ExactSeries.univariate(b, "x", len(b) - 1)).coefficients()
        a = a + [Fraction(0)] * (len(b) - len(a))
        return cls(tuple(a), b)

    @property
    def N(self) -> int:
        return len(self.a) - 1


P5_SCALING = ScalingPoly.from_a(P5)


@dataclass(frozen=True)
class ViPolyForm:
    """V_i = C * Q_i(x) when ``Q`` is set; ``rest`` is always V_i / C."""

    i: int
    rest: XRational
    Q: Optional[Poly] = None
    verified_order: int = 0

    @property
    def is_polynomial(self) -> bool:
        return self.Q is not None


class InsufficientOrder(ArithmeticError):
    pass


def _vi_rational(i: int, b: Sequence[Fraction], W: dict) -> XRational:
    """W_i + sum_{xi<i} sum_k z^k W_xi^(k) Bhat_{i-xi,k}(b) / k!."""
    acc = W[i]
    for xi in range(i):
        n = i - xi
        deriv = W[xi]
        for k in range(1, n + 1):
            deriv = deriv.d_dz()
            coef = ordinary_bell(n, k, list(b[1 : n - k + 2]))
            if coef:
                acc = acc + deriv.times_z_power(k) * (coef / factorial(k))
    return acc


def _vi_series(i: int, b: Sequence[Fraction], order: int, W: dict) -> ExactSeries:
    """The same combination computed directly on truncated z-series."""
    z = ExactSeries.variable("z", ("z",), (order,))
    acc = W[i].truncate((order,))
    for xi in range(i):
        n = i - xi
        deriv = W[xi]
        zk = ExactSeries.constant(1, ("z",), (order,))
        for k in range(1, n + 1):
            deriv = deriv.derivative("z")
            zk = zk * z
            coef = ordinary_bell(n, k, list(b[1 : n - k + 2]))
            if coef:
                acc = acc + (zk * deriv.truncate((order,))).scale(coef / factorial(k))
    return acc


def required_order(i: int, N: int) -> int:
    return 4 * i + 2 * N + 8


def _w_inputs(i: int, w_override: Optional[dict], series_order: Optional[int] = None):
    W = {xi: w_rational(xi) for xi in range(i + 1)}
    if w_override:
        for xi, r in w_override.items():
            if xi <= i:
                W[xi] = r
    if series_order is None:
        return W, None
    Ws = {}
    for xi in range(i + 1):
        # enough terms to survive i - xi derivatives
        o = series_order + i - xi
        if w_override and xi in w_override:
            Ws[xi] = w_override[xi].to_series(o)
        else:
            Ws[xi] = treewalk_gf(xi, o)
    return W, Ws


def compute_Vi(
    i: int,
    scaling: ScalingPoly = P5_SCALING,
    w_override: Optional[dict] = None,
    verify_order: Optional[int] = None,
) -> ViPolyForm:
    """V_i = [c^-i] of the rescaled moment series, reduced in x = zC^2.

    The reduction is checked against a direct z-series computation through
    ``verify_order`` terms (default 4i + 2N + 8); pass 0 to skip.
    """
    if i < 0 or i > scaling.N:
        raise ValueError(f"need 0 <= i <= N = {scaling.N}")
    need = required_order(i, scaling.N)
    order = need if verify_order is None else verify_order
    if 0 < order < need:
        raise InsufficientOrder(f"V_{i}: certifying the reduction needs z-series order >= {need}, got {order}")
    W, Ws = _w_inputs(i, w_override, order if order else None)
    V = _vi_rational(i, scaling.b, W)
    rest = V.over_C()
    if order:
        direct = _vi_series(i, scaling.b, order, Ws)
        if V.to_series(order) != direct:
            raise InsufficientOrder(
                f"V_{i}: rational reduction disagrees with the z-series through order {order}"
            )
    return ViPolyForm(i, rest, rest.polynomial(), order)


@dataclass
class ScalingResult:
    N: int
    a: list = field(default_factory=list)
    b: list = field(default_factory=list)
    Q: list = field(default_factory=list)
    status: list = field(default_factory=list)  # "ok" or "failed" per order 0..
    residual: Optional[XRational] = None

    @property
    def success(self) -> bool:
        return all(s == "ok" for s in self.status) and len(self.status) == self.N + 1

    def to_json_obj(self) -> dict:
        return {
            "N": self.N,
            "a": [format_rational(c) for c in self.a],
            "b": [format_rational(c) for c in self.b],
            "Q": [[format_rational(c) for c in q.coeffs] for q in self.Q],
            "status": self.status,
            "residual": None
            if self.residual is None
            else {
                "num": [format_rational(c) for c in self.residual.num.coeffs],
                "one_minus_x_power": self.residual.a,
                "one_plus_x_power": self.residual.b,
            },
        }


def scaling_search(N: int, w_override: Optional[dict] = None, verify: bool = True) -> ScalingResult:
    """Find b_1..b_N order by order so that every V_i reduces to C * Q_i(x).

    b_i only enters through b_i z W_0' = C b_i (-1 + 1/(1-x)), so it is fixed by
    the simple pole; all higher poles must then vanish on their own.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    res = ScalingResult(N)
    b = [Fraction(1)]
    for i in range(N + 1):
        if i == 0:
            res.Q.append(Poly([1]))
            res.status.append("ok")
            continue
        W, _ = _w_inputs(i, w_override)
        rest = _vi_rational(i, b + [Fraction(0)], W).over_C()
        if rest.b:
            res.status.append("failed")
            res.residual = rest
            break
        alpha = rest.polar_part()
        bi = -alpha[0] if alpha else Fraction(0)
        if any(alpha[1:]):
            res.status.append("failed")
            res.residual = XRational(rest.num, rest.a, 0)
            b.append(bi)
            break
        b.append(bi)
        scaling = ScalingPoly.from_b(b)
        form = compute_Vi(i, scaling, w_override, None if verify else 0)
        if not form.is_polynomial:
            res.status.append("failed")
            res.residual = form.rest
            break
        res.Q.append(form.Q)
        res.status.append("ok")
    res.b = b
    res.a = list(ScalingPoly.from_b(b).a)
    return res


def perturbed_w2() -> XRational:
    """W_2 + z^3 C^7 / (1 - zC^2)^3; note z^3 C^7 = x^3 (1 + x)."""
    return w_rational(2) + XRational(Poly.monomial(3) * ONE_PLUS_X, 3, 0)


def geometric_scaling_check(i: int) -> int:
    """Denominator order d of V^_i under p(x) = sum x^k, i.e. q(x) = 1 - x."""
    b = [Fraction(1), Fraction(-1)] + [Fraction(0)] * max(i - 1, 0)
    W, _ = _w_inputs(i, None)
    rest = _vi_rational(i, b[: i + 1] if i >= 1 else b[:1], W).over_C()
    if rest.b:
        raise ArithmeticError(f"V^_{i}/C has a (1+x) denominator: {rest}")
    return rest.a


def derivative_leading_check(xi: int, k: int) -> bool:
    """The two highest poles of W_xi^(k) in (1 - zC^2) match the closed forms.

    Uses z^a C^b = x^a (1+x)^(b-2a).
    """
    if xi < 0 or k < 0 or (xi >= 1 and k == 0 and xi < 2) or (xi == 0 and k == 0):
        raise ValueError(f"no closed form for xi={xi}, k={k}")
    W = w_rational(xi)
    for _ in range(k):
        W = W.d_dz()

    def zc(pa, pc, pole, coef):
        # coef * z^pa C^pc / (1-x)^pole
        return XRational(Poly.monomial(pa) * Fraction(coef), pole, 0) * XRational(
            ONE_PLUS_X ** max(pc - 2 * pa, 0), 0, max(2 * pa - pc, 0)
        )

    if xi == 0 and k == 1:
        return W == zc(0, 3, 1, 1)
    if xi == 0:
        coef = Fraction(factorial(2 * k - 2), factorial(k - 1))
        lead = zc(k - 1, 4 * k - 1, 2 * k - 1, coef) + zc(k - 2, 4 * k - 3, 2 * k - 2, coef * k)
        rest_pole = 2 * k - 3
    else:
        coef = Fraction(factorial(2 * xi + 2 * k - 2), factorial(xi + k - 1) * factorial(xi))
        lead = zc(4 * xi + k - 2, 8 * xi + 4 * k - 3, 2 * xi + 2 * k - 1, coef) + zc(
            4 * xi + k - 3, 8 * xi + 4 * k - 5, 2 * xi + 2 * k - 2, coef * (3 * xi + k - 1)
        )
        rest_pole = 2 * xi + 2 * k - 3
    rest = W - lead
    return rest.a <= max(rest_pole, 0)


def thm2_residual(l_max: int, order: int = 7, densities=None) -> list[Poly]:
    """m_2l(mu^c) - f(1/c)^(2l) sum_i c^-i m_2l(sigma_i), per l, through (1/c)^order.

    ``densities`` supplies the sigma_i for i <= 5 (SemicircleDensityPoly list);
    by default they come from stieltjes inversion of V_0..V_5.
    """
    from .density import density_moment, standard_densities

    if densities is None:
        densities = standard_densities()
    f = Poly(F_SCALE)
    out = []
    for l in range(l_max + 1):
        mu = moment_poly(l, order)
        corr = Poly([density_moment(d, 2 * l) for d in densities])
        rhs = _trunc(_trunc(f ** (2 * l), order) * corr, order)
        out.append(_trunc(mu - rhs, order))
    return out


def f_squared_matches_p5() -> bool:
    f = Poly(F_SCALE)
    return _trunc(f * f, 5) == Poly(P5)
