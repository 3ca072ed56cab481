"""Generating functions of tree walks by excess.

Superreduced walks come from a fixpoint equation; kernel polynomials follow
by Lagrange inversion; the walk series W_xi(z) by substituting x = zC(z)^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial


from .exactalg import (
    ExactSeries,
    Poly,
    binomial_series,
    catalan,
    catalan_series,
    series_reciprocal,
)


@dataclass(frozen=True)
class SuperreducedGF:
    """S(x, v, z): x marks root departures, v^m / m! vertices, z half-length."""

    xi_max: int
    series: ExactSeries
    iterations: int

    def laplace_x(self) -> ExactSeries:
        """Sum over root departures: sum_j j! [x^j] S, a series in (v, z)."""
        out: dict = {}
        for (j, m, l), c in self.series.terms.items():
            out[(m, l)] = out.get((m, l), 0) + c * factorial(j)
        return ExactSeries(("v", "z"), self.series.trunc[1:], out)

    def count(self, m: int, two_l: int) -> int:
        """Labelled number of superreduced walks with m vertices and length 2l."""
        c = self.laplace_x().coeff(m, two_l // 2) * factorial(m)
        assert c.denominator == 1
        return int(c)


@lru_cache(maxsize=None)
def superreduced_gf(xi_max: int) -> SuperreducedGF:
    """Solve S = v exp(L_t(D(t, xz) S(t, v, z))) by iteration from S = v."""
    if xi_max < 0:
        raise ValueError("xi_max must be non-negative")
    vars = ("x", "v", "z")
    trunc = (2 * xi_max, xi_max + 1, 2 * xi_max)
    v = ExactSeries.variable("v", vars, trunc)
    S = v
    bound = trunc[1] + trunc[2] + 1
    for it in range(1, bound + 1):
        # s_j(v, z) = [x^j] S
        slices: dict[int, dict] = {}
        for (j, m, l), c in S.terms.items():
            slices.setdefault(j, {})[(m, l)] = c
        L: dict = {}
        for j, sj in slices.items():
            for k in range(1, trunc[0]):
                w = Fraction(factorial(k + j), factorial(k + 1) * factorial(k))
                for (m, l), c in sj.items():
                    key = (k + 1, m, l + k + 1)
                    L[key] = L.get(key, 0) + w * c
        new = v * ExactSeries(vars, trunc, L).exp()
        if new == S:
            return SuperreducedGF(xi_max, S, it)
        S = new
    raise ArithmeticError("superreduced fixpoint did not converge")


def _excess_terms(S: SuperreducedGF, xi: int) -> dict[tuple[int, int], Fraction]:
    """{(m, l): coeff} of v^m z^l / m! with l - m + 1 = xi."""
    out = {}
    for (m, l), c in S.laplace_x().terms.items():
        if l - m + 1 == xi:
            out[(m, l)] = c
    return out


def extract_S_xi(S: SuperreducedGF, xi: int, keep_v: bool = False):
    """Superreduced walks of excess xi.

    Returns a Poly in z (v set to 1), or with ``keep_v`` a dict (m, l) -> coeff.
    """
    if xi < 0 or xi > S.xi_max:
        raise ValueError(f"xi={xi} outside 0..{S.xi_max}")
    terms = _excess_terms(S, xi)
    if keep_v:
        return terms
    coeffs: dict[int, Fraction] = {}
    for (m, l), c in terms.items():
        coeffs[l] = coeffs.get(l, 0) + c
    n = max(coeffs, default=-1) + 1
    return Poly(coeffs.get(l, 0) for l in range(n))


@dataclass(frozen=True)
class KernelGF:
    """K_xi(u, v, z) with u marking simple edges."""

    xi: int
    series: ExactSeries  # vars (u, v, z)

    def at_v1(self) -> dict[tuple[int, int], Fraction]:
        """{(s, l): coeff} of K_xi(u, 1, z)."""
        out: dict = {}
        for (s, m, l), c in self.series.terms.items():
            out[(s, l)] = out.get((s, l), 0) + c
        return out

    def u_slice(self, s: int) -> Poly:
        co = {l: c for (t, l), c in self.at_v1().items() if t == s}
        return Poly(co.get(l, 0) for l in range(max(co, default=-1) + 1))

    def count(self, s: int, two_l: int) -> int:
        l = two_l // 2
        m = l - self.xi + 1
        if m < 1:
            return 0
        c = self.series.coeff(s, m, l) * factorial(m)
        assert c.denominator == 1
        return int(c)

    def to_text(self) -> str:
        parts = []
        for (s, l), c in sorted(self.at_v1().items(), key=lambda t: (-t[0][0], -t[0][1])):
            mono = "*".join(
                x for x in (f"u^{s}" if s > 1 else ("u" if s else ""), f"z^{l}" if l > 1 else ("z" if l else "")) if x
            )
            coef = "" if c == 1 and mono else str(c)
            parts.append(coef + ("*" if coef and mono else "") + mono)
        return " + ".join(parts) if parts else "0"


def _phi(S: SuperreducedGF, xi: int) -> ExactSeries:
    """The Lagrange kernel in (t, y, v), y tracking excess and z eliminated.

    A term t^b y^e v^m stands for t^b v^m z^(m + e) times y^e.
    """
    vars = ("t", "y", "v")
    trunc = (2 * xi - 2, xi - 1, 3 * xi - 1)
    terms: dict = {}
    # contribution of the single vertex, net of the subtracted terms
    for k in range(trunc[0]):
        if 1 + k <= trunc[1] and 2 + k <= trunc[0]:
            terms[(2 + k, 1 + k, 1)] = Fraction(1)
    for xp in range(1, xi + 1):
        for (m, l), c in _excess_terms(S, xp).items():
            for b in range(trunc[0] + 1):
                e = xp - 1 + b
                if e > trunc[1]:
                    break
                key = (b, e, m)
                terms[key] = terms.get(key, 0) + c * comb(2 * l + b, b)
    return ExactSeries(vars, trunc, terms)


@lru_cache(maxsize=None)
def kernel_gf(xi: int) -> KernelGF:
    """K_xi = S_xi + sum_s u^s/(s+1) [t^s y^(xi-1)] Phi^(s+1)."""
    if xi < 0:
        raise ValueError("xi must be non-negative")
    vars = ("u", "v", "z")
    trunc = (max(2 * xi - 2, 0), 3 * xi - 1 if xi else 1, max(4 * xi - 2, 0))
    S = superreduced_gf(xi)
    terms: dict = {}
    for (m, l), c in _excess_terms(S, xi).items():
        terms[(0, m, l)] = c
    if xi >= 2:
        phi = _phi(S, xi)
        power = phi
        for s in range(1, 2 * xi - 1):
            power = power * phi  # Phi^(s+1)
            for (t, y, m), c in power.terms.items():
                if t == s and y == xi - 1:
                    key = (s, m, m + xi - 1)
                    terms[key] = terms.get(key, 0) + c / (s + 1)
    return KernelGF(xi, ExactSeries(vars, trunc, terms))


@dataclass(frozen=True)
class CatalanForm:
    """C(z) * sum_s K_s(x) / (1 - x)^(s+1) with x = zC(z)^2."""

    xi: int
    polys: tuple  # K_{xi,s} as Poly, index s

    def check_structure(self) -> list[str]:
        """Problems with the normal form; an empty list means all holds."""
        xi, bad = self.xi, []
        if xi == 0:
            return bad
        for s, p in enumerate(self.polys):
            if not p.is_nonnegative():
                bad.append(f"K_{xi},{s} has a negative coefficient")
            if p.degree > 2 * xi + s:
                bad.append(f"K_{xi},{s} has degree {p.degree} > {2 * xi + s}")
        if xi >= 1:
            top = 2 * xi - 2
            want = Poly.monomial(4 * xi - 2, catalan(xi - 1))
            if self.poly(top) != want:
                bad.append(f"K_{xi},{top} = {self.poly(top)}, expected {want}")
        if xi >= 2:
            s = 2 * xi - 3
            want = Poly.monomial(4 * xi - 3, (3 * xi - 1) * catalan(xi - 1))
            if self.poly(s) != want:
                bad.append(f"K_{xi},{s} = {self.poly(s)}, expected {want}")
        return bad

    def poly(self, s: int) -> Poly:
        return self.polys[s] if 0 <= s < len(self.polys) else Poly()

    def to_json_obj(self) -> dict:
        from .exactalg import format_rational

        return {
            "xi": self.xi,
            "form": "C(z) * sum_s K_s(x) / (1-x)^(s+1), x = z*C(z)^2",
            "K": [[format_rational(c) for c in p.coeffs] for p in self.polys],
        }


def to_catalan_form(xi: int) -> CatalanForm:
    if xi == 0:
        return CatalanForm(0, (Poly([1]),))
    K = kernel_gf(xi)
    return CatalanForm(xi, tuple(K.u_slice(s) for s in range(2 * xi - 1)))


def _x_series(order: int) -> ExactSeries:
    C = catalan_series(order)
    return C - 1  # = z C^2


def treewalk_gf(xi: int, order: int) -> ExactSeries:
    """W_xi(z) through z^order via substitution of x = zC(z)^2."""
    if order < 0:
        raise ValueError("order must be non-negative")
    C = catalan_series(order)
    if xi == 0:
        return C
    form = to_catalan_form(xi)
    x = _x_series(order)
    one = ExactSeries.constant(1, ("z",), (order,))
    r = series_reciprocal(one - x)
    acc = ExactSeries(("z",), (order,))
    rp = r
    for p in form.polys:
        px = ExactSeries(("z",), (order,))
        xp = one
        for c in p.coeffs:
            if c:
                px = px + xp.scale(c)
            xp = xp * x
        acc = acc + px * rp
        rp = rp * r
    return acc * C


def catalan_form_eval(form: CatalanForm, order: int) -> ExactSeries:
    """Expand the closed form independently, using 1 - zC^2 = C sqrt(1-4z).

    Each term a z^j C^(2j) / (1-x)^(s+1) becomes a z^j C^(2j-s-1) (1-4z)^(-(s+1)/2).
    """
    C = catalan_series(order)
    if form.xi == 0:
        return C  # W_0 = C is not of the shape C/(1-x) K(...)
    Cinv = series_reciprocal(C)
    acc = ExactSeries(("z",), (order,))
    for s, p in enumerate(form.polys):
        root = binomial_series(Fraction(s + 1, 2), Fraction(4), order)
        for j, a in enumerate(p.coeffs):
            if not a or j > order:
                continue
            e = 2 * j - s  # C * C^(2j - s - 1)
            cp = C ** e if e >= 0 else Cinv ** (-e)
            acc = acc + (cp * root).shift("z", j).scale(a)
    return acc


def w_count(xi: int, two_l: int) -> int:
    """Labelled tree walks of excess xi and length 2l, read off W_xi."""
    l = two_l // 2
    m = l - xi + 1
    if m < 1:
        return 0
    c = treewalk_gf(xi, l).coeff(l) * factorial(m)
    assert c.denominator == 1
    return int(c)
