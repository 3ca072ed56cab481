"""Truncated multivariate power series with exact rational coefficients.

A series carries an ordered tuple of variable names and a per-variable
maximum degree.  Every operation re-truncates its result, so coefficients
inside the truncation box are always exact and nothing outside it is stored.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence, Union

from .poly import Poly

Number = Union[int, Fraction]
ALLOWED_VARS = frozenset("zvuxty")


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"num/den"`` (or an integer string) into a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(text.strip())


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


class ExactSeries:
    __slots__ = ("vars", "trunc", "terms")

    def __init__(
        self,
        vars: Sequence[str],
        trunc: Sequence[int],
        terms: Mapping[tuple[int, ...], Number] = None,
    ):
        vars = tuple(vars)
        trunc = tuple(int(t) for t in trunc)
        if len(vars) != len(trunc):
            raise ValueError("one truncation degree per variable is required")
        if len(set(vars)) != len(vars) or not set(vars) <= ALLOWED_VARS:
            raise ValueError(f"bad variable list {vars!r}")
        if any(t < 0 for t in trunc):
            raise ValueError("truncation degrees must be non-negative")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(vars):
                raise ValueError(f"exponent tuple {exps} does not match {vars}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponents are not allowed")
            if all(e <= t for e, t in zip(exps, trunc)):
                c = Fraction(c)
                if c:
                    clean[exps] = c
        self.vars = vars
        self.trunc = trunc
        self.terms = clean

    # constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c: Number, vars: Sequence[str], trunc: Sequence[int]):
        return cls(vars, trunc, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, name: str, vars: Sequence[str], trunc: Sequence[int]):
        exps = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, trunc, {exps: 1})

    @classmethod
    def univariate(cls, coeffs: Iterable[Number], var: str = "z", order: int = None):
        coeffs = list(coeffs)
        if order is None:
            order = max(len(coeffs) - 1, 0)
        return cls((var,), (order,), {(k,): c for k, c in enumerate(coeffs)})

    def _like(self, terms) -> "ExactSeries":
        return ExactSeries(self.vars, self.trunc, terms)

    # inspection ---------------------------------------------------------

    def coeff(self, *exps: int) -> Fraction:
        if len(exps) == 1 and isinstance(exps[0], tuple):
            exps = exps[0]
        return self.terms.get(tuple(exps), Fraction(0))

    def coefficients(self) -> list[Fraction]:
        """Dense coefficient list of a univariate series, through its truncation."""
        if len(self.vars) != 1:
            raise ValueError("coefficients() needs a univariate series")
        return [self.terms.get((k,), Fraction(0)) for k in range(self.trunc[0] + 1)]

    def to_poly(self) -> Poly:
        return Poly(self.coefficients())

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactSeries):
            return NotImplemented
        return (self.vars, self.trunc, self.terms) == (other.vars, other.trunc, other.terms)

    def __hash__(self):
        return hash((self.vars, self.trunc, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"ExactSeries({self.vars}, trunc={self.trunc}, {len(self.terms)} terms)"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, exps) if e
            )
            pieces.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(pieces)

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "ExactSeries"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")

    def _common_trunc(self, other: "ExactSeries") -> tuple[int, ...]:
        return tuple(min(a, b) for a, b in zip(self.trunc, other.trunc))

    def _lift(self, other) -> "ExactSeries":
        if isinstance(other, ExactSeries):
            self._check(other)
            return other
        return ExactSeries.constant(other, self.vars, self.trunc)

    def __add__(self, other) -> "ExactSeries":
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return ExactSeries(self.vars, self._common_trunc(other), out)

    __radd__ = __add__

    def __neg__(self) -> "ExactSeries":
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "ExactSeries":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "ExactSeries":
        return self._lift(other) - self

    def scale(self, c: Number) -> "ExactSeries":
        c = Fraction(c)
        return self._like({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> "ExactSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        trunc = self._common_trunc(other)
        if not self.terms or not other.terms:
            return ExactSeries(self.vars, trunc)
        # Group the right factor by its first exponent so the inner loop can stop early.
        right = sorted(other.terms.items())
        out: dict[tuple[int, ...], Fraction] = {}
        t0 = trunc[0]
        for ea, ca in self.terms.items():
            if any(e > t for e, t in zip(ea, trunc)):
                continue
            room0 = t0 - ea[0]
            for eb, cb in right:
                if eb[0] > room0:
                    break
                e = tuple(a + b for a, b in zip(ea, eb))
                ok = True
                for ei, ti in zip(e, trunc):
                    if ei > ti:
                        ok = False
                        break
                if ok:
                    out[e] = out.get(e, 0) + ca * cb
        return ExactSeries(self.vars, trunc, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ExactSeries":
        if n < 0:
            return series_reciprocal(self) ** (-n)
        result = ExactSeries.constant(1, self.vars, self.trunc)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, trunc: Sequence[int]) -> "ExactSeries":
        trunc = tuple(min(a, b) for a, b in zip(self.trunc, trunc))
        return ExactSeries(self.vars, trunc, self.terms)

    def derivative(self, var: str = None) -> "ExactSeries":
        """Formal derivative; the truncation in ``var`` drops by one."""
        i = 0 if var is None else self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        trunc = list(self.trunc)
        trunc[i] = max(trunc[i] - 1, 0)
        return ExactSeries(self.vars, trunc, out)

    def shift(self, var: str, k: int) -> "ExactSeries":
        """Multiply by ``var**k`` (k >= 0)."""
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            f = list(e)
            f[i] += k
            out[tuple(f)] = c
        return self._like(out)

    def subs_value(self, var: str, value: Number) -> "ExactSeries":
        """Evaluate one variable at a rational value, dropping it from the series."""
        i = self.vars.index(var)
        value = Fraction(value)
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            f = e[:i] + e[i + 1 :]
            out[f] = out.get(f, 0) + c * value ** e[i]
        vars = self.vars[:i] + self.vars[i + 1 :]
        trunc = self.trunc[:i] + self.trunc[i + 1 :]
        return ExactSeries(vars, trunc, out)

    def exp(self) -> "ExactSeries":
        """exp of a series with zero constant term."""
        if self.constant_term() != 0:
            raise ValueError("exp needs a zero constant term")
        result = ExactSeries.constant(1, self.vars, self.trunc)
        term = result
        for n in range(1, sum(self.trunc) + 1):
            term = (term * self).scale(Fraction(1, n))
            if term.is_zero():
                break
            result = result + term
        return result

    # serialization ------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "vars": list(self.vars),
            "trunc": list(self.trunc),
            "terms": [[list(e), format_rational(c)] for e, c in sorted(self.terms.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "ExactSeries":
        terms = {}
        for exps, c in obj["terms"]:
            terms[tuple(exps)] = parse_rational(c)
        return cls(obj["vars"], obj["trunc"], terms)

    @classmethod
    def from_json(cls, text: str) -> "ExactSeries":
        return cls.from_json_obj(json.loads(text))


# univariate helpers ------------------------------------------------------


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def catalan_series(order: int, var: str = "z") -> ExactSeries:
    """Sum of Cat(n) z^n for n <= order."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return ExactSeries.univariate([catalan(n) for n in range(order + 1)], var, order)


def series_compose(f: ExactSeries, g: ExactSeries, order: int = None) -> ExactSeries:
    """f(g) for a univariate ``f``; ``g`` may be multivariate.

    ``order`` caps the truncation of a univariate ``g``; for multivariate ``g``
    the truncation of ``g`` is used.
    """
    if len(f.vars) != 1:
        raise ValueError("the outer series must be univariate")
    if g.constant_term() != 0:
        raise ValueError("composition needs an inner series with zero constant term")
    if order is not None:
        if len(g.vars) != 1:
            raise ValueError("order applies only to univariate inner series")
        g = ExactSeries(g.vars, (order,), g.terms)
    coeffs = f.coefficients()
    acc = ExactSeries(g.vars, g.trunc)
    for c in reversed(coeffs):
        acc = acc * g + c
    return acc


def series_reciprocal(f: ExactSeries, order: int = None) -> ExactSeries:
    """1/f for a univariate series with nonzero constant term."""
    if len(f.vars) != 1:
        raise ValueError("series_reciprocal needs a univariate series")
    a = f.coefficients()
    if order is None:
        order = f.trunc[0]
    a = a + [Fraction(0)] * (order + 1 - len(a))
    if a[0] == 0:
        raise ZeroDivisionError("constant term is zero; no reciprocal")
    b = [Fraction(0)] * (order + 1)
    b[0] = 1 / a[0]
    for n in range(1, order + 1):
        s = sum(a[k] * b[n - k] for k in range(1, n + 1))
        b[n] = -s / a[0]
    return ExactSeries.univariate(b, f.vars[0], order)


def poly_to_series(p: Poly, var: str, order: int) -> ExactSeries:
    return ExactSeries.univariate(list(p.coeffs[: order + 1]), var, order)


def binomial_series(alpha: Fraction, scale: Fraction, order: int, var: str = "z") -> ExactSeries:
    """(1 - scale*var)^(-alpha) via generalized binomial coefficients."""
    coeffs = []
    c = Fraction(1)
    for n in range(order + 1):
        coeffs.append(c)
        c = c * (alpha + n) / (n + 1) * scale
    return ExactSeries.univariate(coeffs, var, order)


def ordinary_bell(n: int, k: int, b: Sequence[Number]) -> Fraction:
    """Partial ordinary Bell polynomial B^_{n,k}(b_1, ..., b_{n-k+1}).

    ``b[0]`` holds ``b_1``.  This is the coefficient of t^n in (sum_j b_j t^j)^k.
    """
    if k < 1 or k > n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if len(b) < n - k + 1:
        raise ValueError(f"need at least {n - k + 1} values of b")
    b = [Fraction(x) for x in b]
    return _bell_table(n, b)[k][n]


def _bell_table(n: int, b: list[Fraction]) -> list[list[Fraction]]:
    # table[k][m] = B^_{m,k}; recurrence B^_{m,k} = sum_j b_j B^_{m-j,k-1}
    table = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    table[0][0] = Fraction(1)
    for k in range(1, n + 1):
        for m in range(k, n + 1):
            s = Fraction(0)
            for j in range(1, m - k + 2):
                if j - 1 < len(b) and b[j - 1]:
                    s += b[j - 1] * table[k - 1][m - j]
            table[k][m] = s
    return table


