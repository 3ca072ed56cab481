import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treewalks.exactalg import (
    AlgElem,
    EvenPoly,
    ExactSeries,
    Poly,
    catalan_series,
    format_rational,
    ordinary_bell,
    parse_rational,
    series_compose,
    series_reciprocal,
    sturm_sign_constant,
)

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def series2(draw, trunc=(3, 3)):
    terms = {}
    for i in range(trunc[0] + 1):
        for j in range(trunc[1] + 1):
            if draw(st.booleans()):
                terms[(i, j)] = draw(small_q)
    return ExactSeries(("z", "v"), trunc, terms)


@st.composite
def unit_series(draw, order=6):
    coeffs = [draw(small_q.filter(lambda q: q != 0))] + [draw(small_q) for _ in range(order)]
    return ExactSeries.univariate(coeffs, "z", order)


@given(series2(), series2(), series2())
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a
    assert (a - a).is_zero()


@given(series2(trunc=(5, 5)), series2(trunc=(5, 5)))
def test_truncation_commutes_with_product(a, b):
    small = (2, 3)
    assert (a * b).truncate(small) == a.truncate(small) * b.truncate(small)


@pytest.mark.parametrize("order", [0, 1, 5, 12])
def test_catalan_fixpoint(order):
    C = catalan_series(order)
    z = ExactSeries.variable("z", ("z",), (order,))
    assert C == 1 + z * C * C
    assert z * C * C == C - 1


def test_catalan_examples():
    assert catalan_series(0).coefficients() == [1]
    assert catalan_series(4).coefficients() == [1, 1, 2, 5, 14]
    assert catalan_series(7).coeff(7) == 429


@given(unit_series())
def test_reciprocal_involution(f):
    assert series_reciprocal(series_reciprocal(f)) == f
    assert (f * series_reciprocal(f)).coefficients() == [1] + [0] * 6


def test_reciprocal_examples():
    p5 = ExactSeries.univariate([1, 1, 1, 4, 33, 386], "z", 5)
    assert series_reciprocal(p5).coefficients() == [1, -1, 0, -3, -26, -324]
    geo = ExactSeries.univariate([1] * 8, "z", 7)
    assert series_reciprocal(geo).coefficients() == [1, -1] + [0] * 6
    one = ExactSeries.constant(1, ("z",), (5,))
    assert series_reciprocal(one) == one


def test_compose_examples():
    order = 4
    f = ExactSeries.univariate([1] * 5, "z", order)
    g = catalan_series(order) - 1  # z C^2
    assert series_compose(f, g).coefficients() == [1, 1, 3, 10, 35]
    zero = ExactSeries(("z",), (order,))
    assert series_compose(f, zero).coefficients() == [1, 0, 0, 0, 0]
    ident = ExactSeries.variable("z", ("z",), (order,))
    assert series_compose(ident, g) == g


def test_ordinary_bell_examples():
    b = [F(2), F(3), F(5)]
    assert ordinary_bell(3, 1, b) == 5
    assert ordinary_bell(2, 2, b) == 4
    assert ordinary_bell(3, 2, b) == 2 * 2 * 3


@given(st.lists(small_q, min_size=4, max_size=4), st.integers(1, 4))
def test_ordinary_bell_matches_power(b, k):
    # B^_{n,k}(b) = [x^n] (b1 x + b2 x^2 + ...)^k
    g = Poly([0] + b)
    pk = g ** k
    for n in range(k, 5):
        assert ordinary_bell(n, k, b) == pk[n]


def test_alg_y_squared():
    y = AlgElem.y()
    assert y * y == AlgElem(Poly([4, 0, -1]))


@st.composite
def alg(draw):
    a = Poly([draw(small_q) for _ in range(3)])
    b = Poly([draw(small_q) for _ in range(3)])
    return AlgElem(a, b)


@settings(max_examples=50)
@given(alg(), alg())
def test_alg_commutative_and_float(p, q):
    assert p * q == q * p
    rng = random.Random(0)
    for _ in range(20):
        z = rng.uniform(-1.99, 1.99)
        want = p.evaluate(z) * q.evaluate(z)
        got = (p * q).evaluate(z)
        assert got == pytest.approx(want, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize(
    "coeffs, expected",
    [([1], True), ([1, -1], False), ([4, -1], True), ([0, 0, 1], True), ([1, -2, 1], True)],
)
def test_sturm_examples(coeffs, expected):
    # coefficients of z^(2j); (1 - z^2)^2 touches zero without changing sign
    assert sturm_sign_constant(EvenPoly(coeffs)) is expected


roots_in = st.fractions(min_value=F(1, 50), max_value=F(199, 50), max_denominator=50)
roots_any = st.fractions(min_value=-6, max_value=10, max_denominator=50)


@settings(max_examples=60)
@given(st.lists(roots_any, max_size=3), st.lists(roots_in, max_size=2), roots_in)
def test_sturm_known_sign(square_roots, double_roots, crossing):
    """Squares keep the sign; one simple root w0 in (0, 4) flips it at z = sqrt(w0)."""
    base = Poly([1])
    for r in square_roots:
        base = base * Poly([-r, 1]) ** 2
    for r in double_roots:
        base = base * Poly([-r, 1]) ** 2
    as_z = lambda q: EvenPoly.from_poly(q.compose(Poly([0, 0, 1])))
    assert sturm_sign_constant(as_z(base)) is True
    assert sturm_sign_constant(as_z(base * Poly([-crossing, 1]))) is False
    # a root outside (0, 4) in w does not matter
    assert sturm_sign_constant(as_z(base * Poly([5, 1]))) is True


def test_rational_format_round_trip():
    for q in [F(0), F(-3, 7), F(386), F(1987, 128)]:
        assert parse_rational(format_rational(q)) == q
    assert format_rational(F(4)) == "4/1"


@given(series2())
def test_series_json_round_trip(s):
    assert ExactSeries.from_json(s.to_json()) == s


def test_series_rejects_bad_vars():
    with pytest.raises(ValueError):
        ExactSeries(("q",), (3,))
    with pytest.raises(ValueError):
        ExactSeries(("z",), (-1,))
