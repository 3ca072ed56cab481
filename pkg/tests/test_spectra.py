from fractions import Fraction as F
import math

import numpy as np
import pytest

from treewalks.density import density_sum
from treewalks.moments import moment_exact
from treewalks.spectra import (
    MAX_N,
    GraphSample,
    compare,
    density_bin_masses,
    eigenvalues,
    empirical_report,
    expected_moment_finite_n,
    sample_gnp,
    sample_spectra,
    scaling_factor,
)


def graph(n, edges):
    return GraphSample(n, F(1), 0, np.array(edges, dtype=np.int64).reshape(-1, 2))


@pytest.mark.parametrize(
    "n, edges, spectrum",
    [
        (3, [(0, 1), (0, 2), (1, 2)], [-1, -1, 2]),
        (2, [(0, 1)], [-1, 1]),
        (5, [(0, 1), (0, 2), (0, 3), (0, 4)], [-2, 0, 0, 0, 2]),
    ],
)
def test_known_spectra(n, edges, spectrum):
    s = eigenvalues(graph(n, edges), scaling=None)
    assert np.allclose(s.eigenvalues, spectrum, atol=1e-12)
    assert s.trace_ok()


def test_sampler_edge_cases():
    assert sample_gnp(2, 2, 5).edge_count == 1
    assert sample_gnp(10, 0, 5).edge_count == 0
    with pytest.raises(ValueError):
        sample_gnp(10, 11, 0)
    with pytest.raises(ValueError):
        sample_gnp(10, -1, 0)


def test_edge_count_mean():
    n, c = 1000, 10
    counts = [sample_gnp(n, c, s).edge_count for s in range(5)]
    mean = n * (n - 1) / 2 * c / n
    sd = math.sqrt(mean)
    assert all(abs(k - mean) <= 5 * sd for k in counts)


def test_determinism():
    a, b = sample_gnp(300, 4, 42), sample_gnp(300, 4, 42)
    assert a == b
    assert a != sample_gnp(300, 4, 43)
    la, lb = eigenvalues(a).eigenvalues, eigenvalues(b).eigenvalues
    assert np.max(np.abs(la - lb)) <= 1e-12


def test_threads_preserve_order():
    seeds = [3, 1, 2]
    one = sample_spectra(120, 5, seeds, threads=1)
    many = sample_spectra(120, 5, seeds, threads=3)
    assert [s.seed for s in many] == seeds
    for a, b in zip(one, many):
        assert np.array_equal(a.eigenvalues, b.eigenvalues)


def test_guard():
    with pytest.raises(ValueError):
        eigenvalues(GraphSample(MAX_N + 1, F(1), 0, np.zeros((0, 2), dtype=np.int64)))


def test_scaling_factor():
    assert scaling_factor(4, "classic") == pytest.approx(0.5)
    # c p(1/c) with p = 1 + x at c = 3 is 4
    assert scaling_factor(3, "p1") == pytest.approx(0.5)
    with pytest.raises(ValueError):
        scaling_factor(3, "nope")


def test_report_single_triangle():
    s = eigenvalues(graph(3, [(0, 1), (0, 2), (1, 2)]), scaling=1.0)
    rep = empirical_report([s], 1)
    assert rep.moments[1] == pytest.approx(2.0)
    with pytest.raises(ValueError):
        empirical_report([])


def test_l1_zero_on_exact_masses():
    d = density_sum(10, 2)
    edges = np.linspace(-2.5, 2.5, 201)
    masses = density_bin_masses(d.P.to_poly().coeffs, edges)
    # fake report whose histogram carries the density's own bin masses
    from treewalks.spectra import EmpiricalReport, Histogram

    total = 10 ** 12
    hist = Histogram(edges, masses * total, 0, 0, total)
    rep = EmpiricalReport(1, F(10), 1.0, 1, [1.0], [0.0], hist, 0.0)
    assert compare(rep, d).l1 == pytest.approx(0.0, abs=1e-9)
    # the square-root edge at +-2 limits Gauss-Legendre to about 1e-9
    assert masses.sum() == pytest.approx(1.0, abs=1e-8)


def test_finite_n_expectation_limit():
    for l in range(4):
        exact = expected_moment_finite_n(2 * l, 10 ** 9, 10, "classic")
        assert float(exact) == pytest.approx(float(moment_exact(l, 10)), rel=1e-6)


def test_small_graph_moments_match_exact_expectation():
    # Monte-Carlo on n = 200: the mean of tr A^4 / n is E exactly up to noise
    n, c = 200, 3
    samples = sample_spectra(n, c, range(200), "classic")
    rep = empirical_report(samples, 2)
    for l in (1, 2):
        want = float(expected_moment_finite_n(2 * l, n, c, "classic"))
        assert abs(rep.moments[l] - want) <= 5 * rep.std_errors[l]
