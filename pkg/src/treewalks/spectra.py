"""Monte-Carlo spectra of G(n, c/n) adjacency matrices.

Edges come from a Philox counter-based stream keyed by the seed: the k-th
uniform (pairs i < j in lexicographic order) decides pair k, so any block of
pairs can be regenerated independently by advancing the counter.
"""

from __future__ import annotations

import builtins
import math
from dataclasses import dataclass, field
from decimal import Decimal, getcontext
from fractions import Fraction
from typing import Sequence, Union

import numpy as np
import scipy.linalg

from .moments import P5

Number = Union[int, Fraction]

MAX_N = 4096
SCALINGS = {
    "classic": (1,),
    "p1": (1, 1),
    "p5": P5,
}


@dataclass(frozen=True, eq=False)
class GraphSample:
    n: int
    c: Fraction
    seed: int
    edges: np.ndarray  # shape (E, 2), i < j

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GraphSample)
            and (self.n, self.c, self.seed) == (other.n, other.c, other.seed)
            and np.array_equal(self.edges, other.edges)
        )

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        if self.edge_count:
            A[self.edges[:, 0], self.edges[:, 1]] = 1.0
            A[self.edges[:, 1], self.edges[:, 0]] = 1.0
        return A

    def triangle_count(self) -> int:
        nbrs = [set() for _ in range(self.n)]
        for i, j in self.edges.tolist():
            nbrs[i].add(j)
            nbrs[j].add(i)
        total = sum(len(nbrs[i] & nbrs[j]) for i, j in self.edges.tolist())
        return total // 3


def _pair_stream(seed: int, count: int) -> np.ndarray:
    return np.random.Generator(np.random.Philox(key=seed & (2**64 - 1))).random(count)


def sample_gnp(n: int, c: Number, seed: int) -> GraphSample:
    """Each of the n(n-1)/2 pairs is an edge independently with probability c/n."""
    c = Fraction(c)
    if n < 1:
        raise ValueError("n must be positive")
    if c < 0 or c > n:
        raise ValueError(f"need 0 <= c <= n, got c={c}, n={n}")
    m = n * (n - 1) // 2
    p = float(c / n)
    u = _pair_stream(seed, m)
    ks = np.nonzero(u < p)[0]
    # invert k -> (i, j) for the row-major upper triangle
    iu, ju = np.triu_indices(n, 1)
    edges = np.stack([iu[ks], ju[ks]], axis=1).astype(np.int64)
    return GraphSample(n, c, int(seed), edges)


def scaling_factor(c: Number, scaling: str = "p5") -> float:
    """1 / sqrt(c p(1/c)), from the exact rational rounded once."""
    if scaling not in SCALINGS:
        raise ValueError(f"unknown scaling {scaling!r}")
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive to scale")
    p = sum((Fraction(a) / c ** k for k, a in enumerate(SCALINGS[scaling])), Fraction(0))
    val = c * p
    getcontext().prec = 40
    return float(1 / (Decimal(val.numerator) / Decimal(val.denominator)).sqrt())


class EigenFailure(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class SpectrumSample:
    eigenvalues: np.ndarray  # raw, sorted ascending
    scaling: float
    seed: int
    n: int
    c: Fraction
    edge_count: int
    triangles: int

    @property
    def scaled(self) -> np.ndarray:
        return self.eigenvalues * self.scaling

    def trace_residuals(self) -> dict:
        lam = self.eigenvalues
        return {
            "sum": float(abs(lam.sum())),
            "sum_sq": float(abs((lam ** 2).sum() - 2 * self.edge_count)),
            "sum_cube": float(abs((lam ** 3).sum() - 6 * self.triangles)),
        }

    def trace_ok(self) -> bool:
        r = self.trace_residuals()
        lmax = float(np.abs(self.eigenvalues).max()) if self.n else 0.0
        n = self.n
        return (
            r["sum"] <= 1e-6 * n
            and r["sum_sq"] <= 1e-6 * n * max(lmax, 1.0)
            and r["sum_cube"] <= 1e-5 * n * max(lmax, 1.0) ** 2
        )


def eigenvalues(g: GraphSample, scaling: Union[str, float, None] = "p5") -> SpectrumSample:
    """Full spectrum via Householder tridiagonalization and implicit QL (LAPACK syev)."""
    if g.n > MAX_N:
        raise ValueError(f"n = {g.n} exceeds the guard {MAX_N}")
    if isinstance(scaling, str):
        factor = scaling_factor(g.c, scaling) if g.c > 0 else 1.0
    else:
        factor = 1.0 if scaling is None else float(scaling)
    try:
        lam = scipy.linalg.eigvalsh(g.adjacency(), driver="ev", check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigensolver did not converge for n={g.n}, seed={g.seed}: {exc}") from exc
    return SpectrumSample(np.sort(lam), factor, g.seed, g.n, g.c, g.edge_count, g.triangle_count())


@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    below: int
    above: int
    total: int

    @property
    def masses(self) -> np.ndarray:
        return self.counts / self.total

    @property
    def densities(self) -> np.ndarray:
        return self.masses / np.diff(self.edges)


@dataclass
class EmpiricalReport:
    n: int
    c: Fraction
    scaling: float
    num_samples: int
    moments: list  # m_0, m_2, ... (even orders)
    std_errors: list
    histogram: Histogram
    tail_mass: float  # fraction with |lambda| >= 2

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "c": f"{self.c.numerator}/{self.c.denominator}",
            "scaling": self.scaling,
            "num_samples": self.num_samples,
            "moments": {str(2 * l): m for l, m in enumerate(self.moments)},
            "std_errors": {str(2 * l): s for l, s in enumerate(self.std_errors)},
            "tail_mass": self.tail_mass,
        }


def empirical_report(
    samples: Sequence[SpectrumSample],
    l_max: int = 3,
    bins: int = 200,
    range: tuple = (-2.5, 2.5),
) -> EmpiricalReport:
    if not samples:
        raise ValueError("no samples")
    first = samples[0]
    for s in samples[1:]:
        if (s.n, s.c, s.scaling) != (first.n, first.c, first.scaling):
            raise ValueError("samples must share n, c and scaling")
    per = np.array([[np.mean(s.scaled ** (2 * l)) for l in builtins.range(l_max + 1)] for s in samples])
    moments = per.mean(axis=0).tolist()
    if len(samples) > 1:
        se = (per.std(axis=0, ddof=1) / math.sqrt(len(samples))).tolist()
    else:
        se = [float("nan")] * (l_max + 1)
    allv = np.concatenate([s.scaled for s in samples])
    edges = np.linspace(range[0], range[1], bins + 1)
    counts, _ = np.histogram(allv, bins=edges)
    below = int((allv < range[0]).sum())
    above = int((allv > range[1]).sum())
    hist = Histogram(edges, counts, below, above, int(allv.size))
    tail = float((np.abs(allv) >= 2).mean())
    return EmpiricalReport(first.n, first.c, first.scaling, len(samples), moments, se, hist, tail)



@dataclass
class Comparison:
    l1: float
    max_bin_deviation: float
    tail_mass: float
    rows: list = field(default_factory=list)  # (lo, hi, hist_mass, density_mass)

    def to_json_obj(self) -> dict:
        return {"l1": self.l1, "max_bin_deviation": self.max_bin_deviation, "tail_mass": self.tail_mass}


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def density_bin_masses(poly_coeffs: Sequence[float], edges: np.ndarray) -> np.ndarray:
    """Integrals of P(z) sqrt(4 - z^2) / (2 pi) over each bin (64-point Gauss-Legendre)."""
    coeffs = np.array([float(c) for c in poly_coeffs])
    out = np.zeros(len(edges) - 1)
    for k in builtins.range(len(edges) - 1):
        lo, hi = max(edges[k], -2.0), min(edges[k + 1], 2.0)
        if hi <= lo:
            continue
        z = 0.5 * (hi - lo) * _GL_NODES + 0.5 * (hi + lo)
        f = np.polynomial.polynomial.polyval(z, coeffs) * np.sqrt(np.maximum(4 - z * z, 0)) / (2 * math.pi)
        out[k] = 0.5 * (hi - lo) * np.dot(_GL_WEIGHTS, f)
    return out


def compare(report: EmpiricalReport, density) -> Comparison:
    """L1 distance on (-2, 2) between histogram bin masses and density bin masses.

    ``density`` is a SemicircleDensityPoly (or anything with ``.P.to_poly()``).
    """
    h = report.histogram
    coeffs = density.P.to_poly().coeffs
    dm = density_bin_masses(coeffs, h.edges)
    hm = h.masses
    inside = (h.edges[:-1] >= -2.0 - 1e-12) & (h.edges[1:] <= 2.0 + 1e-12)
    diff = np.abs(hm - dm)
    rows = [(float(h.edges[k]), float(h.edges[k + 1]), float(hm[k]), float(dm[k])) for k in builtins.range(len(hm))]
    return Comparison(float(diff[inside].sum()), float(diff[inside].max()), report.tail_mass, rows)


def sample_spectra(
    n: int, c: Number, seeds: Sequence[int], scaling: str = "p5", threads: int = 1
) -> list[SpectrumSample]:
    """One spectrum per seed; with threads > 1 seeds run in a pool (LAPACK drops the GIL).

    Output order follows ``seeds`` regardless of scheduling.
    """
    def one(s):
        return eigenvalues(sample_gnp(n, c, s), scaling)

    if threads <= 1 or len(seeds) < 2:
        return [one(s) for s in seeds]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, seeds))


def expected_moment_finite_n(two_l: int, n: int, c: Number, scaling: str = "p5") -> Fraction:
    """E[tr A^(2l)] / n for G(n, c/n), times the exact squared scaling^l.

    Sums over all closed walks (not only tree walks): a walk with m vertices
    and e distinct edges contributes (n)_m (c/n)^e / n.
    """
    from .walks import closed_walk_shapes

    c = Fraction(c)
    p = c / n
    total = Fraction(0)
    for (m, e), count in closed_walk_shapes(two_l).items():
        falling = Fraction(1)
        for k in builtins.range(m):
            falling *= n - k
        total += count * falling * p ** e / n
    poly = sum((Fraction(a) / c ** k for k, a in enumerate(SCALINGS[scaling])), Fraction(0))
    return total / (c * poly) ** (two_l // 2)
