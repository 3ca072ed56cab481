"""Acceptance checks shared by the ``verify`` command and the test suite.

Each check returns a CheckResult; nothing here raises on a failed check.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

from .exactalg import EvenPoly, Poly, catalan
from .exactalg.poly import format_poly

F = Fraction


@dataclass
class CheckResult:
    number: str
    title: str
    passed: bool
    details: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:>3}  {self.title}  ({self.seconds:.1f}s)"


# reference values -------------------------------------------------------------

# S_xi(z) as {l: coeff}
TABLE_S = {
    0: {0: 1},
    1: {2: 1},
    2: {4: 6, 3: 1},
    3: {6: 57, 5: 20, 4: 1},
    4: {8: 678, 7: 378, 6: 50, 5: 1},
    5: {10: 9270, 9: 7272, 8: 1684, 7: 112, 6: 1},
}

# K_xi(u, 1, z) as {(s, l): coeff}
TABLE_K = {
    0: {(0, 0): 1},
    1: {(0, 2): 1},
    2: {(2, 6): 1, (1, 5): 5, (0, 4): 6, (0, 3): 1},
    3: {
        (4, 10): 2, (3, 9): 16, (2, 8): 52, (2, 7): 2,
        (1, 7): 84, (1, 6): 12, (0, 6): 57, (0, 5): 20, (0, 4): 1,
    },
    4: {
        (6, 14): 5, (5, 13): 55, (4, 12): 267, (4, 11): 6, (3, 11): 745,
        (3, 10): 54, (2, 10): 1290, (2, 9): 205, (2, 8): 3, (1, 9): 1350,
        (1, 8): 416, (1, 7): 21, (0, 8): 678, (0, 7): 378, (0, 6): 50, (0, 5): 1,
    },
    5: {
        (8, 18): 14, (7, 17): 196, (6, 16): 1254, (6, 15): 20,
        (5, 15): 4836, (5, 14): 240, (4, 14): 12453, (4, 13): 1296,
        (4, 12): 12, (3, 13): 8 * 2787, (3, 12): 8 * 517, (3, 11): 8 * 15,
        (2, 12): 2 * 13854, (2, 11): 2 * 4251, (2, 10): 2 * 266, (2, 9): 2 * 2,
        (1, 11): 4 * 5610, (1, 10): 4 * 2775, (1, 9): 4 * 342, (1, 8): 4 * 8,
        (0, 10): 9270, (0, 9): 7272, (0, 8): 1684, (0, 7): 112, (0, 6): 1,
    },
}

P5_EXPECTED = [1, 1, 1, 4, 33, 386]
Q_EXPECTED = {
    0: [1],
    1: [0, -1],
    2: [0, 0, 0, -2],
    3: [0, -3, -2, 2, -1, -11],
    4: [0, -26, -20, -23, -17, 19, -27, -90],
    5: [0, -324, -266, -249, -239, -301, -166, 163, -529, -931],
}

# polynomial factors P_i of f_i = P_i(z) sqrt(4 - z^2) / (2 pi), coefficients of z^(2j)
DENSITY_REFERENCE = {
    0: [1],
    1: [1, -1],
    2: [1, -6, 5, -1],
    3: [9, -140, 358, -299, 98, -11],
    4: [56, 1602, -8625, 16004, -13447, 5624, -1143, 90],
    5: [442, -17946, 171911, -574676, 904447, -768354, 373181, -103622, 15298, -931],
}

# reference second-order density of the earlier expansion: -(1/pi) T(z) / sqrt(4 - z^2)
EM_SECOND_T = [F(-21, 4), F(325, 8), -46, 17, -2]


def _timed(number: str, title: str, fn: Callable[[], tuple]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        passed, details = fn()
    except Exception as exc:  # report, never raise
        passed, details = False, [f"error: {type(exc).__name__}: {exc}"]
    return CheckResult(number, title, passed, details, time.perf_counter() - t0)


# 1 ----------------------------------------------------------------------------


def _check_oracle_pipeline():
    from .gf import treewalk_gf
    from .walks import enumerate_census

    census = enumerate_census(6)
    bad = []
    checked = 0
    for l in range(7):
        for m in range(1, l + 2):
            xi = l - m + 1
            pipeline = treewalk_gf(xi, l).coeff(l) * factorial(m)
            oracle = census.w_count(m, 2 * l)
            checked += 1
            if pipeline != oracle:
                bad.append(f"m={m}, 2l={2 * l}: pipeline {pipeline}, oracle {oracle}")
    return not bad, [f"{checked} (m, 2l) cells compared"] + bad


def check_1() -> CheckResult:
    return _timed("1", "oracle-pipeline equality for 2l <= 12", _check_oracle_pipeline)


# 2 ----------------------------------------------------------------------------


def _check_table():
    from .gf import extract_S_xi, kernel_gf, superreduced_gf

    S = superreduced_gf(5)
    bad = []
    for xi in range(6):
        sp = extract_S_xi(S, xi)
        want = Poly([TABLE_S[xi].get(l, 0) for l in range(max(TABLE_S[xi]) + 1)])
        if sp != want:
            bad.append(f"S_{xi} = {sp}, expected {want}")
        got = {k: v for k, v in kernel_gf(xi).at_v1().items()}
        want_k = {k: F(v) for k, v in TABLE_K[xi].items()}
        if got != want_k:
            bad.append(f"K_{xi} differs: {sorted(set(got.items()) ^ set(want_k.items()))}")
    return not bad, bad or ["S_0..S_5 and K_0..K_5 match"]


def check_2() -> CheckResult:
    return _timed("2", "superreduced and kernel table for xi = 0..5", _check_table)


# 3 ----------------------------------------------------------------------------


def _check_normal_form():
    from .gf import to_catalan_form

    bad = []
    for xi in range(1, 6):
        bad += to_catalan_form(xi).check_structure()
    return not bad, bad or ["all K_xi,s nonnegative, degree bounds and top forms hold for xi <= 5"]


def check_3() -> CheckResult:
    return _timed("3", "Catalan normal form structure for xi <= 5", _check_normal_form)


# 4 ----------------------------------------------------------------------------


def _check_kernels():
    from .gf import kernel_gf
    from .walks import (
        TreeWalk,
        classify,
        contour_kernel,
        excess,
        induced_tree,
        iter_canonical_walks,
        iter_plane_shapes,
        kernel_conditions,
        optimal_kernel_witness,
        reduce_to_kernel,
    )

    bad = []
    kernel_shapes = set()
    max_vertices: dict = {}
    max_simple: dict = {}
    n_walks = 0
    for two_l in range(0, 13, 2):
        for vs in iter_canonical_walks(two_l):
            n_walks += 1
            w = TreeWalk(vs)
            k = reduce_to_kernel(w)
            if reduce_to_kernel(k) != k:
                bad.append(f"not idempotent on {vs}")
            if excess(k) != excess(w):
                bad.append(f"excess changed on {vs}")
            kt = induced_tree(k)
            if not all(kernel_conditions(kt)):
                bad.append(f"kernel {k.vertices} violates the leaf/inner conditions")
            if k == w:
                xi = excess(w)
                m = len(kt.vertices())
                s = kt.simple_edge_count()
                kernel_shapes.add(kt.shape())
                max_vertices[xi] = max(max_vertices.get(xi, 0), m)
                max_simple[xi] = max(max_simple.get(xi, 0), s)
                if xi >= 1 and (m > 3 * xi - 1 or s > 2 * xi - 2 or w.half_length > 4 * xi - 2):
                    bad.append(f"kernel {vs} breaks the size bounds")
                if s == 0 and xi >= 1 and (w.length > 4 * xi or m > xi + 1):
                    bad.append(f"superreduced {vs} breaks its bounds")
    # converse: coloured plane trees with the two conditions and walk length <= 12
    realised = set()
    for edges in range(0, 7):
        for shape in iter_plane_shapes(edges):
            w = contour_kernel(shape)
            if w.length > 12:
                continue
            if all(kernel_conditions(induced_tree(w))):
                if not classify(w).is_kernel:
                    bad.append(f"shape {shape} satisfies the conditions but its walk is no kernel")
                realised.add(induced_tree(w).shape())
    if realised != kernel_shapes:
        bad.append(f"{len(realised ^ kernel_shapes)} coloured trees differ between census and characterisation")
    # tightness: census for xi = 1, 2; xi = 3 via a witness and the generating function
    for xi in (1, 2):
        if max_vertices.get(xi) != 3 * xi - 1 or max_simple.get(xi) != 2 * xi - 2:
            bad.append(f"bounds not attained in the census for xi={xi}")
    wit = optimal_kernel_witness(3)
    info = classify(wit)
    if not (info.is_kernel and info.excess == 3 and info.simple_edge_count == 4 and max(wit.vertices) == 8):
        bad.append(f"xi=3 witness {wit.vertices} is not an optimal kernel")
    K3 = kernel_gf(3)
    if K3.count(4, 20) != factorial(8) * catalan(2) or K3.count(3, 18) != factorial(8) * catalan(2):
        bad.append("xi=3 optimal / near-optimal kernel counts are wrong")
    from .walks import enumerate_census

    census = enumerate_census(6)
    if census.k_count(2, 2, 12) != 120 or census.k_count(2, 1, 10) != 120 or census.k_count(1, 0, 4) != 2:
        bad.append("optimal / near-optimal census counts for xi <= 2 are wrong")
    return not bad, [f"{n_walks} canonical walks, {len(kernel_shapes)} kernel trees"] + bad[:20]


def check_4() -> CheckResult:
    return _timed("4", "kernel reduction properties on all walks with 2l <= 12", _check_kernels)


# 5, 6, 7 -----------------------------------------------------------------------


def _check_scaling():
    from .moments import scaling_search

    res = scaling_search(5)
    bad = []
    if not res.success:
        bad.append(f"status {res.status}")
    if res.a != [F(v) for v in P5_EXPECTED]:
        bad.append(f"a = {res.a}")
    for i, q in enumerate(res.Q):
        if q != Poly(Q_EXPECTED[i]):
            bad.append(f"Q_{i} = {q}")
    return not bad, bad or ["p5 and Q_0..Q_5 reproduced; every order fully cancelled and re-expanded"]


def check_5() -> CheckResult:
    return _timed("5", "scaling search reproduces p5 and Q_0..Q_5", _check_scaling)


def _check_negative():
    from .moments import perturbed_w2, scaling_search

    res = scaling_search(2, w_override={2: perturbed_w2()})
    ok = res.status == ["ok", "ok", "failed"]
    return ok, [f"status {res.status}", f"residual {res.residual}"]


def check_6() -> CheckResult:
    return _timed("6", "negative control fails at order 2", _check_negative)


def _check_geometric():
    from .moments import geometric_scaling_check

    got = [geometric_scaling_check(i) for i in range(6)]
    want = [0, 0, 0, 3, 5, 7]
    details = [f"minimal denominator orders {got}, expected {want}"]
    bounded = all(g <= max(2 * i - 3, 0) for i, g in enumerate(got))
    details.append(f"denominator order <= 2i - 3 for i >= 3: {bounded}")
    return got == want, details


def check_7() -> CheckResult:
    return _timed("7", "geometric scaling denominator orders", _check_geometric)


# 8 ------------------------------------------------------------------------------


def _check_densities():
    from .density import density_moment, standard_densities
    from .moments import compute_Vi

    ds = standard_densities()
    bad, notes = [], []
    for i, d in enumerate(ds):
        if list(d.P.coeffs) != [F(c) for c in DENSITY_REFERENCE[i]]:
            ref = EvenPoly(DENSITY_REFERENCE[i]).to_poly()
            bad.append(f"f_{i}: computed {format_poly(d.P.to_poly().coeffs, 'z')}, reference {format_poly(ref.coeffs, 'z')}")
        if i >= 1 and density_moment(d, 0) != 0:
            bad.append(f"f_{i} has nonzero mass")
        V = compute_Vi(i)
        series = (V.rest * Poly([1, 1])).to_series(10)
        for l in range(11):
            if density_moment(d, 2 * l) != series.coeff(l):
                bad.append(f"duality fails for i={i}, l={l}")
    notes.append("masses of f_1..f_5 are zero and moment duality holds for l <= 10" if not any(
        "mass" in b or "duality" in b for b in bad) else "mass/duality problems")
    return not bad, notes + bad


def check_8() -> CheckResult:
    return _timed("8", "densities f_0..f_5 against reference values", _check_densities)


# 9, 10 ---------------------------------------------------------------------------


def _check_thm2():
    from .moments import f_squared_matches_p5, thm2_residual

    res = thm2_residual(10)
    bad = [f"l={l}: residual {p}" for l, p in enumerate(res) if any(p[k] for k in range(6))]
    if not f_squared_matches_p5():
        bad.append("f^2 != p5 mod x^6")
    first = next((p for p in res if not p.is_zero()), None)
    detail = f"first nonzero residual starts at (1/c)^{first.valuation()}" if first is not None else "all zero"
    return not bad, [detail] + bad


def check_9() -> CheckResult:
    return _timed("9", "moment residual vanishes through c^-5 for l <= 10", _check_thm2)


def _check_t10():
    from .density import truncation_order_t

    t = truncation_order_t(10)
    t_prefix = truncation_order_t(10, all_prefixes=True)
    return t == 3, [f"t(10) = {t} (all-prefix reading: {t_prefix}); expected 3"]


def check_10() -> CheckResult:
    return _timed("10", "t(10) via Sturm certification", _check_t10)


# 11 -------------------------------------------------------------------------------


@dataclass
class SpectralRun:
    trace_ok: bool
    moments: list
    std_errors: list
    exact_limit: list
    exact_finite_n: list
    l1: list  # per seed set: (L1 order 1, L1 order 3)
    seconds: float = 0.0


def spectral_run(n: int = 2000, c: int = 10, num_samples: int = 50, seed_sets=(0, 1, 2), threads: int = 1) -> SpectralRun:
    from .density import density_sum
    from .moments import P5, moment_exact
    from .spectra import compare, empirical_report, expected_moment_finite_n, sample_spectra

    t0 = time.perf_counter()
    p = sum((F(a) / F(c) ** k for k, a in enumerate(P5)), F(0))
    limit = [float(moment_exact(l, c) / p ** l) for l in range(4)]
    finite = [float(expected_moment_finite_n(2 * l, n, c)) for l in range(4)]
    d1, d3 = density_sum(c, 1), density_sum(c, 3)
    trace_ok = True
    l1 = []
    first = None
    for k in seed_sets:
        seeds = [1_000_003 * (k + 1) + i for i in range(num_samples)]
        samples = sample_spectra(n, c, seeds, "p5", threads=threads)
        trace_ok &= all(s.trace_ok() for s in samples)
        rep = empirical_report(samples, 3)
        if first is None:
            first = rep
        l1.append((compare(rep, d1).l1, compare(rep, d3).l1))
    return SpectralRun(trace_ok, first.moments, first.std_errors, limit, finite, l1, time.perf_counter() - t0)


def _check_spectra(run: SpectralRun = None):
    run = run or spectral_run()
    details = [f"trace identities on every sample: {run.trace_ok}"]
    limit_ok = finite_ok = True
    for l in (1, 2, 3):
        zl = (run.moments[l] - run.exact_limit[l]) / run.std_errors[l]
        zf = (run.moments[l] - run.exact_finite_n[l]) / run.std_errors[l]
        limit_ok &= abs(zl) <= 5
        finite_ok &= abs(zf) <= 5
        details.append(
            f"m_{2 * l}: empirical {run.moments[l]:.5f} +- {run.std_errors[l]:.5f}, "
            f"limit {run.exact_limit[l]:.5f} ({zl:+.1f} se), finite-n {run.exact_finite_n[l]:.5f} ({zf:+.1f} se)"
        )
    l1_ok = all(b <= a for a, b in run.l1)
    details.append("L1 (order 1, order 3) per seed set: " + ", ".join(f"({a:.4f}, {b:.4f})" for a, b in run.l1))
    details.append(f"moments within 5 se of the limit: {limit_ok}; of the finite-n expectation: {finite_ok}")
    return run.trace_ok and limit_ok and l1_ok, details


def check_11(run: SpectralRun = None) -> CheckResult:
    """With ``run`` given its sampling time is added to the check's own."""
    r = _timed("11", "spectral statistics at c = 10, n = 2000, N = 50", lambda: _check_spectra(run))
    if run is not None:
        r.seconds += run.seconds
    return r


ALL_CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10, check_11]


def run_all(skip_spectra: bool = False, threads: int = 1) -> list[CheckResult]:
    out = []
    for fn in ALL_CHECKS:
        if fn is check_11:
            if skip_spectra:
                continue
            out.append(check_11(spectral_run(threads=threads)))
        else:
            out.append(fn())
    return out
