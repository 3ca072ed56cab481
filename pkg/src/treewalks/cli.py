"""treewalks command line.

Every subcommand writes its artifacts under --out (default $TREEWALKS_OUT or
the working directory), echoes the run configuration into each file header and
records the files in manifest.json.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .exactalg import ExactSeries, format_rational, parse_rational

OUT_ENV = "TREEWALKS_OUT"


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)
    out: str = "."
    format: str = "json"
    seed: Optional[int] = None

    def header(self) -> dict:
        return asdict(self)


class UsageError(ValueError):
    pass


# output helpers -----------------------------------------------------------------


class Writer:
    def __init__(self, cfg: RunConfig, quiet: bool = False):
        self.cfg = cfg
        self.dir = Path(cfg.out)
        self.files: list[str] = []
        self.quiet = quiet

    def json(self, name: str, payload: dict) -> Path:
        obj = {"config": self.cfg.header(), **payload}
        path = self.dir / name
        self.dir.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(obj, indent=2) + "\n")
        self.files.append(name)
        if not self.quiet:
            print(json.dumps(payload, indent=2))
        return path

    def csv(self, name: str, columns: list[str], rows) -> Path:
        path = self.dir / name
        self.dir.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            fh.write("# config: " + json.dumps(self.cfg.header()) + "\n")
            w = csv.writer(fh)
            w.writerow(columns)
            w.writerows(rows)
        self.files.append(name)
        return path

    def manifest(self) -> None:
        if not self.files:
            return
        path = self.dir / "manifest.json"
        old = json.loads(path.read_text()) if path.exists() else {"artifacts": []}
        entries = [e for e in old.get("artifacts", []) if e["file"] not in self.files]
        for f in self.files:
            entries.append({"file": f, "subcommand": self.cfg.subcommand, "config": self.cfg.header()})
        path.write_text(json.dumps({"artifacts": entries}, indent=2) + "\n")


def read_csv(path: str) -> tuple[dict, list[dict]]:
    """Inverse of Writer.csv: (config header, rows as dicts)."""
    text = Path(path).read_text()
    config = {}
    lines = text.splitlines()
    if lines and lines[0].startswith("# config: "):
        config = json.loads(lines[0][len("# config: "):])
        lines = lines[1:]
    return config, list(csv.DictReader(io.StringIO("\n".join(lines))))


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _poly_json(p) -> list[str]:
    return [format_rational(c) for c in p.coeffs]


# subcommands ---------------------------------------------------------------------


def cmd_census(args, w: Writer) -> int:
    from .walks import census_rows, enumerate_census

    census = enumerate_census(args.lmax)
    w.csv("census_w.csv", ["m", "two_l", "count"], census_rows(census.w))
    w.csv("census_k.csv", ["xi", "s", "two_l", "count"], census_rows(census.k))
    w.csv("census_sr.csv", ["m", "two_l", "count"], census_rows(census.sr))
    w.json(
        "census.json",
        {
            "w": [list(r) for r in census_rows(census.w)],
            "k": [list(r) for r in census_rows(census.k)],
            "sr": [list(r) for r in census_rows(census.sr)],
        },
    )
    return 0


def cmd_kernel_reduce(args, w: Writer) -> int:
    import random

    from .walks import NotATreeWalk, TreeWalk, classify, reduce_to_kernel

    try:
        vs = tuple(int(t) for t in args.walk.replace(",", " ").split())
        walk = TreeWalk(vs)
    except (ValueError, NotATreeWalk) as exc:
        raise UsageError(f"bad walk: {exc}") from exc
    rng = random.Random(args.seed) if args.seed is not None else None
    k = reduce_to_kernel(walk, rng)
    info = classify(k)
    w.json(
        "kernel.json",
        {
            "walk": list(walk.vertices),
            "kernel": list(k.vertices),
            "excess": info.excess,
            "simple_edges": info.simple_edge_count,
            "superreduced": info.is_superreduced,
        },
    )
    return 0


def cmd_gf(args, w: Writer) -> int:
    from .gf import extract_S_xi, kernel_gf, superreduced_gf, to_catalan_form, treewalk_gf

    xi = args.xi
    if args.form == "series":
        s = treewalk_gf(xi, args.order)
        payload = {"xi": xi, "form": "series", "series": s.to_json_obj(), "text": str(s)}
    elif args.form == "catalan":
        payload = {"xi": xi, **to_catalan_form(xi).to_json_obj()}
    elif args.form == "kernel":
        K = kernel_gf(xi)
        payload = {"xi": xi, "form": "kernel", "series": K.series.to_json_obj(), "text": K.to_text()}
    else:
        S = superreduced_gf(max(xi, 1))
        p = extract_S_xi(S, xi)
        payload = {"xi": xi, "form": "superreduced", "poly": _poly_json(p), "text": str(p)}
    w.json(f"gf_{args.form}_xi{xi}.json", payload)
    return 0


def cmd_moments(args, w: Writer) -> int:
    from .moments import moment_exact, moment_poly

    rows = []
    for l in range(args.lmax + 1):
        m = moment_exact(l, args.c)
        rows.append((2 * l, format_rational(m), float(m)))
    w.csv("moments.csv", ["order", "exact", "float"], rows)
    w.json(
        "moments.json",
        {
            "c": format_rational(args.c),
            "moments": {str(r[0]): r[1] for r in rows},
            "polys_in_inverse_c": {str(2 * l): _poly_json(moment_poly(l)) for l in range(args.lmax + 1)},
        },
    )
    return 0


def cmd_scaling(args, w: Writer) -> int:
    from .moments import scaling_search

    res = scaling_search(args.order, verify=not args.no_verify)
    w.json(f"scaling_order{args.order}.json", res.to_json_obj())
    return 0 if res.success else 1


def _curve(w: Writer, d, name: str, points: int) -> None:
    from .density import sample_curve

    grid = [-2 + 4 * k / (points - 1) for k in range(points)]
    w.csv(name, ["z", "density"], [(f"{z:.6f}", f"{v:.10g}") for z, v in sample_curve(d, grid)])


def cmd_density(args, w: Writer) -> int:
    from .density import density_sum, standard_densities, truncation_order_t
    from .exactalg import sturm_sign_constant

    if (args.order is None) == (args.sum_order is None):
        raise UsageError("give exactly one of --order or --sum-order")
    if args.order is not None:
        d = standard_densities(args.order)[args.order]
        w.json(f"density_f{args.order}.json", {"order": args.order, **d.to_json_obj()})
        if args.curve:
            _curve(w, d, f"density_f{args.order}.csv", args.points)
        return 0
    if args.c is None:
        raise UsageError("--sum-order needs --c")
    d = density_sum(args.c, args.sum_order)
    ok = sturm_sign_constant(d.P)
    t = truncation_order_t(args.c)
    w.json(
        f"density_sum{args.sum_order}.json",
        {"c": format_rational(args.c), "sum_order": args.sum_order, "nonnegative": ok, "t": t, **d.to_json_obj()},
    )
    if args.curve:
        _curve(w, d, f"density_sum{args.sum_order}.csv", args.points)
    return 0


def cmd_sample(args, w: Writer) -> int:
    from .spectra import sample_spectra

    if args.num_samples < 1:
        raise UsageError("--num-samples must be positive")
    seeds = [args.seed + k for k in range(args.num_samples)]
    samples = sample_spectra(args.n, args.c, seeds, args.scaling, threads=args.threads)
    rows = []
    for s in samples:
        for k, (raw, sc) in enumerate(zip(s.eigenvalues, s.scaled)):
            rows.append((s.seed, k, repr(float(raw)), repr(float(sc))))
    w.csv("eigenvalues.csv", ["seed", "index", "eigenvalue", "scaled"], rows)
    w.json(
        "sample_summary.json",
        {
            "n": args.n,
            "c": format_rational(args.c),
            "scaling": args.scaling,
            "scaling_factor": samples[0].scaling,
            "seeds": seeds,
            "edge_counts": [s.edge_count for s in samples],
            "trace_ok": [s.trace_ok() for s in samples],
        },
    )
    return 0 if all(s.trace_ok() for s in samples) else 1


def load_spectra(path: str):
    """SpectrumSample objects back from an eigenvalues CSV (trace data is not kept)."""
    import numpy as np

    from .spectra import SpectrumSample

    config, rows = read_csv(path)
    opts = config.get("options", {})
    by_seed: dict[int, list] = {}
    factor = {}
    for r in rows:
        seed = int(r["seed"])
        by_seed.setdefault(seed, []).append(float(r["eigenvalue"]))
        raw = float(r["eigenvalue"])
        if raw:
            factor[seed] = float(r["scaled"]) / raw
    n = int(opts.get("n", len(next(iter(by_seed.values())))))
    c = parse_rational(opts.get("c", "1"))
    out = []
    for seed, lam in by_seed.items():
        out.append(SpectrumSample(np.array(sorted(lam)), factor.get(seed, 1.0), seed, n, c, 0, 0))
    return out


def cmd_compare(args, w: Writer) -> int:
    from .density import density_sum
    from .spectra import compare, empirical_report

    samples = load_spectra(args.spectra)
    # scaling factors are equal up to float rounding of the ratio
    f0 = samples[0].scaling
    samples = [type(s)(s.eigenvalues, f0, s.seed, s.n, s.c, 0, 0) for s in samples]
    rep = empirical_report(samples, 3)
    d = density_sum(samples[0].c, args.density_order)
    cmp = compare(rep, d)
    w.csv("compare_bins.csv", ["bin_lo", "bin_hi", "hist_mass", "density_mass"], cmp.rows)
    w.json("compare.json", {"density_order": args.density_order, **cmp.to_json_obj(), "report": rep.to_json_obj()})
    return 0


def cmd_verify(args, w: Writer) -> int:
    from .acceptance import run_all

    results = run_all(skip_spectra=args.skip_spectra, threads=args.threads)
    for r in results:
        print(r.line())
        for d in r.details:
            print("       " + d)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed")
    w.quiet = True
    w.json(
        "verify.json",
        {"results": [{"number": r.number, "title": r.title, "passed": r.passed, "details": r.details,
                      "seconds": r.seconds} for r in results]},
    )
    return 0 if passed == len(results) else 1


# parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treewalks", description=__doc__.splitlines()[0])
    p.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or .)")
    p.add_argument("--threads", type=int, default=1, help="worker bound for sampling")
    p.add_argument("--quiet", action="store_true")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("census", help="brute-force walk census")
    s.add_argument("--lmax", type=int, default=6)
    s.set_defaults(func=cmd_census, fmt="csv")

    s = sub.add_parser("kernel-reduce", help="reduce a tree walk to its kernel")
    s.add_argument("walk", help="vertex sequence, e.g. '1,2,1,3,1,3,1,3'")
    s.add_argument("--seed", type=int, default=None, help="random move order")
    s.set_defaults(func=cmd_kernel_reduce)

    s = sub.add_parser("gf", help="generating functions by excess")
    s.add_argument("--xi", type=int, required=True)
    s.add_argument("--order", type=int, default=12)
    s.add_argument("--form", choices=["series", "catalan", "kernel", "superreduced"], default="catalan")
    s.set_defaults(func=cmd_gf)

    s = sub.add_parser("moments", help="exact limiting moments at fixed c")
    s.add_argument("--c", type=_rational, required=True)
    s.add_argument("--lmax", type=int, default=6)
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("scaling", help="scaling polynomial search")
    s.add_argument("--order", type=int, default=5)
    s.add_argument("--no-verify", action="store_true", help="skip the z-series cross-check")
    s.set_defaults(func=cmd_scaling)

    s = sub.add_parser("density", help="correction densities and partial sums")
    s.add_argument("--order", type=int, default=None)
    s.add_argument("--sum-order", type=int, default=None)
    s.add_argument("--c", type=_rational, default=None)
    s.add_argument("--curve", action="store_true", help="also write a sampled curve CSV")
    s.add_argument("--points", type=int, default=401)
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("sample", help="G(n, c/n) spectra")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--c", type=_rational, required=True)
    s.add_argument("--num-samples", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--scaling", choices=["classic", "p1", "p5"], default="p5")
    s.set_defaults(func=cmd_sample, fmt="csv")

    s = sub.add_parser("compare", help="histogram vs density partial sum")
    s.add_argument("--spectra", required=True)
    s.add_argument("--density-order", type=int, default=3)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("verify", help="run all acceptance checks")
    s.add_argument("--skip-spectra", action="store_true")
    s.set_defaults(func=cmd_verify)
    return p


def _options(args) -> dict:
    skip = {"func", "fmt", "out", "subcommand", "quiet"}
    out = {}
    for k, v in vars(args).items():
        if k in skip:
            continue
        out[k] = format_rational(v) if isinstance(v, Fraction) else v
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = args.out or os.environ.get(OUT_ENV) or "."
    opts = _options(args)
    cfg = RunConfig(args.subcommand, opts, out, getattr(args, "fmt", "json"), opts.get("seed"))
    w = Writer(cfg, quiet=args.quiet)
    try:
        status = args.func(args, w)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    w.manifest()
    return status


def load_series(path: str) -> ExactSeries:
    """ExactSeries from a gf JSON artifact."""
    return ExactSeries.from_json_obj(json.loads(Path(path).read_text())["series"])


if __name__ == "__main__":
    sys.exit(main())
