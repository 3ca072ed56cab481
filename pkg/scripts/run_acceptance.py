"""Run every acceptance check and print the pass/fail table.

    python scripts/run_acceptance.py [--skip-spectra] [--json out.json]
"""

import argparse
import json

from treewalks.acceptance import run_all


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--skip-spectra", action="store_true")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--json", default=None)
    args = ap.parse_args()
    results = run_all(skip_spectra=args.skip_spectra, threads=args.threads)
    for r in results:
        print(r.line())
        for d in r.details:
            print("       " + d)
    print(f"{sum(r.passed for r in results)}/{len(results)} passed")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([r.__dict__ for r in results], fh, indent=2)


if __name__ == "__main__":
    main()
