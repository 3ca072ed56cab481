"""Push the scaling search past order 5 (orders 6 and 7 by default)."""

import argparse
import time

from treewalks.exactalg import format_rational
from treewalks.moments import scaling_search

ap = argparse.ArgumentParser()
ap.add_argument("--order", type=int, default=7)
ap.add_argument("--no-verify", action="store_true")
args = ap.parse_args()

t0 = time.perf_counter()
res = scaling_search(args.order, verify=not args.no_verify)
print(f"order {args.order}: {'ok' if res.success else 'failed'} ({time.perf_counter() - t0:.1f}s)")
print("status:", res.status)
print("p_N :", ", ".join(format_rational(a) for a in res.a))
print("q_N :", ", ".join(format_rational(b) for b in res.b))
for i, q in enumerate(res.Q):
    print(f"Q_{i}(x) = {q}")
