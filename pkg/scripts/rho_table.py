"""Print rho(B^n B) for a range of n, timing each search.

    python scripts/rho_table.py --max-n 4 --algo brent
    python scripts/rho_table.py --only 5 --unbounded --checkpoint-dir ckpt/
"""

import argparse
import os
import sys
import time

from bterms.bterm import monomial
from bterms.cycle import BudgetExceeded, RhoRun


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--only", type=int)
    p.add_argument("--algo", default="floyd")
    p.add_argument("--max-steps", type=int, default=10**7)
    p.add_argument("--unbounded", action="store_true")
    p.add_argument("--checkpoint-dir")
    p.add_argument("--every", type=int, default=10**7)
    a = p.parse_args()
    ns = [a.only] if a.only is not None else range(a.max_n + 1)
    limit = sys.maxsize if a.unbounded else a.max_steps
    for n in ns:
        ck = None
        if a.checkpoint_dir:
            os.makedirs(a.checkpoint_dir, exist_ok=True)
            ck = os.path.join(a.checkpoint_dir, f"rho-{n}-{a.algo}.ckpt.gz")
        run = RhoRun.resume(monomial(n), ck) if ck and os.path.exists(ck) else \
            RhoRun(monomial(n), a.algo, ck)
        t0 = time.perf_counter()
        try:
            res = run.run(limit, a.every if ck else 0)
        except BudgetExceeded:
            print(f"n={n}: budget of {limit} steps exhausted at {run.search.steps}")
            continue
        print(f"n={n}: rho = {res}  ({run.search.steps} steps, "
              f"{time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
