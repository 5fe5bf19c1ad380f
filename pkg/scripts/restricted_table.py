"""First repeated flat power under the bare B^k rewriting, next to the full rho."""

import argparse

from bterms.altrep import restricted_rho
from bterms.bterm import monomial
from bterms.cycle import rho_bterm


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--limit", type=int, default=100_000)
    a = p.parse_args()
    for n in range(a.max_n + 1):
        i, j = restricted_rho(n, a.limit)
        full = rho_bterm(monomial(n)) if n <= 3 else "-"
        print(f"n={n}: restricted (i,j) = ({i},{j})   full rho = {full}")


if __name__ == "__main__":
    main()
