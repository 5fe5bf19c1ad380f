"""Run the tree-grammar closure checks for T_{k,n} and the two example grammars."""

import argparse

from bterms.antirho import example_witness, tkn_witness, verify_closure


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--samples", type=int, default=500)
    a = p.parse_args()
    ws = [tkn_witness(k, n) for k in range(a.k_max + 1) for n in range(1, a.n_max + 1)]
    ws += [example_witness("ex1"), example_witness("ex2")]
    for w in ws:
        r = verify_closure(w, iterations=a.iters, samples=a.samples)
        print(f"{w.name:10s} {'ok' if r.ok else 'FAIL'}  l(X)={r.seed_leaves:3d}  "
              f"a in {sorted(r.observed_arities)}  margin {r.min_margin}")


if __name__ == "__main__":
    main()
