"""Canonical length of the flat powers of B^2, against the closed form."""

import argparse

from bterms.antirho import b2_expected, triangular
from bterms.canon import apply


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--m-max", type=int, default=30)
    a = p.parse_args()
    x = cur = (0, 0)
    n = 1
    print(" m   t_m  length  max degree  matches")
    for m in range(1, a.m_max + 1):
        while n < triangular(m):
            cur = apply(cur, x)
            n += 1
        print(f"{m:2d} {triangular(m):5d} {len(cur):7d} {cur[0]:11d}  "
              f"{cur == b2_expected(m, 0)}")


if __name__ == "__main__":
    main()
