"""The alternate canonical form ``e ::= B | B e | e . B`` as binary words,
and rho under bare ``B^k`` rewriting.

A word is read outermost first: ``0`` is the context ``B []``, ``1`` is
``[] . B``, and the empty word is the terminal ``B``.  So ``"001"`` stands for
``B (B (B . B))``.
"""

from __future__ import annotations

import sys
from typing import Sequence, Union

from .bterm import B, BApp, BTerm, DegreeList, compose, is_decreasing
from .cycle import BudgetExceeded

BinSeq = str


def check_word(s: str) -> BinSeq:
    if any(ch not in "01" for ch in s):
        raise ValueError(f"binary word may only contain 0 and 1, got {s!r}")
    return s


def f_to_poly(s: BinSeq) -> DegreeList:
    """Decreasing polynomial of a word: ``0`` raises every degree, ``1`` appends ``B^0 B``."""
    check_word(s)
    degrees = [0]
    raised = 0
    # innermost constructor is at the right end of the word
    for ch in reversed(s):
        if ch == "0":
            raised += 1
        else:
            degrees = [d + raised for d in degrees]
            raised = 0
            degrees.append(0)
    return tuple(d + raised for d in degrees)


def f_inv(p: Sequence[int]) -> BinSeq:
    if not is_decreasing(p):
        raise ValueError(f"f_inv needs a decreasing degree list, got {list(p)}")
    out = []
    k = len(p)
    lowered = 0
    while not (k == 1 and p[0] == lowered):
        if p[k - 1] > lowered:
            out.append("0")
            lowered += 1
        else:
            out.append("1")
            k -= 1
    return "".join(out)


def bs_apply(x: BinSeq, y: BinSeq) -> BinSeq:
    """Application on words by the seven rules::

        e   @ y   = 0y
        1x  @ y   = x @ 0y
        0x  @ e   = 1x
        0x  @ 1y  = 1 (0x @ y)
        0   @ 0y  = 100y
        01x @ 0y  = 1 (0x @ 00y)
        00x @ 0y  = 0 (0x @ y)
    """
    check_word(x)
    check_word(y)
    # both operands as stacks with the first letter on top
    xs = list(reversed(x))
    ys = list(reversed(y))
    out: list[str] = []

    def finish(*front):
        return "".join(out) + "".join(front)

    while True:
        if not xs:
            return finish("0", *reversed(ys))
        if xs[-1] == "1":
            xs.pop()
            ys.append("0")
            continue
        if not ys:
            xs.pop()
            return finish("1", *reversed(xs))
        if ys[-1] == "1":
            out.append("1")
            ys.pop()
            continue
        if len(xs) == 1:
            ys.pop()
            return finish("100", *reversed(ys))
        if xs[-2] == "1":
            out.append("1")
            xs.pop()
            xs[-1] = "0"
            ys.append("0")
            continue
        out.append("0")
        xs.pop()
        ys.pop()


def word_term(s: BinSeq) -> BTerm:
    """The B-term a word stands for."""
    t: BTerm = B
    for ch in reversed(check_word(s)):
        t = BApp(B, t) if ch == "0" else compose(t, B)
    return t


# --- restricted rewriting ---------------------------------------------------

# a restricted term is an int k (the constant B^k) or a pair (fun, arg)
RestrictedTerm = Union[int, tuple]


def _spine(t):
    args = []
    while isinstance(t, tuple):
        args.append(t[1])
        t = t[0]
    args.reverse()
    return t, args


def restricted_nf(t: RestrictedTerm) -> RestrictedTerm:
    """Normal form under ``B^k e1 e2 ... e_{k+2} -> e1 (e2 ... e_{k+2})`` only."""
    head, args = _spine(t)
    while len(args) >= head + 2:
        k = head
        inner = args[1]
        for a in args[2:k + 2]:
            inner = (inner, a)
        h, pre = _spine(args[0])
        head, args = h, pre + [inner] + args[k + 2:]
    out = head
    for a in args:
        out = (out, restricted_nf(a))
    return out


def restricted_seed(n: int) -> RestrictedTerm:
    """``B^n B``: the constant ``B^n`` applied to ``B``."""
    return (n, 1)


def restricted_to_bterm(t: RestrictedTerm) -> BTerm:
    """Read ``B^k`` as ``k``-fold composition (``B^k x = B (B (... x))``)."""
    head, args = _spine(t)
    if not args:
        if head == 0:
            raise ValueError("bare B^0 is the identity, not a B-term")
        return compose(*([B] * head))
    out = restricted_to_bterm(args[0])
    for _ in range(head):
        out = BApp(B, out)
    for a in args[1:]:
        out = BApp(out, restricted_to_bterm(a))
    return out


def restricted_powers(seed: RestrictedTerm, count: int) -> list[RestrictedTerm]:
    out = []
    cur = restricted_nf(seed)
    for _ in range(count):
        out.append(cur)
        cur = restricted_nf((cur, seed))
    return out


def restricted_rho(n: int, limit: int = 100_000,
                   seed: RestrictedTerm | None = None) -> tuple[int, int]:
    """First ``i < j`` with syntactically equal normal forms of the flat powers."""
    seed = restricted_seed(n) if seed is None else seed
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 100_000))
    try:
        seen: dict = {}
        cur = restricted_nf(seed)
        for j in range(1, limit + 1):
            i = seen.get(cur)
            if i is not None:
                return i, j
            seen[cur] = j
            cur = restricted_nf((cur, seed))
    finally:
        sys.setrecursionlimit(old)
    raise BudgetExceeded(f"no repeat among the first {limit} restricted powers")
