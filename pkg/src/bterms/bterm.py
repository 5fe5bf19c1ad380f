"""B-term syntax, the decreasing-polynomial canonical form, and equivalence.

Terms are applicative trees over the single constant ``B``; ``Comp`` is the
two-argument ``B`` written infix (``e1 . e2 == B e1 e2``).  Every term has a
unique decreasing polynomial ``(B^n1 B) . ... . (B^nk B)`` with
``n1 >= ... >= nk``, stored as the tuple ``(n1, ..., nk)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Union

from . import lam
from .canon import merge_swap
from .lam import BinaryTree, Leaf

DegreeList = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class BConst:
    def __str__(self):
        return "B"


@dataclass(frozen=True, slots=True)
class BApp:
    fun: "BTerm"
    arg: "BTerm"

    def __str__(self):
        f = str(self.fun)
        if isinstance(self.fun, Comp):
            f = f"({f})"
        a = str(self.arg)
        if not isinstance(self.arg, BConst):
            a = f"({a})"
        return f"{f} {a}"


@dataclass(frozen=True, slots=True)
class Comp:
    """Composition ``parts[0] . parts[1] . ...``; always flattened, len >= 2."""

    parts: tuple["BTerm", ...]

    def __str__(self):
        return " . ".join(str(p) for p in self.parts)


BTerm = Union[BConst, BApp, Comp]
B = BConst()


def compose(*terms: BTerm) -> BTerm:
    parts: list[BTerm] = []
    for t in terms:
        parts.extend(t.parts if isinstance(t, Comp) else (t,))
    if not parts:
        raise ValueError("empty composition")
    return parts[0] if len(parts) == 1 else Comp(tuple(parts))


def app(head: BTerm, *args: BTerm) -> BTerm:
    for a in args:
        head = BApp(head, a)
    return head


def monomial(n: int) -> BTerm:
    """``B^n B`` as the nested application ``B (B (... B))``."""
    t: BTerm = B
    for _ in range(n):
        t = BApp(B, t)
    return t


def flat_power(x: BTerm, n: int) -> BTerm:
    """``X X ... X`` (n copies, left-nested)."""
    if n < 1:
        raise ValueError("flat power needs n >= 1")
    t = x
    for _ in range(n - 1):
        t = BApp(t, x)
    return t


def size(e: BTerm) -> int:
    """Number of ``B`` constants (a composition counts its hidden ``B``)."""
    if isinstance(e, BConst):
        return 1
    if isinstance(e, BApp):
        return size(e.fun) + size(e.arg)
    return len(e.parts) - 1 + sum(size(p) for p in e.parts)


# --- parsing ------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(B)|(\d+)|(.))")


@dataclass(frozen=True)
class _Pow:
    base: BTerm
    n: int


def _tokens(text):
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("B", None, start))
        elif m.group(2):
            out.append(("nat", int(m.group(2)), start))
        else:
            ch = m.group(3)
            if ch not in "()^.":
                raise ParseError(f"unexpected character {ch!r}", start)
            out.append((ch, None, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def parse_bterm(text: str) -> BTerm:
    """Parse a B-term.

    Application is juxtaposition (left-associative), ``.`` is composition
    with the lowest precedence, and ``e^n`` is the n-fold composition of
    ``e``.  When a power is applied, ``e^n x`` expands to ``e (e (... x))``,
    so ``B^2 B`` reads as ``B (B B)``.
    """
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i][0]

    def take(kind):
        nonlocal i
        tok = toks[i]
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        i += 1
        return tok

    def resolve(x, pos):
        if isinstance(x, _Pow):
            if x.n == 0:
                raise ParseError("e^0 must be applied to an argument", pos)
            return compose(*([x.base] * x.n))
        return x

    def expr():
        pos = toks[i][2]
        parts = [resolve(appl(), pos)]
        while peek() == ".":
            take(".")
            pos = toks[i][2]
            parts.append(resolve(appl(), pos))
        return compose(*parts)

    def appl():
        head = postfix()
        while peek() in ("B", "("):
            pos = toks[i][2]
            arg = resolve(postfix(), pos)
            if isinstance(head, _Pow):
                for _ in range(head.n):
                    arg = BApp(head.base, arg)
                head = arg
            else:
                head = BApp(head, arg)
        return head

    def postfix():
        pos = toks[i][2]
        x = primary()
        while peek() == "^":
            take("^")
            n = take("nat")[1]
            x = _Pow(resolve(x, pos), n)
        return x

    def primary():
        kind, _, pos = toks[i]
        if kind == "B":
            take("B")
            return B
        if kind == "(":
            take("(")
            e = expr()
            take(")")
            return e
        raise ParseError(f"unexpected {kind!r}", pos)

    result = expr()
    if peek() != "end":
        raise ParseError(f"unexpected {peek()!r}", toks[i][2])
    return result


# --- reduction to the at-most-two-argument grammar ------------------------

def _args(e: BTerm) -> list[BTerm]:
    # every term is B applied to some arguments
    if isinstance(e, BConst):
        return []
    if isinstance(e, BApp):
        return _args(e.fun) + [e.arg]
    rest = e.parts[1] if len(e.parts) == 2 else Comp(e.parts[1:])
    return [e.parts[0], rest]


def reduce_args(e: BTerm) -> BTerm:
    """Rewrite ``B e1 e2 e3 ...`` to ``e1 (e2 e3) ...`` until every ``B`` has
    at most two arguments.  Two-argument ``B`` comes back as ``Comp``."""
    args = _args(e)
    while len(args) >= 3:
        a1, a2, a3, *rest = args
        args = _args(a1) + [BApp(a2, a3)] + rest
    if not args:
        return B
    if len(args) == 1:
        return BApp(B, reduce_args(args[0]))
    return compose(reduce_args(args[0]), reduce_args(args[1]))


def _poly_of_reduced(e: BTerm) -> DegreeList:
    if isinstance(e, BConst):
        return (0,)
    if isinstance(e, BApp):
        # B (P) distributes over composition: every degree goes up by one
        return tuple(n + 1 for n in _poly_of_reduced(e.arg))
    out: DegreeList = _poly_of_reduced(e.parts[0])
    for p in e.parts[1:]:
        out = merge_swap(out, _poly_of_reduced(p))
    return out


def to_poly(e: BTerm) -> DegreeList:
    """The unique decreasing polynomial of ``e``."""
    return _poly_of_reduced(reduce_args(e))


def equiv(a: BTerm, b: BTerm) -> bool:
    return to_poly(a) == to_poly(b)


def poly_term(degrees: Sequence[int]) -> BTerm:
    """The B-term ``(B^n1 B) . ... . (B^nk B)``."""
    return compose(*(monomial(n) for n in degrees))


def format_degrees(degrees: Sequence[int]) -> str:
    return "[" + ",".join(str(n) for n in degrees) + "]"


def parse_degrees(text: str) -> DegreeList:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"degree list must look like [n1,...,nk], got {text!r}")
    body = s[1:-1].strip()
    if not body:
        raise ValueError("degree list must be nonempty")
    out = tuple(int(x) for x in body.split(","))
    if any(n < 0 for n in out):
        raise ValueError("degrees must be nonnegative")
    return out


def is_decreasing(degrees: Sequence[int]) -> bool:
    return len(degrees) > 0 and all(a >= b for a, b in zip(degrees, degrees[1:]))


# --- the nodes labeling ---------------------------------------------------

def nodes_from(t: BinaryTree, i: int) -> list[int]:
    """Labels of the internal nodes of ``t`` in decreasing order, where the
    leaves are numbered ``i, i+1, ...`` left to right and every internal
    node takes the number of its leftmost leaf."""
    out: list[int] = []
    # (subtree, label of its leftmost leaf); walk right subtrees first
    stack = [(t, i)]
    while stack:
        u, j = stack.pop()
        while not isinstance(u, Leaf):
            out.append(j)
            stack.append((u.right, j + u.left.size))
            u = u.left
    out.sort(reverse=True)
    return out


def nodes(t: BinaryTree) -> DegreeList:
    labels = nodes_from(t, -1)
    while labels and labels[-1] == -1:
        labels.pop()
    return tuple(labels)


# --- lambda images --------------------------------------------------------

def to_lambda(e: BTerm) -> lam.LambdaTerm:
    if isinstance(e, BConst):
        return lam.COMBINATORS["B"]
    if isinstance(e, BApp):
        return lam.App(to_lambda(e.fun), to_lambda(e.arg))
    out = to_lambda(e.parts[-1])
    for p in reversed(e.parts[:-1]):
        out = lam.apps(lam.COMBINATORS["B"], to_lambda(p), out)
    return out


def normal_form(e: BTerm, fuel: int = lam.DEFAULT_FUEL) -> lam.LambdaTerm:
    return lam.beta_eta_nf(to_lambda(e), fuel)


def tree_of(e: BTerm) -> BinaryTree:
    """Binary tree of the beta-eta normal form of ``e`` (oracle route)."""
    return lam.to_binary_tree(normal_form(e))


# --- enumeration ------------------------------------------------------------

@lru_cache(maxsize=None)
def _all_with(n: int) -> tuple[BTerm, ...]:
    if n == 1:
        return (B,)
    out = []
    for k in range(1, n):
        for f in _all_with(k):
            for a in _all_with(n - k):
                out.append(BApp(f, a))
    return tuple(out)


def enumerate_bterms(n: int) -> Iterator[BTerm]:
    """All applicative B-terms with exactly ``n`` occurrences of ``B``."""
    return iter(_all_with(n))


def enumerate_upto(n: int) -> Iterator[BTerm]:
    for k in range(1, n + 1):
        yield from _all_with(k)
