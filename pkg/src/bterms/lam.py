"""Nameless lambda terms, a beta-eta normalizer, and unlabeled binary trees.

This is the ground-truth oracle: B-terms and the other combinators are
translated into de Bruijn terms and compared by syntactic equality of
their beta-eta normal forms.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Union

DEFAULT_FUEL = 10**6


class NonNormalizing(Exception):
    """Raised when normalization runs out of fuel (the term may diverge)."""


class NotBTermImage(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Var:
    index: int

    def __str__(self):
        return str(self.index)


@dataclass(frozen=True, slots=True)
class Lam:
    body: "LambdaTerm"

    def __str__(self):
        return f"\\.{self.body}"


@dataclass(frozen=True, slots=True)
class App:
    fun: "LambdaTerm"
    arg: "LambdaTerm"

    def __str__(self):
        f = str(self.fun)
        if isinstance(self.fun, Lam):
            f = f"({f})"
        a = str(self.arg)
        if not isinstance(self.arg, Var):
            a = f"({a})"
        return f"{f} {a}"


LambdaTerm = Union[Var, Lam, App]


def lams(n: int, body: LambdaTerm) -> LambdaTerm:
    for _ in range(n):
        body = Lam(body)
    return body


def apps(head: LambdaTerm, *args: LambdaTerm) -> LambdaTerm:
    for a in args:
        head = App(head, a)
    return head


# --- substitution -------------------------------------------------------

def shift(t: LambdaTerm, d: int, cutoff: int = 0) -> LambdaTerm:
    """Add ``d`` to every free index ``>= cutoff``."""
    if isinstance(t, Var):
        return Var(t.index + d) if t.index >= cutoff else t
    if isinstance(t, Lam):
        return Lam(shift(t.body, d, cutoff + 1))
    return App(shift(t.fun, d, cutoff), shift(t.arg, d, cutoff))


def _subst(t: LambdaTerm, j: int, s: LambdaTerm) -> LambdaTerm:
    # s is already shifted by j
    if isinstance(t, Var):
        if t.index == j:
            return shift(s, j) if j else s
        return Var(t.index - 1) if t.index > j else t
    if isinstance(t, Lam):
        return Lam(_subst(t.body, j + 1, s))
    return App(_subst(t.fun, j, s), _subst(t.arg, j, s))


def beta(body: LambdaTerm, arg: LambdaTerm) -> LambdaTerm:
    """Contract ``(\\. body) arg``."""
    return _subst(body, 0, arg)


def free_in(t: LambdaTerm, i: int) -> bool:
    if isinstance(t, Var):
        return t.index == i
    if isinstance(t, Lam):
        return free_in(t.body, i + 1)
    return free_in(t.fun, i) or free_in(t.arg, i)


# --- normalization ------------------------------------------------------

class _Fuel:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n

    def burn(self):
        self.left -= 1
        if self.left < 0:
            raise NonNormalizing("fuel exhausted; term is possibly non-normalizing")


def _whnf(t: LambdaTerm, fuel: _Fuel) -> LambdaTerm:
    # unwind the spine, contract the head redex, repeat
    args = []
    while True:
        while isinstance(t, App):
            args.append(t.arg)
            t = t.fun
        if isinstance(t, Lam) and args:
            fuel.burn()
            t = beta(t.body, args.pop())
            continue
        while args:
            t = App(t, args.pop())
        return t


def _beta_nf(t: LambdaTerm, fuel: _Fuel) -> LambdaTerm:
    t = _whnf(t, fuel)
    if isinstance(t, Lam):
        return Lam(_beta_nf(t.body, fuel))
    if isinstance(t, App):
        # head is a variable after whnf, so the spine is neutral
        return App(_beta_nf(t.fun, fuel), _beta_nf(t.arg, fuel))
    return t


def eta_nf(t: LambdaTerm) -> LambdaTerm:
    """Contract eta-redexes bottom-up until none remain."""
    if isinstance(t, Var):
        return t
    if isinstance(t, App):
        return App(eta_nf(t.fun), eta_nf(t.arg))
    body = eta_nf(t.body)
    if (isinstance(body, App) and body.arg == Var(0)
            and not free_in(body.fun, 0)):
        return shift(body.fun, -1)
    return Lam(body)


def beta_eta_nf(t: LambdaTerm, fuel: int = DEFAULT_FUEL) -> LambdaTerm:
    """Normal-order beta normalization followed by maximal eta contraction.

    ``fuel`` bounds the number of beta steps; :class:`NonNormalizing` is
    raised when it runs out.
    """
    limit = sys.getrecursionlimit()
    if limit < 100_000:
        sys.setrecursionlimit(100_000)
    try:
        return eta_nf(_beta_nf(t, _Fuel(fuel)))
    except RecursionError as exc:
        raise NonNormalizing("term grew too deep during normalization") from exc
    finally:
        sys.setrecursionlimit(limit)


def alpha_eq(a: LambdaTerm, b: LambdaTerm) -> bool:
    # indices make alpha-equivalence plain structural equality
    return a == b


# --- combinators --------------------------------------------------------

def _v(i):
    return Var(i)


COMBINATORS: dict[str, LambdaTerm] = {
    # B = \x y z. x (y z)
    "B": lams(3, App(_v(2), App(_v(1), _v(0)))),
    # C = \x y z. x z y
    "C": lams(3, apps(_v(2), _v(0), _v(1))),
    "K": lams(2, _v(1)),
    "I": lams(1, _v(0)),
    # S = \x y z. x z (y z)
    "S": lams(3, apps(_v(2), _v(0), App(_v(1), _v(0)))),
    # D = \x y z w. x y (z w)
    "D": lams(4, apps(_v(3), _v(2), App(_v(1), _v(0)))),
    # F = \x y z. z y x
    "F": lams(3, apps(_v(0), _v(1), _v(2))),
    # R = \x y z. y z x
    "R": lams(3, apps(_v(1), _v(0), _v(2))),
    # T = \x y. y x
    "T": lams(2, App(_v(0), _v(1))),
    # V = \x y z. z x y
    "V": lams(3, apps(_v(0), _v(2), _v(1))),
    # O = \x y. y (x y)
    "O": lams(2, App(_v(0), App(_v(1), _v(0)))),
}


def from_combinator(name: str) -> LambdaTerm:
    try:
        return COMBINATORS[name]
    except KeyError:
        raise ValueError(f"unknown combinator {name!r}; "
                         f"expected one of {''.join(COMBINATORS)}") from None


# --- binary trees -------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Leaf:
    def __str__(self):
        return "*"

    @property
    def size(self) -> int:
        return 1


@dataclass(frozen=True, slots=True)
class Node:
    left: "BinaryTree"
    right: "BinaryTree"
    size: int = 0

    def __post_init__(self):
        object.__setattr__(self, "size", self.left.size + self.right.size)

    def __str__(self):
        return f"<{self.left},{self.right}>"


BinaryTree = Union[Leaf, Node]
LEAF = Leaf()


def spine(head: BinaryTree, *args: BinaryTree) -> BinaryTree:
    """``<head, a1, ..., ak>``, i.e. ``<...<<head,a1>,a2>...,ak>``."""
    for a in args:
        head = Node(head, a)
    return head


def unspine(t: BinaryTree) -> tuple[BinaryTree, list[BinaryTree]]:
    """Peel the left spine: returns the leftmost leaf and the right children."""
    args = []
    while isinstance(t, Node):
        args.append(t.right)
        t = t.left
    args.reverse()
    return t, args


def parse_tree(text: str) -> BinaryTree:
    """Parse the ``*`` / ``<l,r>`` syntax; ``<a,b,c>`` abbreviates ``<<a,b>,c>``."""
    s = text.replace(" ", "")
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(s):
            raise ValueError("unexpected end of tree text")
        if s[pos] == "*":
            pos += 1
            return LEAF
        if s[pos] != "<":
            raise ValueError(f"unexpected {s[pos]!r} at {pos} in tree text")
        pos += 1
        items = [parse()]
        while pos < len(s) and s[pos] == ",":
            pos += 1
            items.append(parse())
        if pos >= len(s) or s[pos] != ">":
            raise ValueError(f"expected '>' at {pos} in tree text")
        pos += 1
        if len(items) < 2:
            raise ValueError("a node needs at least two children")
        return spine(*items)

    t = parse()
    if pos != len(s):
        raise ValueError(f"trailing input at {pos} in tree text")
    return t


def to_binary_tree(t: LambdaTerm) -> BinaryTree:
    """Map ``\\x1..xk. M`` to ``M`` with every variable replaced by a leaf.

    The variables must occur exactly once each, in binding order, which is
    the shape every B-term normal form has.
    """
    k = 0
    while isinstance(t, Lam):
        k += 1
        t = t.body
    expected = k - 1

    def build(m):
        nonlocal expected
        if isinstance(m, Var):
            if m.index != expected:
                raise NotBTermImage(f"variable {m.index} out of order; not a B-term image")
            expected -= 1
            return LEAF
        if isinstance(m, Lam):
            raise NotBTermImage("abstraction under application; not a B-term image")
        return Node(build(m.fun), build(m.arg))

    tree = build(t)
    if expected != -1:
        raise NotBTermImage("unused bound variable; not a B-term image")
    return tree


def tree_to_lambda(t: BinaryTree) -> LambdaTerm:
    """Inverse of :func:`to_binary_tree`: number the leaves left to right."""
    n = t.size
    counter = iter(range(n - 1, -1, -1))

    def build(u):
        if isinstance(u, Leaf):
            return Var(next(counter))
        return App(build(u.left), build(u.right))

    return lams(n, build(t))
