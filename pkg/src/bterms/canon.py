"""Application over canonical forms.

Two encodings of a decreasing polynomial are supported: the plain degree
list ``(n1, ..., nk)`` and the run-length form that stores, for every degree
``d`` from 0 upward, how many monomials ``B^d B`` occur.  The run-length form
moves whole blocks at once using ``B^n B^m . B^n' B^m' = B^(n'+m) B^m' . B^n B^m``
for ``n < n'``, which is what makes long cycle searches affordable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .lam import LEAF, BinaryTree, Leaf, Node, parse_tree, spine

DegreeList = tuple[int, ...]


def merge_swap(l1: Sequence[int], l2: Iterable[int]) -> DegreeList:
    """Decreasing list equal, as a polynomial, to ``l1 ++ l2``.

    Each element of ``l2`` is inserted from the right; it jumps over any
    smaller degree ``m`` and gains one degree per jump, since
    ``(B^m B) . (B^n B) = (B^(n+1) B) . (B^m B)`` when ``m < n``.
    Equal degrees never swap.
    """
    out = list(l1)
    for v in l2:
        j = len(out)
        while j > 0 and out[j - 1] < v:
            v += 1
            j -= 1
        out.insert(j, v)
    return tuple(out)


def apply(p1: Sequence[int], p2: Sequence[int]) -> DegreeList:
    """Canonical degree list of the application ``P1 P2``."""
    merged = list(merge_swap(p1, (n + 1 for n in p2)))
    while merged and merged[-1] == 0:
        merged.pop()
    return tuple(n - 1 for n in merged)


# --- run-length form ------------------------------------------------------

class RunLength:
    """Counts of each monomial degree, degree 0 first.

    ``counts[d]`` is the multiplicity of ``B^d B``.  Lowering every degree by
    one is a pop from the left of the underlying deque, so applications cost
    time proportional to the degrees scanned, not the polynomial length.
    """

    __slots__ = ("_c",)

    def __init__(self, counts: Iterable[int]):
        c = deque(int(x) for x in counts)
        if any(x < 0 for x in c):
            raise ValueError("counts must be nonnegative")
        while c and c[-1] == 0:
            c.pop()
        if not c:
            raise ValueError("a run-length polynomial needs at least one monomial")
        self._c = c

    @classmethod
    def _wrap(cls, c: deque) -> "RunLength":
        obj = cls.__new__(cls)
        obj._c = c
        return obj

    @classmethod
    def from_degrees(cls, degrees: Sequence[int]) -> "RunLength":
        if not degrees:
            raise ValueError("empty degree list")
        c = [0] * (max(degrees) + 1)
        for n in degrees:
            c[n] += 1
        return cls(c)

    def to_degrees(self) -> DegreeList:
        out: list[int] = []
        for d in range(len(self._c) - 1, -1, -1):
            out.extend([d] * self._c[d])
        return tuple(out)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(self._c)

    def blocks(self) -> list[tuple[int, int]]:
        """``(degree, count)`` pairs with nonzero count, highest degree first."""
        return [(d, self._c[d]) for d in range(len(self._c) - 1, -1, -1) if self._c[d]]

    def length(self) -> int:
        return sum(self._c)

    def max_degree(self) -> int:
        return len(self._c) - 1

    def copy(self) -> "RunLength":
        return RunLength._wrap(self._c.copy())

    def __eq__(self, other):
        if not isinstance(other, RunLength):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(self._c))

    def __repr__(self):
        return f"RunLength({list(self._c)})"

    def __str__(self):
        return "rl[" + ",".join(str(x) for x in self._c) + "]"

    @classmethod
    def parse(cls, text: str) -> "RunLength":
        s = text.strip()
        if not (s.startswith("rl[") and s.endswith("]")):
            raise ValueError(f"run-length text must look like rl[c0,...], got {text!r}")
        return cls(int(x) for x in s[3:-1].split(","))


def rl_apply_blocks(c: deque, blocks: Sequence[tuple[int, int]]) -> None:
    """In-place application step.

    ``c`` holds the counts of ``P1``; ``blocks`` are the ``(degree, count)``
    blocks of ``P2`` highest first, not yet raised.
    """
    for deg, m in blocks:
        v = deg + 1
        d = 0
        n = len(c)
        # the block jumps over every degree below its current degree
        while d < n and d < v:
            v += c[d]
            d += 1
        if v < n:
            c[v] += m
        else:
            c.extend([0] * (v - n))
            c.append(m)
    # drop trailing B^0 B units, then lower every degree
    c.popleft()


def rl_apply(p1: RunLength, p2: RunLength) -> RunLength:
    c = p1._c.copy()
    rl_apply_blocks(c, p2.blocks())
    return RunLength._wrap(c)


# --- Thompson's group forests ---------------------------------------------

@dataclass(frozen=True)
class BinaryForest:
    """``(t0, t1, ..., tk, *, *, ...)``: ``trees`` stops at the last non-leaf."""

    trees: tuple[BinaryTree, ...]

    def __post_init__(self):
        t = list(self.trees)
        while t and isinstance(t[-1], Leaf):
            t.pop()
        object.__setattr__(self, "trees", tuple(t))

    def __getitem__(self, i: int) -> BinaryTree:
        return self.trees[i] if i < len(self.trees) else LEAF

    def __str__(self):
        return "(" + "; ".join([str(t) for t in self.trees] + ["*"]) + ")"

    @classmethod
    def parse(cls, text: str) -> "BinaryForest":
        s = text.strip()
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError("forest text must look like (t0; t1; ...; *)")
        items = [x.strip() for x in s[1:-1].split(";")]
        if not items or items[-1] != "*":
            raise ValueError("forest text must end with the '*' marker")
        return cls(tuple(parse_tree(x) for x in items[:-1]))

    def to_tree(self) -> BinaryTree:
        """``<*, t0, t1, ..., tk>``, the normal-form tree with these spine arguments."""
        return spine(LEAF, *self.trees)


def to_forest(degrees: Iterable[int]) -> BinaryForest:
    """Forest of ``x_n1^-1 ... x_nk^-1``: starting from all leaves, each
    generator ``x_n^-1`` joins entries ``n`` and ``n+1``."""
    trees: list[BinaryTree] = []
    for n in degrees:
        if n < 0:
            raise ValueError("degrees must be nonnegative")
        if len(trees) < n + 2:
            trees.extend([LEAF] * (n + 2 - len(trees)))
        trees[n:n + 2] = [Node(trees[n], trees[n + 1])]
    return BinaryForest(tuple(trees))


def poly_tree(degrees: Sequence[int]) -> BinaryTree:
    """Normal-form tree of a decreasing polynomial, built via its forest."""
    return to_forest(degrees).to_tree()
