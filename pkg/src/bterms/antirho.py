"""Checks behind the anti-rho arguments.

Two kinds of evidence are computed here.  For ``B^2`` the canonical forms of
its flat powers follow a closed formula whose length grows without bound.
For the tree-grammar argument, a set ``T`` of normal-form trees must contain
every flat power of the seed ``X`` and satisfy ``l(X) - a(X') >= 1`` for all
``X'`` in ``T``; we check those hypotheses on iterates and on sampled members.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from .bterm import BTerm, DegreeList, parse_bterm, to_poly
from .canon import apply, merge_swap, poly_tree
from .lam import LEAF, BinaryTree, Leaf, Node, spine, unspine


@dataclass(frozen=True)
class TreeMeasures:
    l: int
    a: int
    n1: Optional[BinaryTree]


def measures(t: BinaryTree) -> TreeMeasures:
    """Leaf count, number of spine arguments, and the first argument."""
    _, args = unspine(t)
    return TreeMeasures(t.size, len(args), args[0] if args else None)


def _arity(t: Optional[BinaryTree]) -> int:
    return 0 if t is None else len(unspine(t)[1])


def substitute_leaves(t: BinaryTree, reps: Sequence[BinaryTree]) -> BinaryTree:
    """Replace the first ``len(reps)`` leaves of ``t``, left to right."""
    it = iter(reps)
    left = len(reps)

    def go(u):
        nonlocal left
        if left == 0:
            return u
        if isinstance(u, Leaf):
            left -= 1
            return next(it)
        return Node(go(u.left), go(u.right))

    return go(t)


def tree_apply(xp: BinaryTree, x: BinaryTree) -> BinaryTree:
    """Normal-form tree of ``X' X`` from the trees of ``X'`` and ``X``.

    With ``X' = <*, e1, ..., ek>`` and ``X`` having ``n`` leaves, the head of
    ``X'`` consumes ``X`` and the arguments ``e_i`` land on the leaves of
    ``X`` in order; surplus arguments are applied afterwards.
    """
    _, args = unspine(xp)
    n = x.size
    head = substitute_leaves(x, args[:n])
    return spine(head, *args[n:])


def predict_apply_measures(xp: BinaryTree, x: BinaryTree) -> TreeMeasures:
    """``(l, a, N1)`` of ``X' X`` from the recurrences alone."""
    mp, mx = measures(xp), measures(x)
    l = mp.l - 1 + max(mx.l - mp.a, 0)
    a = mx.a + _arity(mp.n1) + max(mp.a - mx.l, 0)
    if mp.n1 is None:
        raise ValueError("X' has no spine arguments")
    if isinstance(mp.n1, Leaf):
        m = min(mx.l, mp.a)
        _, xargs = unspine(xp)
        # leaves x2..xm of X receive N2(X')..Nm(X'); N1(X) starts at leaf x2
        n1 = substitute_leaves(mx.n1, xargs[1:m]) if mx.n1 is not None else None
    else:
        n1 = measures(mp.n1).n1
    return TreeMeasures(l, a, n1)


# --- B^2: the closed form of its flat powers -------------------------------

def triangular(m: int) -> int:
    return (m * m + m) // 2


def b2_expected(m: int, j: int) -> DegreeList:
    """Degree list of ``(B^2)^(t_m + j)`` read off the closed formula."""
    if m < 1 or not 0 <= j <= m:
        raise ValueError(f"need m >= 1 and 0 <= j <= m, got m={m}, j={j}")
    out: list[int] = []
    for i in range(1, j + 1):
        out += [2 * m - i - j + 2] * 2
    for i in range(j + 1, m + 1):
        out += [m - i] * 2
    return tuple(out)


def b2_slope_lhs(k: int, m: int, l: int) -> DegreeList:
    """``prod_{i=k}^{m} (B^(m-i) B)^2 . (B^l B)^2`` merged to canonical form."""
    base = [d for i in range(k, m + 1) for d in (m - i, m - i)]
    return merge_swap(base, (l, l))


def b2_slope_rhs(k: int, m: int, l: int) -> DegreeList:
    base = tuple(d for i in range(k, m + 1) for d in (m - i, m - i))
    top = 2 * m - 2 * k + l + 2
    return (top, top) + base


@dataclass
class B2Report:
    m_max: int
    steps: int
    mismatches: list[tuple[int, int, DegreeList, DegreeList]] = field(default_factory=list)
    lengths_at_tm: list[int] = field(default_factory=list)
    strictly_growing: bool = True

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.strictly_growing

    def to_dict(self) -> dict:
        return {
            "m_max": self.m_max,
            "steps": self.steps,
            "ok": self.ok,
            "mismatches": [
                {"m": m, "j": j, "expected": list(e), "actual": list(a)}
                for m, j, e, a in self.mismatches
            ],
            "lengths_at_tm": self.lengths_at_tm,
            "strictly_growing": self.strictly_growing,
        }


def verify_b2_growth(m_max: int) -> B2Report:
    """Iterate ``apply`` from ``[0,0]`` and compare every power with the formula."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    x = (0, 0)
    cur = x
    n = 1
    report = B2Report(m_max, 0)
    for m in range(1, m_max + 1):
        for j in range(m + 1):
            target = triangular(m) + j
            while n < target:
                cur = apply(cur, x)
                n += 1
            want = b2_expected(m, j)
            if cur != want:
                report.mismatches.append((m, j, want, cur))
            if j == 0:
                report.lengths_at_tm.append(len(cur))
    report.steps = n
    report.strictly_growing = all(a < b for a, b in
                                  zip(report.lengths_at_tm, report.lengths_at_tm[1:]))
    return report


# --- tree grammars ------------------------------------------------------------

def _leaves(n: int) -> list[BinaryTree]:
    return [LEAF] * n


def tprime_member(t: BinaryTree, k: int, n: int) -> bool:
    """``T'_{k,n}``: a leaf, or ``<*, s1, ..., s_{(k+2)n}>`` with ``s_i = *``
    when ``k+2`` divides ``i`` and ``s_i`` in ``T'_{k,n}`` otherwise."""
    if isinstance(t, Leaf):
        return True
    head, args = unspine(t)
    if len(args) != (k + 2) * n:
        return False
    for i, s in enumerate(args, 1):
        if i % (k + 2) == 0:
            if not isinstance(s, Leaf):
                return False
        elif not tprime_member(s, k, n):
            return False
    return True


def tkn_member(t: BinaryTree, k: int, n: int) -> bool:
    """``T_{k,n}``: ``<t0, t1, ..., t_{k+1}>`` with every ``t_i`` in ``T'_{k,n}``."""
    rest = t
    args = []
    for _ in range(k + 1):
        if isinstance(rest, Leaf):
            return False
        args.append(rest.right)
        rest = rest.left
    return tprime_member(rest, k, n) and all(tprime_member(s, k, n) for s in args)


def tkn_seed(k: int, n: int) -> BinaryTree:
    """Tree of ``(B^k B)^((k+2)n)``: ``<*, ..., * (k+1), <*, ..., * ((k+2)n+1)>>``."""
    return spine(*_leaves(k + 1), spine(*_leaves((k + 2) * n + 1)))


def tkn_seed_term(k: int, n: int) -> BTerm:
    return parse_bterm(f"(B^{k} B)^{(k + 2) * n}")


# each grammar is a pair:
#   children(t_prime_builder) enumerates one-level expansions for T'
#   top(t1, ..., tr) builds a T member from T' components
@dataclass
class ClosureWitness:
    """A candidate invariant set ``T`` for the tree-grammar argument."""

    name: str
    seed: BTerm
    membership: Callable[[BinaryTree], bool]
    # the attainable spine-argument counts a(X') over T, as claimed
    arities: frozenset[int]
    # T' productions: arity -> builder from that many T' trees
    productions: dict[int, Callable[..., BinaryTree]]
    # number of T' components and the builder of a T member from them
    top_arity: int
    top: Callable[..., BinaryTree]
    max_arity: Optional[int] = None

    def tprime_upto(self, depth: int) -> list[BinaryTree]:
        level = [LEAF]
        for _ in range(depth):
            nxt = [LEAF]
            for r, build in self.productions.items():
                for kids in itertools.product(level, repeat=r):
                    nxt.append(build(*kids))
            level = nxt
        return level

    def count_tprime(self, depth: int) -> int:
        c = 1
        for _ in range(depth):
            c = 1 + sum(c ** r for r in self.productions)
        return c

    def random_tprime(self, depth: int, rng: random.Random) -> BinaryTree:
        if depth == 0 or rng.random() < 0.25:
            return LEAF
        r = rng.choice(sorted(self.productions))
        return self.productions[r](*(self.random_tprime(depth - 1, rng) for _ in range(r)))

    def members(self, depth: int, samples: int, rng: random.Random
                ) -> tuple[int, Iterator[BinaryTree]]:
        """Exhaustive over the deepest level that fits in ``samples``, then random.

        Returns the exhaustive depth and the member stream.
        """
        ex = 0
        while ex < depth and self.count_tprime(ex + 1) ** self.top_arity <= samples:
            ex += 1
        pool = self.tprime_upto(ex)

        def gen():
            emitted = 0
            for kids in itertools.product(pool, repeat=self.top_arity):
                yield self.top(*kids)
                emitted += 1
            for _ in range(max(samples - emitted, 0)):
                yield self.top(*(self.random_tprime(depth, rng)
                                 for _ in range(self.top_arity)))

        return ex, gen()


def tkn_witness(k: int, n: int) -> ClosureWitness:
    width = (k + 2) * n

    def prod(*kids):
        it = iter(kids)
        args = [LEAF if i % (k + 2) == 0 else next(it) for i in range(1, width + 1)]
        return spine(LEAF, *args)

    free = width - n  # positions not divisible by k+2
    return ClosureWitness(
        name=f"T_{{{k},{n}}}",
        seed=tkn_seed_term(k, n),
        membership=lambda t: tkn_member(t, k, n),
        arities=frozenset({k + 1, width + k + 1}),
        productions={free: prod},
        top_arity=k + 2,
        top=lambda *ts: spine(*ts),
        max_arity=width + k + 1,
    )


def _is_spine(t, nargs):
    head, args = unspine(t)
    return args if len(args) == nargs else None


def _ex1_tprime(t: BinaryTree) -> bool:
    if isinstance(t, Leaf):
        return True
    _, args = unspine(t)
    if len(args) == 2:
        return isinstance(args[1], Leaf) and _ex1_tprime(args[0])
    if len(args) == 4:
        t1, s2, inner, s4 = args
        sub = _is_spine(inner, 2)
        return (isinstance(s2, Leaf) and isinstance(s4, Leaf) and sub is not None
                and isinstance(sub[1], Leaf) and _ex1_tprime(t1) and _ex1_tprime(sub[0]))
    return False


def _ex1_member(t: BinaryTree) -> bool:
    if isinstance(t, Leaf):
        return False
    sub = _is_spine(t.right, 2)
    return (sub is not None and isinstance(sub[1], Leaf)
            and _ex1_tprime(t.left) and _ex1_tprime(sub[0]))


def _ex2_tprime(t: BinaryTree) -> bool:
    if isinstance(t, Leaf):
        return True
    _, args = unspine(t)
    return (len(args) == 3 and isinstance(args[1], Leaf) and isinstance(args[2], Leaf)
            and _ex2_tprime(args[0]))


def _ex2_member(t: BinaryTree) -> bool:
    if isinstance(t, Leaf):
        return False
    sub = _is_spine(t.right, 3)
    return (sub is not None and isinstance(sub[1], Leaf) and isinstance(sub[2], Leaf)
            and _ex2_tprime(t.left) and _ex2_tprime(sub[0]))


def example_witness(which: str) -> ClosureWitness:
    """The two hand-made grammars: ``ex1`` for ``(B^2 B)^2 . (B B)^2 . B^2``
    and ``ex2`` for ``(B B)^3 . B^3``."""
    s = LEAF
    if which == "ex1":
        return ClosureWitness(
            name="ex1",
            seed=parse_bterm("(B^2 B)^2 . (B B)^2 . B^2"),
            membership=_ex1_member,
            arities=frozenset({1, 3, 5}),
            productions={
                1: lambda t: spine(s, t, s),
                2: lambda t1, t2: spine(s, t1, s, spine(s, t2, s), s),
            },
            top_arity=2,
            top=lambda t1, t2: Node(t1, spine(s, t2, s)),
        )
    if which == "ex2":
        return ClosureWitness(
            name="ex2",
            seed=parse_bterm("(B B)^3 . B^3"),
            membership=_ex2_member,
            arities=frozenset({1, 4}),
            productions={1: lambda t: spine(s, t, s, s)},
            top_arity=2,
            top=lambda t1, t2: Node(t1, spine(s, t2, s, s)),
        )
    raise ValueError(f"unknown example witness {which!r}; expected ex1 or ex2")


@dataclass
class ClosureReport:
    witness: str
    seed_degrees: DegreeList
    seed_leaves: int
    iterations: int
    samples: int
    depth: int
    exhaustive_depth: int
    failures: list[str] = field(default_factory=list)
    observed_arities: set[int] = field(default_factory=set)
    min_margin: Optional[int] = None
    leaf_counts: list[int] = field(default_factory=list)
    monotone_prefix: bool = True

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "witness": self.witness,
            "seed": list(self.seed_degrees),
            "l_seed": self.seed_leaves,
            "iterations": self.iterations,
            "samples": self.samples,
            "depth": self.depth,
            "exhaustive_depth": self.exhaustive_depth,
            "ok": self.ok,
            "failures": self.failures,
            "observed_arities": sorted(self.observed_arities),
            "min_margin": self.min_margin,
            "monotone_prefix": self.monotone_prefix,
            "leaf_counts_head": self.leaf_counts[:20],
        }


def verify_closure(w: ClosureWitness, seed: Optional[BTerm] = None, iterations: int = 100,
                   samples: int = 500, depth: int = 4, rng_seed: int = 0) -> ClosureReport:
    """Check the hypotheses of the tree-grammar anti-rho argument.

    On the first ``iterations`` flat powers of the seed, and on ``samples``
    generated members of ``T`` (nesting up to ``depth``): membership is
    preserved by right application of the seed, and ``l(seed) - a(X') >= 1``.
    The flat powers are computed both on trees and on canonical polynomials,
    which must agree.  Whether ``l`` is non-decreasing is only observed.
    """
    seed = w.seed if seed is None else seed
    degrees = to_poly(seed)
    x = poly_tree(degrees)
    lx = x.size
    rng = random.Random(rng_seed)
    ex, stream = w.members(depth, samples, rng)
    rep = ClosureReport(w.name, degrees, lx, iterations, samples, depth, ex)

    def margin_check(t, where):
        a = measures(t).a
        rep.observed_arities.add(a)
        mg = lx - a
        rep.min_margin = mg if rep.min_margin is None else min(rep.min_margin, mg)
        if mg < 1:
            rep.failures.append(f"{where}: l(X) - a(X') = {mg} < 1 for {t}")
        if w.max_arity is not None and a > w.max_arity:
            rep.failures.append(f"{where}: a(X') = {a} exceeds bound {w.max_arity} for {t}")
        if a not in w.arities:
            rep.failures.append(f"{where}: a(X') = {a} not in claimed set {sorted(w.arities)}")

    if not w.membership(x):
        rep.failures.append(f"seed tree {x} is not a member of {w.name}")
    cur_tree, cur_poly = x, degrees
    for i in range(1, iterations + 1):
        if i > 1:
            cur_tree = tree_apply(cur_tree, x)
            cur_poly = apply(cur_poly, degrees)
            if poly_tree(cur_poly) != cur_tree:
                rep.failures.append(f"iterate {i}: tree and polynomial routes disagree")
        if not w.membership(cur_tree):
            rep.failures.append(f"iterate {i}: X_({i}) = {cur_tree} left {w.name}")
        margin_check(cur_tree, f"iterate {i}")
        rep.leaf_counts.append(cur_tree.size)
    rep.monotone_prefix = all(a <= b for a, b in zip(rep.leaf_counts, rep.leaf_counts[1:]))

    for j, t in enumerate(stream):
        if not w.membership(t):
            rep.failures.append(f"sample {j}: generator produced a non-member {t}")
            continue
        margin_check(t, f"sample {j}")
        y = tree_apply(t, x)
        if not w.membership(y):
            rep.failures.append(f"sample {j}: {t} applied to the seed leaves {w.name}")
    return rep
