"""Cycle detection over iterated right application.

``rho(X) = (k, c)`` means ``X^(k) = X^(k+c)`` with both minimal, where
``X^(n)`` is the flat power ``X X ... X``.  The searches only ever keep a
handful of states alive and can be paused, serialized, and resumed.
"""

from __future__ import annotations

import gzip
import json
import operator
import os
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from . import lam
from .bterm import BTerm, to_poly
from .canon import RunLength, rl_apply_blocks

CHECKPOINT_FORMAT = "bterms-rho-checkpoint"
CHECKPOINT_VERSION = 1


class BudgetExceeded(Exception):
    """The step limit was hit before a cycle was found.

    This is not evidence that no cycle exists.
    """


class Interrupted(Exception):
    """The search was asked to stop; its state is consistent and resumable."""


@dataclass(frozen=True)
class RhoResult:
    entry: int
    cycle: int

    def __iter__(self):
        return iter((self.entry, self.cycle))

    def __str__(self):
        return f"({self.entry},{self.cycle})"


@dataclass
class IteratedSystem:
    initial: Any
    step: Callable[[Any], Any]
    equal: Callable[[Any, Any], bool] = operator.eq


class _Search:
    """Common bookkeeping: step counting, budget, progress hooks, snapshots."""

    name = ""
    _state_fields: tuple[str, ...] = ()
    _int_fields: tuple[str, ...] = ()

    def __init__(self, system: IteratedSystem):
        self.sys = system
        self.steps = 0
        self.phase = 1
        self.result: Optional[RhoResult] = None
        self._started = False
        self._stop = False
        self._limit = 0
        self._every = 0
        self._tick: Optional[Callable] = None
        self._next_event = 0
        self._next_tick = 0

    # subclasses call this at every loop boundary with the cost of the next iteration
    def _boundary(self, cost: int) -> None:
        if self.steps + cost < self._next_event:
            return
        if self._stop:
            self._stop = False
            raise Interrupted(f"{self.name} search stopped after {self.steps} steps")
        if self.steps + cost > self._limit:
            raise BudgetExceeded(
                f"{self.name}: no cycle within {self._limit} steps")
        if self._tick is not None and self.steps >= self._next_tick:
            self._tick(self)
            self._next_tick = self.steps + self._every
        self._schedule()

    def _schedule(self):
        ev = self._limit + 1
        if self._tick is not None:
            ev = min(ev, self._next_tick)
        if self._stop:
            ev = 0
        # _boundary adds the iteration cost before comparing
        self._next_event = ev

    def request_stop(self) -> None:
        self._stop = True
        self._next_event = 0

    def run(self, limit: int, every: int = 0,
            on_progress: Optional[Callable[["_Search"], None]] = None) -> RhoResult:
        if self.result is not None:
            return self.result
        self._limit = limit
        self._every = every
        self._tick = on_progress if every > 0 else None
        self._next_tick = self.steps + every
        self._schedule()
        f = self.sys.step
        if not self._started:
            self._start(f)
            self._started = True
        self.result = self._resume(f, self.sys.equal)
        return self.result

    def snapshot(self, encode: Callable[[Any], Any] = lambda s: s) -> dict:
        return {
            "algorithm": self.name,
            "steps": self.steps,
            "phase": self.phase,
            "started": self._started,
            "ints": {k: getattr(self, k) for k in self._int_fields},
            "states": {k: (None if getattr(self, k) is None else encode(getattr(self, k)))
                       for k in self._state_fields},
        }

    @classmethod
    def restore(cls, system: IteratedSystem, snap: dict,
                decode: Callable[[Any], Any] = lambda s: s) -> "_Search":
        if snap["algorithm"] != cls.name:
            raise ValueError(f"snapshot is for {snap['algorithm']}, not {cls.name}")
        obj = cls(system)
        obj.steps = snap["steps"]
        obj.phase = snap["phase"]
        obj._started = snap["started"]
        for k, v in snap["ints"].items():
            setattr(obj, k, v)
        for k, v in snap["states"].items():
            setattr(obj, k, None if v is None else decode(v))
        return obj

    def _start(self, f):
        raise NotImplementedError

    def _resume(self, f, eq) -> RhoResult:
        raise NotImplementedError


class FloydSearch(_Search):
    """Tortoise and hare, in three phases:

    1. smallest ``m`` with ``X^(m) = X^(2m)``;
    2. smallest ``k`` with ``X^(k) = X^(k+m)``;
    3. smallest ``0 < c <= k`` with ``X^(m) = X^(m+c)``, else ``c = m``.
    """

    name = "floyd"
    _state_fields = ("t", "h", "anchor")
    _int_fields = ("m", "k", "c")

    def __init__(self, system):
        super().__init__(system)
        self.t = self.h = self.anchor = None
        self.m = self.k = self.c = 0

    def _start(self, f):
        self._boundary(1)
        self.t = self.sys.initial
        self.h = f(self.t)
        self.steps += 1
        self.m = 1

    def _resume(self, f, eq):
        if self.phase == 1:
            while not eq(self.t, self.h):
                self._boundary(3)
                self.t = f(self.t)
                self.h = f(f(self.h))
                self.steps += 3
                self.m += 1
            self.anchor = self.t
            self._boundary(1)
            self.t = self.sys.initial
            self.h = f(self.anchor)
            self.steps += 1
            self.k = 1
            self.phase = 2
        if self.phase == 2:
            while not eq(self.t, self.h):
                self._boundary(2)
                self.t = f(self.t)
                self.h = f(self.h)
                self.steps += 2
                self.k += 1
            self.h = self.anchor
            self.c = 0
            self.phase = 3
        if self.phase == 3:
            while self.c < self.k:
                self._boundary(1)
                self.h = f(self.h)
                self.steps += 1
                self.c += 1
                if eq(self.anchor, self.h):
                    break
            else:
                self.c = self.m
            self.phase = 4
        return RhoResult(self.k, self.c)


class BrentSearch(_Search):
    """Brent's power-of-two scheme: the cycle length first, then the entry."""

    name = "brent"
    _state_fields = ("t", "h")
    _int_fields = ("power", "lam", "k")

    def __init__(self, system):
        super().__init__(system)
        self.t = self.h = None
        self.power = self.lam = self.k = 0

    def _start(self, f):
        self._boundary(1)
        self.t = self.sys.initial
        self.h = f(self.t)
        self.steps += 1
        self.power = self.lam = 1

    def _resume(self, f, eq):
        if self.phase == 1:
            while not eq(self.t, self.h):
                self._boundary(1)
                if self.power == self.lam:
                    self.t = self.h
                    self.power *= 2
                    self.lam = 0
                self.h = f(self.h)
                self.steps += 1
                self.lam += 1
            self.t = self.h = self.sys.initial
            self.k = 0
            self.phase = 2
        if self.phase == 2:
            # hare leads the tortoise by exactly one cycle length
            while self.k < self.lam:
                self._boundary(1)
                self.h = f(self.h)
                self.steps += 1
                self.k += 1
            self.k = 1
            self.phase = 3
        if self.phase == 3:
            while not eq(self.t, self.h):
                self._boundary(2)
                self.t = f(self.t)
                self.h = f(self.h)
                self.steps += 2
                self.k += 1
            self.phase = 4
        return RhoResult(self.k, self.lam)


class GosperSearch(_Search):
    """Gosper's loop detector with a logarithmic table of earlier states.

    State ``X^(n)`` is stored in slot ``ctz(n)``; the first repeat gives a
    multiple of the cycle length, which is then refined by direct stepping.
    """

    name = "gosper"
    _state_fields = ("x", "t", "h")
    _int_fields = ("n", "lam", "k", "bound")

    def __init__(self, system):
        super().__init__(system)
        self.x = self.t = self.h = None
        self.table: list = []
        self.n = self.lam = self.k = self.bound = 0

    def snapshot(self, encode=lambda s: s):
        snap = super().snapshot(encode)
        snap["table"] = [[i, encode(s)] for i, s in self.table]
        return snap

    @classmethod
    def restore(cls, system, snap, decode=lambda s: s):
        obj = super().restore(system, snap, decode)
        obj.table = [(i, decode(s)) for i, s in snap["table"]]
        return obj

    def _start(self, f):
        self.x = self.sys.initial
        self.n = 1
        self.table = [(1, self.x)]

    def _resume(self, f, eq):
        if self.phase == 1:
            while True:
                self._boundary(1)
                self.x = f(self.x)
                self.steps += 1
                self.n += 1
                hit = next((i for i, s in self.table if eq(s, self.x)), None)
                if hit is not None:
                    self.bound = self.n - hit
                    break
                slot = (self.n & -self.n).bit_length() - 1
                if slot < len(self.table):
                    self.table[slot] = (self.n, self.x)
                else:
                    self.table.append((self.n, self.x))
            self.table = []
            self.h = self.x
            self.lam = 0
            self.phase = 2
        if self.phase == 2:
            while True:
                self._boundary(1)
                self.h = f(self.h)
                self.steps += 1
                self.lam += 1
                if eq(self.h, self.x) or self.lam >= self.bound:
                    break
            self.t = self.h = self.sys.initial
            self.k = 0
            self.phase = 3
        if self.phase == 3:
            while self.k < self.lam:
                self._boundary(1)
                self.h = f(self.h)
                self.steps += 1
                self.k += 1
            self.k = 1
            self.phase = 4
        if self.phase == 4:
            while not eq(self.t, self.h):
                self._boundary(2)
                self.t = f(self.t)
                self.h = f(self.h)
                self.steps += 2
                self.k += 1
            self.phase = 5
        return RhoResult(self.k, self.lam)


ALGORITHMS: dict[str, type[_Search]] = {
    "floyd": FloydSearch,
    "brent": BrentSearch,
    "gosper": GosperSearch,
}


def floyd(sys: IteratedSystem, limit: int) -> RhoResult:
    return FloydSearch(sys).run(limit)


def brent(sys: IteratedSystem, limit: int) -> RhoResult:
    return BrentSearch(sys).run(limit)


def gosper(sys: IteratedSystem, limit: int) -> RhoResult:
    return GosperSearch(sys).run(limit)


def find_rho(sys: IteratedSystem, algo: str = "floyd", limit: int = 10**7) -> RhoResult:
    try:
        cls = ALGORITHMS[algo]
    except KeyError:
        raise ValueError(f"unknown algorithm {algo!r}") from None
    return cls(sys).run(limit)


# --- B-terms over run-length canonical forms ------------------------------

def bterm_system(e: BTerm) -> IteratedSystem:
    x = RunLength.from_degrees(to_poly(e))
    blocks = x.blocks()

    def step(s: RunLength) -> RunLength:
        c = s._c.copy()
        rl_apply_blocks(c, blocks)
        return RunLength._wrap(c)

    return IteratedSystem(x, step)


def _encode_rl(s: RunLength):
    return list(s.counts)


def save_checkpoint(path: str | os.PathLike, search: _Search, seed: tuple[int, ...]) -> None:
    record = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "seed": list(seed),
        "search": search.snapshot(_encode_rl),
    }
    tmp = f"{os.fspath(path)}.tmp"
    with gzip.open(tmp, "wt", encoding="utf-8") as fh:
        json.dump(record, fh)
    os.replace(tmp, path)


def load_checkpoint(path: str | os.PathLike) -> dict:
    with gzip.open(path, "rt", encoding="utf-8") as fh:
        record = json.load(fh)
    if record.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"{path} is not a rho checkpoint")
    if record.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {record.get('version')}")
    return record


@dataclass
class RhoRun:
    """A resumable rho search over a B-term."""

    term: BTerm
    algo: str = "floyd"
    checkpoint: Optional[str] = None
    search: _Search = field(init=False)

    def __post_init__(self):
        self.seed = to_poly(self.term)
        self.system = bterm_system(self.term)
        self.search = ALGORITHMS[self.algo](self.system)

    @classmethod
    def resume(cls, term: BTerm, path: str, checkpoint: Optional[str] = None) -> "RhoRun":
        record = load_checkpoint(path)
        snap = record["search"]
        run = cls(term, snap["algorithm"], checkpoint or path)
        if tuple(record["seed"]) != run.seed:
            raise ValueError(
                f"checkpoint seed {record['seed']} does not match term {run.seed}")
        run.search = ALGORITHMS[snap["algorithm"]].restore(
            run.system, snap, lambda counts: RunLength(counts))
        return run

    def save(self) -> None:
        if self.checkpoint:
            save_checkpoint(self.checkpoint, self.search, self.seed)

    def run(self, limit: int, every: int = 0,
            on_progress: Optional[Callable[[_Search], None]] = None) -> RhoResult:
        def tick(search):
            self.save()
            if on_progress is not None:
                on_progress(search)

        try:
            return self.search.run(limit, every, tick if every else None)
        except (BudgetExceeded, Interrupted):
            self.save()
            raise


def rho_bterm(e: BTerm, algo: str = "floyd", limit: int = 10**7,
              checkpoint: Optional[str] = None, every: int = 0) -> RhoResult:
    """rho of a B-term, iterating its run-length canonical form."""
    return RhoRun(e, algo, checkpoint).run(limit, every)


# --- arbitrary combinators through the lambda oracle -----------------------

_COMB_TOKEN = re.compile(r"\s*(?:([A-Z])|(\()|(\)))")


def parse_combinator_term(text: str) -> lam.LambdaTerm:
    """Applicative expression over the combinator letters, e.g. ``"B B"``."""
    pos = 0
    text = text.strip()

    def expr():
        nonlocal pos
        head = None
        while pos < len(text):
            m = _COMB_TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"unexpected {text[pos:pos + 1]!r} at {pos}")
            if m.group(3):
                break
            pos = m.end()
            if m.group(1):
                x = lam.from_combinator(m.group(1))
            else:
                x = expr()
                m2 = _COMB_TOKEN.match(text, pos)
                if not m2 or not m2.group(3):
                    raise ValueError(f"expected ')' at {pos}")
                pos = m2.end()
            head = x if head is None else lam.App(head, x)
        if head is None:
            raise ValueError(f"empty term at {pos}")
        return head

    t = expr()
    if text[pos:].strip():
        raise ValueError(f"unbalanced ')' at {pos}")
    return t


def lambda_system(x: lam.LambdaTerm | str, fuel: int = lam.DEFAULT_FUEL) -> IteratedSystem:
    if isinstance(x, str):
        x = parse_combinator_term(x)
    x = lam.beta_eta_nf(x, fuel)
    return IteratedSystem(x, lambda s: lam.beta_eta_nf(lam.App(s, x), fuel), lam.alpha_eq)


def rho_lambda(x: lam.LambdaTerm | str, algo: str = "floyd", limit: int = 10**5,
               fuel: int = lam.DEFAULT_FUEL) -> RhoResult:
    """rho of any normalizing combinator, comparing beta-eta normal forms.

    Terms that grow forever under right application (``S``, ``O``) surface as
    :class:`BudgetExceeded` or :class:`lam.NonNormalizing`.
    """
    return find_rho(lambda_system(x, fuel), algo, limit)
