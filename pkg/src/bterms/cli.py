"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 step budget exhausted (or search
interrupted with a checkpoint written), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import signal
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from . import altrep, antirho, canon, cycle, lam
from .bterm import (equiv, format_degrees, is_decreasing, monomial, nodes, parse_bterm,
                    parse_degrees, to_poly)

REPORT_VERSION = 1
DEFAULT_MAX_STEPS = 10**7
CHECKPOINT_DIR_ENV = "BTERMS_CHECKPOINT_DIR"

EXIT_OK, EXIT_DOMAIN, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 64

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["version", "command", "args", "status", "result", "counters", "warnings"],
    "properties": {
        "version": {"const": REPORT_VERSION},
        "command": {"type": "string"},
        "args": {"type": "object"},
        "status": {"enum": ["ok", "domain-error", "budget-exceeded", "interrupted"]},
        "result": {},
        "counters": {
            "type": "object",
            "properties": {
                "steps": {"type": "integer", "minimum": 0},
                "elapsed_s": {"type": "number", "minimum": 0},
            },
            "required": ["elapsed_s"],
        },
        "warnings": {"type": "array", "items": {"type": "string"}},
        "error": {"type": "string"},
    },
}


@dataclass
class Report:
    command: str
    args: dict
    result: Any = None
    text: str = ""
    status: str = "ok"
    steps: Optional[int] = None
    elapsed: float = 0.0
    warnings: list[str] = field(default_factory=list)
    error: Optional[str] = None

    def to_json(self) -> dict:
        counters: dict = {"elapsed_s": round(self.elapsed, 6)}
        if self.steps is not None:
            counters["steps"] = self.steps
        out = {
            "version": REPORT_VERSION,
            "command": self.command,
            "args": self.args,
            "status": self.status,
            "result": self.result,
            "counters": counters,
            "warnings": self.warnings,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _term_or_degrees(text: str) -> tuple[int, ...]:
    s = text.strip()
    if s.startswith("["):
        d = parse_degrees(s)
        if not is_decreasing(d):
            raise ValueError(f"{s} is not weakly decreasing")
        return d
    return to_poly(parse_bterm(s))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bterms", description="B-term canonical forms and the rho property")
    p.add_argument("--format", choices=["text", "json"], default="text")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def search_flags(sp, lam_mode=False):
        sp.add_argument("--algo", choices=sorted(cycle.ALGORITHMS), default="floyd")
        sp.add_argument("--max-steps", type=int,
                        default=10**5 if lam_mode else DEFAULT_MAX_STEPS)

    sp = sub.add_parser("rho", help="rho of a B-term via canonical forms")
    sp.add_argument("term")
    search_flags(sp)
    sp.add_argument("--unbounded", action="store_true",
                    help="no step budget (needed for B^5 B or B^6 B scale runs)")
    sp.add_argument("--checkpoint", metavar="FILE")
    sp.add_argument("--resume", metavar="FILE")
    sp.add_argument("--report-every", type=int, default=0, metavar="N",
                    help="checkpoint and report progress every N steps")

    sp = sub.add_parser("rho-lambda", help="rho of a combinator via beta-eta normal forms")
    sp.add_argument("term", help="combinator expression such as 'K' or 'B B'")
    search_flags(sp, lam_mode=True)
    sp.add_argument("--fuel", type=int, default=lam.DEFAULT_FUEL)

    sp = sub.add_parser("canon", help="decreasing polynomial of a B-term")
    sp.add_argument("term")

    sp = sub.add_parser("eq", help="decide equivalence of two B-terms")
    sp.add_argument("a")
    sp.add_argument("b")

    sp = sub.add_parser("apply", help="canonical form of an application")
    sp.add_argument("p1", help="degree list [..] or B-term")
    sp.add_argument("p2")

    sp = sub.add_parser("nodes", help="nodes labeling of a binary tree")
    sp.add_argument("tree", help="tree text, e.g. '<<*,*>,<*,*>>'")

    sp = sub.add_parser("forest", help="binary forest of a polynomial")
    sp.add_argument("poly", help="degree list [..] or B-term")

    sp = sub.add_parser("binseq", help="binary-word representation")
    bs = sp.add_subparsers(dest="bs_command", parser_class=_Parser)
    x = bs.add_parser("apply")
    x.add_argument("x")
    x.add_argument("y")
    x = bs.add_parser("to-poly")
    x.add_argument("x")
    x = bs.add_parser("from-poly")
    x.add_argument("poly")

    sp = sub.add_parser("restricted", help="first repeat under bare B^k rewriting")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--limit", type=int, default=100_000)

    sp = sub.add_parser("antirho", help="anti-rho evidence")
    ar = sp.add_subparsers(dest="ar_command", parser_class=_Parser)
    x = ar.add_parser("b2")
    x.add_argument("--m-max", type=int, default=30)
    x = ar.add_parser("tkn")
    x.add_argument("--k", type=int, required=True)
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--iters", type=int, default=100)
    x.add_argument("--depth", type=int, default=4)
    x.add_argument("--samples", type=int, default=500)
    x.add_argument("--seed", type=int, default=0)
    x = ar.add_parser("witness")
    x.add_argument("which", choices=["ex1", "ex2"])
    x.add_argument("--iters", type=int, default=100)
    x.add_argument("--depth", type=int, default=4)
    x.add_argument("--samples", type=int, default=500)
    x.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("bench", help="timing workloads")
    sp.add_argument("workload", help="rho-b0 ... rho-b6, or apply-stress")
    sp.add_argument("--repetitions", type=int, default=1)
    sp.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    sp.add_argument("--unbounded", action="store_true")
    return p


# --- handlers -----------------------------------------------------------------

def _default_checkpoint(seed, algo):
    d = os.environ.get(CHECKPOINT_DIR_ENV)
    if not d:
        return None
    return os.path.join(d, f"rho-{'-'.join(map(str, seed))}-{algo}.ckpt.gz")


def _cmd_rho(a, rep: Report):
    term = parse_bterm(a.term)
    if a.resume:
        run = cycle.RhoRun.resume(term, a.resume, a.checkpoint)
    else:
        run = cycle.RhoRun(term, a.algo, a.checkpoint)
        if run.checkpoint is None:
            run.checkpoint = _default_checkpoint(run.seed, a.algo)
    limit = sys.maxsize if a.unbounded else a.max_steps

    def progress(search):
        print(f"[{search.name}] phase {search.phase}, {search.steps} steps",
              file=a.err, flush=True)

    handlers = {}

    def stop(signum, frame):
        run.search.request_stop()

    for sig in (signal.SIGINT, signal.SIGTERM):
        try:
            handlers[sig] = signal.signal(sig, stop)
        except ValueError:  # not in the main thread
            pass
    try:
        res = run.run(limit, a.report_every, progress if a.report_every else None)
    finally:
        rep.steps = run.search.steps
        for sig, h in handlers.items():
            signal.signal(sig, h)
    rep.result = {"entry": res.entry, "cycle": res.cycle, "algorithm": run.search.name,
                  "seed": list(run.seed)}
    rep.text = f"rho = {res}"


def _cmd_rho_lambda(a, rep):
    system = cycle.lambda_system(a.term, a.fuel)
    search = cycle.ALGORITHMS[a.algo](system)
    try:
        res = search.run(a.max_steps)
    finally:
        rep.steps = search.steps
    rep.result = {"entry": res.entry, "cycle": res.cycle, "algorithm": a.algo}
    rep.text = f"rho = {res}"


def _cmd_canon(a, rep):
    d = to_poly(parse_bterm(a.term))
    rep.result = {"degrees": list(d), "run_length": str(canon.RunLength.from_degrees(d))}
    rep.text = format_degrees(d)


def _cmd_eq(a, rep):
    r = equiv(parse_bterm(a.a), parse_bterm(a.b))
    rep.result = r
    rep.text = "true" if r else "false"


def _cmd_apply(a, rep):
    d = canon.apply(_term_or_degrees(a.p1), _term_or_degrees(a.p2))
    rep.result = list(d)
    rep.text = format_degrees(d)


def _cmd_nodes(a, rep):
    d = nodes(lam.parse_tree(a.tree))
    if not d:
        rep.warnings.append("empty labeling: not the tree of a B-term")
    rep.result = list(d)
    rep.text = format_degrees(d)


def _cmd_forest(a, rep):
    f = canon.to_forest(_term_or_degrees(a.poly))
    rep.result = str(f)
    rep.text = str(f)


def _cmd_binseq(a, rep):
    if a.bs_command == "apply":
        w = altrep.bs_apply(altrep.check_word(a.x), altrep.check_word(a.y))
        rep.result, rep.text = w, w or "(empty)"
    elif a.bs_command == "to-poly":
        d = altrep.f_to_poly(a.x)
        rep.result, rep.text = list(d), format_degrees(d)
    elif a.bs_command == "from-poly":
        w = altrep.f_inv(_term_or_degrees(a.poly))
        rep.result, rep.text = w, w or "(empty)"
    else:
        raise UsageError("binseq needs one of: apply, to-poly, from-poly")


def _cmd_restricted(a, rep):
    i, j = altrep.restricted_rho(a.n, a.limit)
    rep.result = {"i": i, "j": j}
    rep.text = f"(B^{a.n} B)^({i}) = (B^{a.n} B)^({j})"


def _closure_text(r):
    lines = [f"{r.witness}: {'PASS' if r.ok else 'FAIL'}",
             f"  l(X) = {r.seed_leaves}, a(X') observed {sorted(r.observed_arities)}, "
             f"min margin {r.min_margin}",
             f"  {r.iterations} iterates, {r.samples} samples to depth {r.depth} "
             f"(exhaustive to depth {r.exhaustive_depth})",
             f"  l non-decreasing on the prefix: {r.monotone_prefix}"]
    lines += [f"  ! {f}" for f in r.failures[:20]]
    return "\n".join(lines)


def _cmd_antirho(a, rep):
    if a.ar_command == "b2":
        r = antirho.verify_b2_growth(a.m_max)
        rep.result = r.to_dict()
        rep.steps = r.steps
        rep.text = (f"B^2 growth law up to m = {a.m_max}: {'PASS' if r.ok else 'FAIL'}; "
                    f"lengths at t_m: {r.lengths_at_tm[:8]}{'...' if a.m_max > 8 else ''}")
        ok = r.ok
    elif a.ar_command in ("tkn", "witness"):
        if a.ar_command == "tkn":
            if a.k < 0 or a.n < 1:
                raise ValueError("need k >= 0 and n >= 1")
            w = antirho.tkn_witness(a.k, a.n)
        else:
            w = antirho.example_witness(a.which)
        r = antirho.verify_closure(w, iterations=a.iters, samples=a.samples,
                                   depth=a.depth, rng_seed=a.seed)
        rep.result = r.to_dict()
        rep.text = _closure_text(r)
        ok = r.ok
    else:
        raise UsageError("antirho needs one of: b2, tkn, witness")
    if not ok:
        rep.status = "domain-error"


def _cmd_bench(a, rep):
    runs = []
    if a.workload.startswith("rho-b"):
        try:
            n = int(a.workload[5:])
        except ValueError:
            raise UsageError(f"unknown workload {a.workload!r}") from None
        if not 0 <= n <= 6:
            raise UsageError("rho-bN workloads need 0 <= N <= 6")
        limit = sys.maxsize if a.unbounded else a.max_steps
        for _ in range(a.repetitions):
            system = cycle.bterm_system(monomial(n))
            inner = system.step
            peak = {"length": 0, "degree": 0}

            def step(s, inner=inner, peak=peak):
                s = inner(s)
                c = s._c
                if len(c) - 1 > peak["degree"]:
                    peak["degree"] = len(c) - 1
                ln = sum(c)
                if ln > peak["length"]:
                    peak["length"] = ln
                return s

            system.step = step
            search = cycle.FloydSearch(system)
            t0 = time.perf_counter()
            try:
                res = search.run(limit)
            finally:
                rep.steps = search.steps
            runs.append({"entry": res.entry, "cycle": res.cycle, "steps": search.steps,
                         "wall_s": time.perf_counter() - t0,
                         "max_length": peak["length"], "max_degree": peak["degree"]})
        rep.text = (f"rho(B^{n} B) = ({runs[0]['entry']},{runs[0]['cycle']}); "
                    + ", ".join(f"{r['wall_s']:.3f}s" for r in runs))
    elif a.workload == "apply-stress":
        rng = random.Random(0)
        for _ in range(a.repetitions):
            t0 = time.perf_counter()
            count = 0
            for _ in range(200):
                p1 = tuple(sorted((rng.randrange(50) for _ in range(rng.randint(1, 1000))),
                                  reverse=True))
                p2 = tuple(sorted((rng.randrange(50) for _ in range(rng.randint(1, 1000))),
                                  reverse=True))
                r1 = canon.rl_apply(canon.RunLength.from_degrees(p1),
                                    canon.RunLength.from_degrees(p2))
                if not is_decreasing(r1.to_degrees()):
                    raise AssertionError("apply produced a non-decreasing list")
                count += 1
            runs.append({"applications": count, "wall_s": time.perf_counter() - t0})
        rep.text = "apply-stress: " + ", ".join(f"{r['wall_s']:.3f}s" for r in runs)
    else:
        raise UsageError(f"unknown workload {a.workload!r}")
    rep.result = {"workload": a.workload, "runs": runs}


HANDLERS = {
    "rho": _cmd_rho,
    "rho-lambda": _cmd_rho_lambda,
    "canon": _cmd_canon,
    "eq": _cmd_eq,
    "apply": _cmd_apply,
    "nodes": _cmd_nodes,
    "forest": _cmd_forest,
    "binseq": _cmd_binseq,
    "restricted": _cmd_restricted,
    "antirho": _cmd_antirho,
    "bench": _cmd_bench,
}


def run(argv: list[str], stdout=None, stderr=None) -> tuple[int, Optional[Report]]:
    """Execute one command; writes its output and returns ``(exit code, report)``."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if a.command is None:
            raise UsageError(parser.format_help())
    except UsageError as exc:
        print(str(exc), file=stderr, end="" if str(exc).endswith("\n") else "\n")
        return EXIT_USAGE, None
    args = {k: v for k, v in vars(a).items() if k not in ("format",)}
    rep = Report(a.command, args)
    a.err = stderr
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        HANDLERS[a.command](a, rep)
        if rep.status != "ok":
            code = EXIT_DOMAIN
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE, None
    except cycle.Interrupted as exc:
        rep.status, rep.error, code = "interrupted", str(exc), EXIT_BUDGET
    except cycle.BudgetExceeded as exc:
        rep.status, rep.error, code = "budget-exceeded", str(exc), EXIT_BUDGET
    except (ValueError, lam.NonNormalizing, OverflowError) as exc:
        rep.status, rep.error, code = "domain-error", str(exc), EXIT_DOMAIN
    rep.elapsed = time.perf_counter() - t0
    if a.format == "json":
        print(json.dumps(rep.to_json()), file=stdout)
    elif rep.error is not None:
        if rep.text:
            print(rep.text, file=stdout)
        print(f"error: {rep.error}", file=stderr)
    else:
        print(rep.text, file=stdout)
        for w in rep.warnings:
            print(f"warning: {w}", file=stderr)
    return code, rep


def main(argv: Optional[list[str]] = None) -> int:
    code, _ = run(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
