import gzip
import json

import pytest
from hypothesis import given, strategies as st

from bterms import cycle
from bterms.bterm import monomial, parse_bterm
from bterms.canon import RunLength
from bterms.cycle import IteratedSystem, RhoResult

ALGOS = sorted(cycle.ALGORITHMS)


def brute_rho(x0, f):
    seen, x, i = {}, x0, 1
    while x not in seen:
        seen[x] = i
        x, i = f(x), i + 1
    return RhoResult(seen[x], i - seen[x])


def functional_graph():
    return st.integers(1, 60).flatmap(
        lambda m: st.tuples(st.lists(st.integers(0, m - 1), min_size=m, max_size=m),
                            st.integers(0, m - 1)))


@pytest.mark.parametrize("algo", ALGOS)
@given(functional_graph())
def test_matches_brute_force(algo, g):
    table, x0 = g
    f = table.__getitem__
    assert cycle.find_rho(IteratedSystem(x0, f), algo) == brute_rho(x0, f)


@pytest.mark.parametrize("algo", ALGOS)
def test_minimality_by_replay(algo):
    for n in range(3):
        seed = RunLength.from_degrees((n,))
        k, c = cycle.rho_bterm(monomial(n), algo)
        states = [seed.copy()]
        step = cycle.bterm_system(monomial(n)).step
        while len(states) < k + c + 1:
            states.append(step(states[-1]))
        at = lambda i: states[i - 1]
        assert at(k) == at(k + c)
        if k > 1:
            assert at(k - 1) != at(k - 1 + c)
        assert all(at(k) != at(k + d) for d in range(1, c))


def test_first_state_convention():
    # x1 = 0 -> 1 -> 2 -> 1: entry 2, cycle 2
    assert cycle.floyd(IteratedSystem(0, [1, 2, 1].__getitem__), 100) == RhoResult(2, 2)
    # fixed point at the start
    assert cycle.brent(IteratedSystem(0, lambda x: 0), 100) == RhoResult(1, 1)


def test_result_text():
    r = RhoResult(6, 4)
    assert str(r) == "(6,4)" and tuple(r) == (6, 4)


@pytest.mark.parametrize("algo", ALGOS)
def test_budget(algo):
    with pytest.raises(cycle.BudgetExceeded):
        cycle.rho_bterm(monomial(3), algo, limit=100)


@pytest.mark.parametrize("algo", ALGOS)
def test_continue_after_budget(algo):
    s = cycle.ALGORITHMS[algo](cycle.bterm_system(monomial(2)))
    with pytest.raises(cycle.BudgetExceeded):
        s.run(50)
    assert tuple(s.run(10**6)) == (258, 36)


@pytest.mark.parametrize("algo", ALGOS)
def test_checkpoint_resume(tmp_path, algo):
    ck = str(tmp_path / f"{algo}.ckpt.gz")
    term = monomial(3)
    run = cycle.RhoRun(term, algo, ck)
    with pytest.raises(cycle.BudgetExceeded):
        run.run(3000)
    rec = json.loads(gzip.open(ck).read())
    assert rec["format"] == cycle.CHECKPOINT_FORMAT and rec["version"] == cycle.CHECKPOINT_VERSION
    again = cycle.RhoRun.resume(term, ck)
    assert again.search.steps == run.search.steps
    assert tuple(again.run(10**7)) == (4240, 5796)


def test_checkpoint_rejects_other_seed(tmp_path):
    ck = str(tmp_path / "x.ckpt.gz")
    run = cycle.RhoRun(monomial(2), "floyd", ck)
    with pytest.raises(cycle.BudgetExceeded):
        run.run(10)
    with pytest.raises(ValueError):
        cycle.RhoRun.resume(monomial(1), ck)


def test_checkpoint_rejects_future_version(tmp_path):
    ck = tmp_path / "x.ckpt.gz"
    ck.write_bytes(gzip.compress(json.dumps(
        {"format": cycle.CHECKPOINT_FORMAT, "version": 99, "seed": [0], "search": {}}).encode()))
    with pytest.raises(ValueError):
        cycle.load_checkpoint(ck)


def test_request_stop_and_progress(tmp_path):
    ck = str(tmp_path / "stop.ckpt.gz")
    run = cycle.RhoRun(monomial(3), "gosper", ck)
    ticks = []

    def progress(search):
        ticks.append(search.steps)
        if len(ticks) == 3:
            search.request_stop()

    with pytest.raises(cycle.Interrupted):
        run.run(10**7, every=500, on_progress=progress)
    assert len(ticks) == 3
    again = cycle.RhoRun.resume(monomial(3), ck)
    assert tuple(again.run(10**7)) == (4240, 5796)


@pytest.mark.parametrize("n,text", [(0, "B"), (1, "B B"), (2, "B (B B)")])
def test_bterm_and_lambda_routes_agree(n, text):
    assert cycle.rho_bterm(monomial(n)) == cycle.rho_lambda(text)


def test_parse_combinator_term():
    from bterms.lam import App, from_combinator
    assert cycle.parse_combinator_term("B (B B)") == App(
        from_combinator("B"), App(from_combinator("B"), from_combinator("B")))
    with pytest.raises(ValueError):
        cycle.parse_combinator_term("B (B")


def test_growing_combinator_hits_budget():
    with pytest.raises((cycle.BudgetExceeded,)):
        cycle.rho_lambda("S", limit=50)
