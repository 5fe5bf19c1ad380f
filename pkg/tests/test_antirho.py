import itertools
import random

import pytest
from hypothesis import given

from bterms import antirho
from bterms.antirho import (TreeMeasures, b2_expected, measures, predict_apply_measures,
                            tree_apply, triangular)
from bterms.bterm import BApp, flat_power, parse_bterm, to_poly, tree_of
from bterms.canon import apply
from bterms.lam import parse_tree

from conftest import bterms


def test_measures_of_b():
    m = measures(parse_tree("<*,<*,*>>"))
    assert m == TreeMeasures(3, 1, parse_tree("<*,*>"))


def test_measures_of_leaf_spine():
    m = measures(parse_tree("<<<*,*>,*>,*>"))
    assert (m.l, m.a) == (4, 3)


@given(bterms(5), bterms(5))
def test_tree_apply_is_application(e1, e2):
    assert tree_apply(tree_of(e1), tree_of(e2)) == tree_of(BApp(e1, e2))


@given(bterms(5), bterms(5))
def test_prediction_is_exact(e1, e2):
    assert predict_apply_measures(tree_of(e1), tree_of(e2)) == measures(tree_of(BApp(e1, e2)))


def test_triangular():
    assert [triangular(m) for m in range(5)] == [0, 1, 3, 6, 10]


def test_b2_small_powers():
    x = (0, 0)
    assert b2_expected(1, 0) == x
    assert b2_expected(1, 1) == apply(x, x) == (2, 2)


@pytest.mark.parametrize("m", range(1, 9))
def test_b2_expected_against_iteration(m):
    for j in range(m + 1):
        e2 = flat_power(parse_bterm("B . B"), triangular(m) + j)
        assert b2_expected(m, j) == to_poly(e2)


@pytest.mark.parametrize("k,m,l", [(k, m, l) for m in range(1, 9) for k in range(1, m + 1)
                                   for l in (1, 3, 8)])
def test_b2_slope_identity(k, m, l):
    assert antirho.b2_slope_lhs(k, m, l) == antirho.b2_slope_rhs(k, m, l)


def test_b2_report():
    r = antirho.verify_b2_growth(10)
    assert r.ok and r.steps == triangular(10) + 10
    assert r.to_dict()["ok"] is True
    with pytest.raises(ValueError):
        antirho.verify_b2_growth(0)


def test_tkn_seed_is_member():
    for k, n in itertools.product(range(3), (1, 2)):
        seed = antirho.tkn_seed(k, n)
        assert antirho.tkn_member(seed, k, n)
        assert to_poly(antirho.tkn_seed_term(k, n)) == (k,) * ((k + 2) * n)


def test_tkn_rejects_outsiders():
    assert not antirho.tkn_member(parse_tree("<*,<*,*>>"), 0, 1)
    assert not antirho.tkn_member(parse_tree("*"), 1, 1)


def test_generated_members_belong():
    w = antirho.tkn_witness(1, 1)
    ex, stream = w.members(3, 200, random.Random(1))
    trees = list(stream)
    assert len(trees) >= 200 and all(w.membership(t) for t in trees)


def test_claimed_arity_set_is_checked():
    w = antirho.tkn_witness(0, 1)
    narrowed = antirho.ClosureWitness(**{**w.__dict__, "arities": frozenset({1})})
    r = antirho.verify_closure(narrowed, iterations=10, samples=50)
    assert not r.ok and any("claimed set" in f for f in r.failures)


def test_wrong_seed_is_caught():
    w = antirho.tkn_witness(1, 1)
    r = antirho.verify_closure(w, seed=parse_bterm("B B"), iterations=5, samples=10)
    assert not r.ok


@pytest.mark.parametrize("which", ["ex1", "ex2"])
def test_example_witness_seed_leaves(which):
    w = antirho.example_witness(which)
    assert tree_of(w.seed).size == 8
    with pytest.raises(ValueError):
        antirho.example_witness("ex3")


def test_closure_report_dict():
    r = antirho.verify_closure(antirho.tkn_witness(0, 1), iterations=20, samples=50)
    d = r.to_dict()
    assert d["ok"] and d["l_seed"] == r.seed_leaves and d["observed_arities"]
