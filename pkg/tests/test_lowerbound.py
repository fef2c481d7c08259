import itertools
from fractions import Fraction

import pytest

from rdc.core import make_pairset
from rdc.cost import ratios
from rdc.greedy import Greedy, run
from rdc.lowerbound import (
    adversarial_subdomain,
    adversary_report,
    gen_general_lb,
    gen_learning_lb,
    log2_lower,
)
from rdc.oracle import brute_force_opt, check_consistency_aware, check_monotone, check_submodular


def test_learning_family_shape():
    fam = gen_learning_lb(10, 1, 8)
    inst = fam.instance
    assert inst.num_actions == 10 + 10 * 3
    assert ratios(inst.costs).sscr == 8
    assert ratios(gen_learning_lb(10, 2, 2).instance.costs).sscr == 1
    assert inst.costs(0, 0) == 0
    H = inst.hypotheses
    for i, j in itertools.combinations(range(len(H)), 2):
        assert any(H[i][x] != H[j][x] for x in range(inst.num_actions))


def test_learning_family_arguments():
    with pytest.raises(ValueError):
        gen_learning_lb(3, 1, 8)
    with pytest.raises(ValueError):
        gen_learning_lb(10, 8, 1)


@pytest.mark.parametrize("k,distinct", [(5, 4), (6, 4), (10, 8), (18, 16)])
def test_learning_b_action_codes(k, distinct):
    # k-1 locations written with ceil(log2(k-2)) bits: one collision when k-1 is
    # a power of two plus one, and more when bits run out entirely
    fam = gen_learning_lb(k, 1, 8)
    H = fam.instance.hypotheses
    for n in range(fam.k):
        codes = {tuple(H[i][x] for x in fam.b_actions[n]) for i in range(fam.k) if i != n}
        assert len(codes) == distinct


def test_learning_adversary_k10():
    fam = gen_learning_lb(10, 1, 8)
    rep = adversary_report(fam, "uf")
    assert rep.greedy_cost >= 8
    assert rep.greedy_worst >= 8
    # every answer costs c2 except the one free "1"; the worst location needs
    # one a-action plus all three b-actions
    assert rep.opt == 4


def test_general_family_k5():
    fam = gen_general_lb(4, 4, 1)
    assert fam.k == 5
    assert fam.params["c2"] == 4
    r = ratios(fam.instance.costs)
    assert (r.gsscr, r.crr, r.sscr) == (4, 4, 1)
    f = fam.instance.objective
    b1, a1 = fam.b_actions[0][0], fam.a_actions[0]
    assert f.value(make_pairset([(b1, 0)])) == f.Q
    assert f.value(make_pairset([(a1, 0)])) == 0


@pytest.mark.parametrize("g,r", [(1, 1), (2, 3), (3, 2), (Fraction(5, 2), 4), (6, 6)])
def test_general_family_ratios(g, r):
    fam = gen_general_lb(g, r, 1)
    cr = ratios(fam.instance.costs)
    assert cr.gsscr == g and cr.crr == r and cr.sscr == 1


def test_general_family_structure():
    fam = gen_general_lb(2, 2, 1)
    inst = fam.instance
    f = inst.objective
    assert fam.k == 3
    ground = [(x, y) for x in fam.a_actions + fam.b_actions[0] for y in (0, 1)]
    assert check_monotone(f, ground).passed
    assert check_submodular(f, ground).passed
    rep = check_consistency_aware(f, f.Q, inst.hypotheses, ground)
    # answering 0 on every a-action rules out all of H but leaves f at 0
    assert not rep.passed
    assert f.value(rep.witness["S"]) < f.Q
    assert f.value(make_pairset([(x, 0) for x in fam.a_actions])) == 0


def test_general_adversary_k5():
    fam = gen_general_lb(4, 4, 1)
    X_n, n, order = adversarial_subdomain(fam, Greedy(fam.instance, "uf").utility_fn())
    inst = fam.restricted(n)
    assert brute_force_opt(inst)[0] == 2
    assert run("uf", inst, n).total_cost >= 4
    rep = adversary_report(fam, "uf")
    assert rep.ratio >= 2 and rep.achieved


def test_constant_utility_gives_id_order():
    fam = gen_general_lb(3, 3, 1)
    X_n, n, order = adversarial_subdomain(fam, lambda x, S: Fraction(1))
    assert order == list(fam.a_actions)
    assert n == fam.k - 1
    assert X_n == sorted(fam.a_actions + fam.b_actions[n])


def test_log2_lower():
    assert log2_lower(Fraction(8)) <= 3
    assert log2_lower(Fraction(8)) > Fraction(2999, 1000)
