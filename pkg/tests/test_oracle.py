import math
from dataclasses import replace
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from rdc.core import EMPTY, HypothesisClass, Instance, make_pairset, version_space
from rdc.cost import INF, CostModel, ratios
from rdc.greedy import worst_case_cost
from rdc.objective import Custom, EdgeUsersFamily, FBar, StructureDisqualification, VersionSpaceReduction
from rdc.graph import Graph
from rdc.oracle import (
    GroundSetTooLarge,
    InstanceTooLarge,
    bound_factor,
    brute_force_opt,
    check_all,
    check_consistency_aware,
    check_gap,
    check_learning_objective,
    check_monotone,
    check_submodular,
    ln_interval,
    replay,
    replay_worst,
    verify_bound,
)
from rdc.randgen import random_fbar_instance, random_learning_instance

from conftest import A, B, R1, R2

mpmath.mp.prec = 200


def naive_opt(inst, S=EMPTY):
    """Plain minimax recursion over untried actions, no memo, no pruning."""
    f, H, cm = inst.objective, inst.hypotheses, inst.costs
    if f.value(S) >= f.Q:
        return Fraction(0)
    vs = version_space(H, S)
    used = {x for x, _ in S}
    best = math.inf
    for x in inst.actions:
        if x in used:
            continue
        worst = max(cm(x, y) + naive_opt(inst, make_pairset(S + ((x, y),)))
                    for y in {H[i][x] for i in vs})
        best = min(best, worst)
    return best


def test_core_opt(three_h_instance):
    opt, tree = brute_force_opt(three_h_instance)
    assert opt == 2
    assert tree.action == A
    assert tree.children[R1].action == B
    assert tree.children[R2].is_terminal
    assert tree.worst_cost == opt
    assert replay(tree, three_h_instance, 2)[:2] == (1, True)


def test_opt_infinite():
    H = HypothesisClass.from_vectors([(0,), (1,)], 2)
    f = Custom([(0, 0), (0, 1)], {(): 0, ((0, 0),): 0, ((0, 1),): 1, ((0, 0), (0, 1)): 1}, 1, 1)
    assert brute_force_opt(Instance(H, CostModel.uniform(1, 2), f)) == (INF, None)


def test_size_limits(three_h_instance):
    with pytest.raises(InstanceTooLarge):
        brute_force_opt(three_h_instance, max_actions=1)
    f = Custom.from_function([(0, 0)], lambda S: len(S), 1, 1)
    with pytest.raises(GroundSetTooLarge):
        check_monotone(f, [(i, 0) for i in range(13)])


def test_vs_memo_needs_learning_objective():
    inst = random_fbar_instance(1)
    with pytest.raises(ValueError):
        brute_force_opt(inst, memo="vs")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000), st.booleans())
def test_opt_matches_naive(seed, learning):
    inst = (random_learning_instance if learning else random_fbar_instance)(seed, max_actions=4)
    opt, tree = brute_force_opt(inst, memo="pairs")
    assert opt == naive_opt(inst)
    if learning:
        assert brute_force_opt(inst, memo="vs")[0] == opt
    if tree is not None:
        assert tree.worst_cost == opt
        cost, reached = replay_worst(tree, inst)
        assert reached and cost <= opt


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(0, 4), st.integers(0, 2))
def test_opt_monotone_in_costs(seed, x, y):
    inst = random_learning_instance(seed)
    if x >= inst.num_actions or y >= inst.num_responses:
        return
    rows = [list(r) for r in inst.costs.table]
    if rows[x][y] == 0:
        return
    rows[x][y] -= 1
    cheaper = replace(inst, costs=CostModel.from_rows(rows))
    assert brute_force_opt(cheaper)[0] <= brute_force_opt(inst)[0]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_opt_monotone_in_q(seed):
    inst = random_fbar_instance(seed, max_Q=4)
    f = inst.objective
    if f.Q <= 1:
        return
    lower = replace(inst, objective=FBar(inst.hypotheses, f.family, f.Q - 1))
    assert brute_force_opt(lower)[0] <= brute_force_opt(inst)[0]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_greedy_at_least_opt(seed):
    inst = random_learning_instance(seed)
    assert worst_case_cost("uf", inst)[0] >= brute_force_opt(inst)[0]


# -- structural checkers ---------------------------------------------------------

def _violating_custom():
    # z=(0,1) gains 0 alone but 1 on top of (0,0)
    g = [(0, 0), (0, 1)]
    return Custom(g, {(): 0, ((0, 0),): 1, ((0, 1),): 0, ((0, 0), (0, 1)): 2}, 2, 1)


def test_submodular_witness():
    rep = check_submodular(_violating_custom(), [(0, 0), (0, 1)])
    assert not rep.passed
    assert rep.witness["z"] == (0, 1)
    assert rep.witness["A"] == () and rep.witness["B"] == ((0, 0),)
    assert check_monotone(_violating_custom(), [(0, 0), (0, 1)]).passed


def test_monotone_witness():
    g = [(0, 0)]
    rep = check_monotone(Custom(g, {(): 0, ((0, 0),): 0}, 1, 1), g)
    assert rep.passed
    f = Custom([(0, 0), (1, 0)], {(): 0, ((0, 0),): 2, ((1, 0),): 1, ((0, 0), (1, 0)): 1}, 2, 1)
    rep = check_monotone(f, f.ground)
    assert not rep.passed and rep.witness["B"] == ((0, 0), (1, 0))


def test_consistency_aware_examples(three_h):
    g = [(A, R1), (A, R2), (B, R1), (B, R2)]
    assert check_consistency_aware(VersionSpaceReduction(three_h), Fraction(2, 3), three_h, g).passed
    f = Custom.from_function(g, lambda S: 0, 1, 1)
    rep = check_consistency_aware(f, 1, three_h, g)
    assert not rep.passed
    assert version_space(three_h, rep.witness["S"]) == frozenset()


def test_learning_objective_examples(three_h):
    g = [(A, R1), (A, R2), (B, R1), (B, R2)]
    assert check_learning_objective(VersionSpaceReduction(three_h), three_h, g).passed
    assert check_learning_objective(StructureDisqualification(three_h, [[0, 1], [1, 2], [0, 2]]), three_h, g).passed
    assert check_submodular(VersionSpaceReduction(three_h), g).passed
    assert check_monotone(VersionSpaceReduction(three_h), g).passed


def test_edge_users_is_not_learning_objective():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    labs = [(0, 0, 1), (0, 1, 1)]
    H = HypothesisClass.from_vectors(labs, 2)
    f = FBar(H, EdgeUsersFamily(g, labs), 1)
    ground = [(x, y) for x in range(3) for y in range(2)]
    rep = check_learning_objective(f, H, ground)
    assert not rep.passed
    S, S2 = rep.witness["S"], rep.witness["S'"]
    assert version_space(H, S) == version_space(H, S2)
    assert f.value(S) != f.value(S2)
    for r in check_all(Instance(H, CostModel.uniform(3, 2), f))[:3]:
        assert r.passed, r.line()


def test_gap_strict(three_h):
    # vs-reduction reaches exactly Q - eta = 1/3, which the strict reading allows
    g = [(A, R1), (A, R2), (B, R1), (B, R2)]
    assert check_gap(VersionSpaceReduction(three_h), g).passed
    f = Custom([(0, 0)], {(): 0, ((0, 0),): Fraction(3, 4)}, 1, Fraction(1, 3))
    assert not check_gap(f, [(0, 0)]).passed


# -- logarithm and bound verifier ------------------------------------------------

@given(st.fractions(min_value=Fraction(1, 1000), max_value=10**6).filter(lambda q: q > 0))
def test_ln_interval_encloses(x):
    lo, hi = ln_interval(x)
    exact = mpmath.log(mpmath.mpf(x.numerator) / x.denominator)
    assert mpmath.mpf(lo.numerator) / lo.denominator <= exact <= mpmath.mpf(hi.numerator) / hi.denominator
    assert hi - lo < Fraction(1, 10**18)


def test_ln_interval_exact_points():
    assert ln_interval(Fraction(1)) == (0, 0)
    lo, hi = ln_interval(Fraction(2))
    assert lo < Fraction(math.log(2)) + Fraction(1, 10**12) and hi > Fraction(math.log(2)) - Fraction(1, 10**12)


def test_verify_bound_core_example(three_h_instance):
    r = ratios(three_h_instance.costs)
    rep = verify_bound("learning", 2, 2, r, Fraction(2, 3), Fraction(1, 3))
    assert rep.passed
    factor = bound_factor("learning", r, Fraction(2, 3), Fraction(1, 3))
    assert abs(float(factor) * 2 - 2 * (math.log(2) + 1)) < 1e-12
    assert not verify_bound("learning", 4, 1, r, Fraction(2, 3), Fraction(1, 3)).passed


@given(st.fractions(min_value=0, max_value=50), st.integers(1, 20), st.integers(1, 20))
def test_verify_bound_greedy_equals_opt(opt, q, e):
    r = ratios(CostModel.from_rows([[1, 2, 3]]))
    for kind in ("learning", "general", "crr_trivial"):
        assert verify_bound(kind, opt, opt, r, Fraction(q), Fraction(1, e)).passed


def test_crr_trivial_vacuous():
    r = ratios(CostModel.from_rows([[0, 1], [1, 0]]))
    assert r.crr == INF
    assert bound_factor("crr_trivial", r, 3, 1) == INF
    assert verify_bound("crr_trivial", 10**9, 1, r, 3, 1).passed
    assert verify_bound("crr_trivial", 10**9, 0, r, 3, 1).passed
    with pytest.raises(ValueError):
        verify_bound("learning", 1, INF, r, 3, 1)
