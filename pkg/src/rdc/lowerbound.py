"""Adversarial instance families showing that no local greedy rule beats the bounds.

Both families share a shape: a row of "a" actions that reveal one
hypothesis at a time, plus per-hypothesis "b" actions that are cheap for an
optimal policy but expensive for the true hypothesis.  The adversary feeds
the greedy utility the uninformative response on the a-actions, records
the order in which it would select them, and hides the true hypothesis at
the last position of that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .core import EMPTY, HypothesisClass, Instance, PairSet, add_pair
from .cost import CostModel, Extended, to_fraction
from .objective import Indicator, VersionSpaceReduction
from .oracle import ln_interval


@dataclass(frozen=True)
class LowerBoundFamily:
    """A full instance over the action superset plus the adversary's handles."""

    family: str
    instance: Instance
    k: int
    a_actions: tuple[int, ...]
    b_actions: tuple[tuple[int, ...], ...]
    adversarial_response: int
    params: dict

    def subdomain(self, n: int) -> list[int]:
        """Available actions when hypothesis ``n`` is hidden: every a-action plus n's b-actions."""
        return sorted(self.a_actions + self.b_actions[n])

    def restricted(self, n: int) -> Instance:
        return self.instance.restrict(self.subdomain(n))


def _bits_needed(k: int) -> int:
    return math.ceil(math.log2(k - 2))


def gen_learning_lb(k: int, c2, c3) -> LowerBoundFamily:
    """Version-space reduction family whose greedy cost grows with sscr.

    Responses ``1, 2, 3`` cost ``0, c2, c3`` on every action.  Hypothesis
    ``i`` answers 1 on ``a_i`` and 2 on the other a-actions; on ``b_j^t`` it
    answers 3 if ``i == j`` and otherwise encodes bit ``t`` of its position
    among the hypotheses other than ``j`` (1 for a zero bit, 2 for a one).
    Positions are written with ``ceil(log2(k-2))`` bits, most significant
    first; a position that needs one more bit keeps only its low bits.
    """
    c2, c3 = to_fraction(c2), to_fraction(c3)
    if k < 4:
        raise ValueError("k must be at least 4")
    if not 0 < c2 <= c3:
        raise ValueError("need 0 < c2 <= c3")
    T = _bits_needed(k)
    a = tuple(range(k))
    b = tuple(tuple(k + j * T + t for t in range(T)) for j in range(k))
    num_actions = k + k * T
    hyps = []
    for i in range(k):
        h = [0] * num_actions
        for j in range(k):
            h[a[j]] = 0 if i == j else 1
            if i == j:
                for t in range(T):
                    h[b[j][t]] = 2
                continue
            loc = i if i < j else i - 1
            for t in range(T):
                h[b[j][t]] = (loc >> (T - 1 - t)) & 1
        hyps.append(h)
    H = HypothesisClass.from_vectors(hyps, 3)
    costs = CostModel.from_rows([[0, c2, c3]] * num_actions)
    names = [f"a{i + 1}" for i in range(k)] + [
        f"b{j + 1}^{t + 1}" for j in range(k) for t in range(T)
    ]
    inst = Instance(H, costs, VersionSpaceReduction(H), tuple(names), ("1", "2", "3"))
    return LowerBoundFamily("learning", inst, k, a, b, 1, {"k": k, "c1": Fraction(0), "c2": c2, "c3": c3, "bits": T})


def gen_general_lb(g, r, c1=1, Q=1) -> LowerBoundFamily:
    """General consistency-aware family with gsscr ``g``, crr ``r`` and sscr 1.

    ``f`` jumps to ``Q`` once the history holds ``(a_i, 1)`` for some ``i`` or
    any response of any ``b_i``.
    """
    g, r, c1 = to_fraction(g), to_fraction(r), to_fraction(c1)
    if c1 <= 0:
        raise ValueError("c1 must be positive")
    if g < 1 or r < 1:
        raise ValueError("cost ratios are at least 1 by definition")
    c2 = c1 * min(g, r)
    if g < r:
        c3, c4 = c1 / r, c1
    else:
        c3 = c4 = c2 / g
    k = math.ceil(c2 / c1) + 1
    a = tuple(range(k))
    b = tuple((k + i,) for i in range(k))
    c = 2 * k
    num_actions = 2 * k + 1
    hyps = []
    for i in range(k):
        h = [0] * num_actions
        h[a[i]] = 1
        h[b[i][0]] = 1
        h[c] = (i + 1) % 2
        hyps.append(h)
    H = HypothesisClass.from_vectors(hyps, 2)
    rows = [[c1, c1]] * k + [[c1, c2]] * k + [[c3, c4]]
    triggers = [(x, 1) for x in a] + [(bb[0], y) for bb in b for y in (0, 1)]
    names = [f"a{i + 1}" for i in range(k)] + [f"b{i + 1}" for i in range(k)] + ["c"]
    inst = Instance(H, CostModel.from_rows(rows), Indicator(triggers, Q), tuple(names), ("0", "1"))
    params = {"g": g, "r": r, "c1": c1, "c2": c2, "c3": c3, "c4": c4, "k": k}
    return LowerBoundFamily("general", inst, k, a, b, 0, params)


def adversarial_subdomain(family: LowerBoundFamily, utility_fn: Callable[[int, PairSet], Extended]):
    """Order the a-actions as the utility would, answering each uninformatively.

    Returns ``(available_actions, h_star_index, order)`` where the hidden
    hypothesis is the one whose a-action the utility would pick last.
    Ties go to the smallest action id.
    """
    S: PairSet = EMPTY
    remaining = list(family.a_actions)
    order = []
    while remaining:
        best = None
        best_u = None
        for x in remaining:
            u = utility_fn(x, S)
            if best_u is None or u > best_u:
                best, best_u = x, u
        order.append(best)
        remaining.remove(best)
        if remaining:
            S = add_pair(S, (best, family.adversarial_response))
    n = family.a_actions.index(order[-1])
    return family.subdomain(n), n, order


def log2_lower(q: Fraction) -> Fraction:
    """Rational lower bound on ``log2(q)`` for ``q > 1``."""
    return ln_interval(Fraction(q))[0] / ln_interval(Fraction(2))[1]


@dataclass
class LowerBoundReport:
    family: str
    h_star: int
    order: list[int]
    subdomain: list[int]
    greedy_cost: Fraction
    greedy_worst: Fraction
    opt: Extended
    greedy_floor: Fraction
    opt_ceiling: Fraction
    ratio_target: Fraction
    ratios: dict

    @property
    def ratio(self) -> Extended:
        if self.opt == 0:
            return math.inf
        return self.greedy_worst / self.opt

    @property
    def achieved(self) -> bool:
        return self.ratio >= self.ratio_target

    def as_dict(self, instance: Instance) -> dict:
        from .cost import fraction_str

        return {
            "family": self.family,
            "h_star": self.h_star,
            "order": [instance.action_name(x) for x in self.order],
            "subdomain": [instance.action_name(x) for x in self.subdomain],
            "greedy_cost_h_star": fraction_str(self.greedy_cost),
            "greedy_worst_case": fraction_str(self.greedy_worst),
            "opt": fraction_str(self.opt),
            "greedy_floor": fraction_str(self.greedy_floor),
            "opt_ceiling": fraction_str(self.opt_ceiling),
            "achieved_ratio": fraction_str(self.ratio),
            "target_ratio_at_least": f"{float(self.ratio_target):.6g}",
            "achieved": self.achieved,
            "ratios": self.ratios,
        }


def adversary_report(family: LowerBoundFamily, variant="uf") -> LowerBoundReport:
    """Run the adversary against a greedy variant and measure the achieved ratio."""
    from .cost import ratios
    from .greedy import Greedy, worst_case_cost
    from .oracle import brute_force_opt

    full = Greedy(family.instance, variant)
    X_n, n, order = adversarial_subdomain(family, full.utility_fn())
    inst = family.instance.restrict(X_n)
    trace = Greedy(inst, variant).run(n)
    worst, _, _ = worst_case_cost(variant, inst)
    opt, _ = brute_force_opt(inst, max_actions=len(X_n), max_hypotheses=len(inst.hypotheses))
    r = ratios(inst.costs)
    p = family.params
    k = family.k
    if family.family == "learning":
        floor = min(p["c3"], p["c2"] * (k - 1))
        ceiling = p["c2"] * p["bits"]
        f = inst.objective
        q = f.Q / f.eta
        target = min(r.sscr, q) / log2_lower(q)
    else:
        floor = min(p["c2"], p["c1"] * (k - 1))
        ceiling = 2 * p["c1"]
        target = min(r.gsscr, r.crr) / 2
    return LowerBoundReport(
        family.family, n, order, X_n, trace.total_cost, worst, opt,
        floor, ceiling, target, r.as_dict(),
    )
