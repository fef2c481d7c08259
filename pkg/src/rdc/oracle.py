"""Ground truth at desk scale.

* :func:`brute_force_opt` finds the optimal worst-case cost of any adaptive
  policy and returns it with a policy tree that attains it.
* The ``check_*`` functions verify structural properties of an objective by
  exhaustive enumeration over a small ground set of pairs.
* :func:`verify_bound` compares a greedy cost to the approximation bounds,
  using a rational upper bound on the natural log so the comparison is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional

from .core import EMPTY, HypothesisClass, Instance, PairSet, actions_of, add_pair, make_pairset
from .cost import INF, CostRatios, Extended, fraction_str, to_fraction
from .objective import Objective


class InstanceTooLarge(ValueError):
    pass


class GroundSetTooLarge(ValueError):
    pass


@dataclass
class CheckReport:
    name: str
    passed: bool
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  witness={self.witness}" if self.witness else ""
        return f"[{status}] {self.name}{extra}"


# -- optimal policy search -----------------------------------------------------


@dataclass
class PolicyTree:
    """A node of an adaptive policy; ``action is None`` marks a terminal node."""

    action: Optional[int]
    worst_cost: Extended
    children: dict[int, "PolicyTree"] = field(default_factory=dict)

    @property
    def is_terminal(self) -> bool:
        return self.action is None

    def depth(self) -> int:
        return 0 if self.is_terminal else 1 + max(c.depth() for c in self.children.values())

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children.values())

    def to_dict(self, instance: Optional[Instance] = None) -> dict:
        if self.is_terminal:
            return {"terminal": True}
        name = instance.action_name(self.action) if instance else self.action
        return {
            "action": name,
            "worst_cost": fraction_str(self.worst_cost),
            "children": {
                (instance.response_name(y) if instance else str(y)): c.to_dict(instance)
                for y, c in sorted(self.children.items())
            },
        }


def brute_force_opt(
    instance: Instance,
    memo: str = "auto",
    max_actions: int = 12,
    max_hypotheses: int = 64,
):
    """Optimal worst-case cost over all adaptive policies.

    ``memo="pairs"`` keys the recursion on the collected pair set and tries
    every untried action.  ``memo="vs"`` keys it on the version space and only
    tries actions with two or more possible responses, which is exact for
    learning objectives.  ``"auto"`` picks ``vs`` for declared learning
    objectives.

    Returns ``(opt, tree)``; ``tree`` is ``None`` when ``opt`` is infinite.
    """
    H = instance.hypotheses
    f = instance.objective
    actions = instance.actions
    if len(actions) > max_actions or len(H) > max_hypotheses:
        raise InstanceTooLarge(
            f"{len(actions)} actions / {len(H)} hypotheses exceed the limits "
            f"({max_actions} / {max_hypotheses})"
        )
    if memo == "auto":
        memo = "vs" if f.learning else "pairs"
    if memo not in ("vs", "pairs"):
        raise ValueError(f"unknown memo mode {memo!r}")
    if memo == "vs" and not f.learning:
        raise ValueError("vs-keyed memoisation needs a learning objective")
    cost = instance.costs.table
    Q = f.Q
    table: dict[Any, tuple[Extended, Optional[int]]] = {}

    def key(S: PairSet, vs: int):
        return vs if memo == "vs" else S

    def candidates(S: PairSet, vs: int):
        if memo == "vs":
            for x in actions:
                ys = H.possible_mask(x, vs)
                if len(ys) >= 2:
                    yield x, ys
        else:
            used = actions_of(S)
            for x in actions:
                if x not in used:
                    yield x, H.possible_mask(x, vs)

    def solve(S: PairSet, vs: int) -> Extended:
        k = key(S, vs)
        hit = table.get(k)
        if hit is not None:
            return hit[0]
        fv = f.value_vs(vs) if memo == "vs" else f.value(S)
        if fv >= Q:
            table[k] = (Fraction(0), None)
            return Fraction(0)
        best: Extended = INF
        best_x = None
        for x, ys in candidates(S, vs):
            worst: Extended = Fraction(0)
            for y in ys:
                c = cost[x][y]
                if c >= best:
                    worst = INF
                    break
                sub = c + solve(add_pair(S, (x, y)), vs & H.response_mask(x, y))
                if sub > worst:
                    worst = sub
                    if worst >= best:
                        break
            if worst < best:
                best, best_x = worst, x
        table.setdefault(k, (best, best_x))
        return best

    root_vs = H.full_mask
    opt = solve(EMPTY, root_vs)
    if opt == INF:
        return INF, None

    def build(S: PairSet, vs: int) -> PolicyTree:
        value, x = table[key(S, vs)]
        if x is None:
            return PolicyTree(None, Fraction(0))
        node = PolicyTree(x, value)
        for y in H.possible_mask(x, vs):
            node.children[y] = build(add_pair(S, (x, y)), vs & H.response_mask(x, y))
        return node

    return opt, build(EMPTY, root_vs)


def replay(tree: PolicyTree, instance: Instance, h: int) -> tuple[Fraction, bool, PairSet]:
    """Follow ``tree`` with ``h`` as the true hypothesis."""
    hyp = instance.hypotheses[h]
    S: PairSet = EMPTY
    total = Fraction(0)
    node = tree
    while not node.is_terminal:
        x = node.action
        y = hyp[x]
        total += instance.costs(x, y)
        S = add_pair(S, (x, y))
        node = node.children[y]
    return total, instance.objective.reached(S), S


def replay_worst(tree: PolicyTree, instance: Instance) -> tuple[Fraction, bool]:
    results = [replay(tree, instance, h) for h in range(len(instance.hypotheses))]
    return max(r[0] for r in results), all(r[1] for r in results)


# -- exhaustive property checks ------------------------------------------------

MAX_GROUND = 12


def _subset(ground: PairSet, m: int) -> PairSet:
    return tuple(p for i, p in enumerate(ground) if m >> i & 1)


def _value_table(f: Objective, ground) -> tuple[PairSet, list[Fraction]]:
    ground = make_pairset(ground)
    if len(ground) > MAX_GROUND:
        raise GroundSetTooLarge(f"{len(ground)} pairs; exhaustive checks allow at most {MAX_GROUND}")
    return ground, [f.value(_subset(ground, m)) for m in range(1 << len(ground))]


def _fmt(values):
    return [fraction_str(v) for v in values] if isinstance(values, (list, tuple)) else fraction_str(values)


def check_monotone(f: Objective, ground) -> CheckReport:
    ground, vals = _value_table(f, ground)
    n = len(ground)
    for m in range(1 << n):
        for i in range(n):
            if not m >> i & 1 and vals[m | 1 << i] < vals[m]:
                return CheckReport("monotone", False, {
                    "A": _subset(ground, m), "B": _subset(ground, m | 1 << i),
                    "f(A)": _fmt(vals[m]), "f(B)": _fmt(vals[m | 1 << i]),
                })
    return CheckReport("monotone", True, details={"ground_size": n})


def check_submodular(f: Objective, ground) -> CheckReport:
    """Check ``f(A+z) - f(A) >= f(B+z) - f(B)`` for every ``A <= B`` and ``z`` not in ``B``."""
    ground, vals = _value_table(f, ground)
    n = len(ground)
    for B in range(1 << n):
        outside = [1 << i for i in range(n) if not B >> i & 1]
        if not outside:
            continue
        dB = [vals[B | z] - vals[B] for z in outside]
        A = B
        while True:
            for z, db in zip(outside, dB):
                if vals[A | z] - vals[A] < db:
                    return CheckReport("submodular", False, {
                        "z": ground[z.bit_length() - 1],
                        "A": _subset(ground, A), "B": _subset(ground, B),
                        "delta_A": _fmt(vals[A | z] - vals[A]), "delta_B": _fmt(db),
                    })
            if A == 0:
                break
            A = (A - 1) & B
    return CheckReport("submodular", True, details={"ground_size": n})


def check_consistency_aware(f: Objective, Q, H: HypothesisClass, ground) -> CheckReport:
    Q = to_fraction(Q)
    ground, vals = _value_table(f, ground)
    checked = 0
    for m, v in enumerate(vals):
        S = _subset(ground, m)
        if H.vs_mask(S) == 0:
            checked += 1
            if v < Q:
                return CheckReport("consistency_aware", False, {"S": S, "f(S)": _fmt(v), "Q": _fmt(Q)})
    return CheckReport("consistency_aware", True, details={"inconsistent_sets": checked})


def check_learning_objective(f: Objective, H: HypothesisClass, ground) -> CheckReport:
    """Value depends on S only through vs(S) and does not increase with vs(S)."""
    ground, vals = _value_table(f, ground)
    by_vs: dict[int, tuple[int, Fraction]] = {}
    for m, v in enumerate(vals):
        vs = H.vs_mask(_subset(ground, m))
        seen = by_vs.get(vs)
        if seen is None:
            by_vs[vs] = (m, v)
        elif seen[1] != v:
            return CheckReport("learning_objective", False, {
                "S": _subset(ground, seen[0]), "S'": _subset(ground, m),
                "vs": sorted(_bits(vs)),
                "f(S)": _fmt(seen[1]), "f(S')": _fmt(v),
            })
    items = list(by_vs.items())
    for vs, (m, v) in items:
        for vs2, (m2, v2) in items:
            if vs != vs2 and vs & vs2 == vs and v < v2:
                return CheckReport("learning_objective", False, {
                    "S": _subset(ground, m), "S'": _subset(ground, m2),
                    "vs(S)": sorted(_bits(vs)), "vs(S')": sorted(_bits(vs2)),
                    "f(S)": _fmt(v), "f(S')": _fmt(v2),
                })
    return CheckReport("learning_objective", True, details={"distinct_version_spaces": len(items)})


def check_gap(f: Objective, ground) -> CheckReport:
    """No value strictly between ``Q - eta`` and ``Q``."""
    ground, vals = _value_table(f, ground)
    lo = f.Q - f.eta
    for m, v in enumerate(vals):
        if lo < v < f.Q:
            return CheckReport("eta_gap", False, {"S": _subset(ground, m), "f(S)": _fmt(v)})
    return CheckReport("eta_gap", True)


def _bits(m: int):
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


def check_all(instance: Instance, ground=None) -> list[CheckReport]:
    f = instance.objective
    H = instance.hypotheses
    if ground is None:
        ground = [(x, y) for x in instance.actions for y in range(instance.num_responses)]
    reports = [
        check_monotone(f, ground),
        check_submodular(f, ground),
        check_consistency_aware(f, f.Q, H, ground),
        check_learning_objective(f, H, ground),
        check_gap(f, ground),
    ]
    return reports


# -- logarithm bounds and the approximation-bound verifier ----------------------

_SERIES_TERMS = 40
_ROUND = 1 << 80


def _atanh_interval(z: Fraction) -> tuple[Fraction, Fraction]:
    # 0 <= z <= 1/3; tail after N terms is at most z^(2N+1) / ((2N+1)(1-z^2))
    total = Fraction(0)
    zsq = z * z
    term = z
    for n in range(_SERIES_TERMS):
        total += term / (2 * n + 1)
        term *= zsq
    tail = term / ((2 * _SERIES_TERMS + 1) * (1 - zsq))
    return total, total + tail


@lru_cache(maxsize=None)
def ln_interval(x: Fraction) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo <= ln(x) <= hi``."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("logarithm of a non-positive number")
    if x == 1:
        return Fraction(0), Fraction(0)
    if x < 1:
        lo, hi = ln_interval(1 / x)
        return -hi, -lo
    m = x.numerator.bit_length() - x.denominator.bit_length()
    r = x / Fraction(2) ** m
    if r >= 2:
        r /= 2
        m += 1
    elif r < 1:
        r *= 2
        m -= 1
    l2lo, l2hi = _atanh_interval(Fraction(1, 3))
    rlo, rhi = _atanh_interval((r - 1) / (r + 1))
    lo = m * 2 * l2lo + 2 * rlo
    hi = m * 2 * l2hi + 2 * rhi
    return (
        Fraction(math.floor(lo * _ROUND), _ROUND),
        Fraction(math.ceil(hi * _ROUND), _ROUND),
    )


def _mul(a: Extended, b: Extended) -> Extended:
    # inf * 0 is treated as inf: a bound with an infinite factor says nothing
    if a == INF or b == INF:
        return INF
    return a * b


def bound_factor(kind: str, r: CostRatios, Q, eta, alpha=1) -> Extended:
    """Upper bound on ``greedy_cost / OPT`` for the given guarantee."""
    Q = to_fraction(Q)
    eta = to_fraction(eta)
    alpha = to_fraction(alpha)
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    # Q >= eta whenever Q > 0 and the gap holds; Q = 0 needs no budget at all
    q = max(Q / eta, Fraction(1))
    if kind == "learning":
        log_term = ln_interval(q)[1] + 1
        return _mul(r.sscr, alpha * log_term)
    if kind == "general":
        log_term = ln_interval(q)[1] + 1
        return _mul(2 * min(r.gsscr, r.crr), alpha * log_term)
    if kind == "crr_trivial":
        log_term = ln_interval(max(Q, Fraction(1)))[1] + 1
        return _mul(r.crr, alpha * log_term)
    raise ValueError(f"unknown bound kind {kind!r}")


def verify_bound(kind: str, greedy_cost, opt, ratios: CostRatios, Q, eta, alpha=1) -> CheckReport:
    if opt == INF:
        raise ValueError("bound verification needs a finite OPT")
    greedy_cost = to_fraction(greedy_cost)
    opt = to_fraction(opt)
    factor = bound_factor(kind, ratios, Q, eta, alpha)
    bound = _mul(factor, opt)
    details = {
        "kind": kind,
        "greedy_cost": fraction_str(greedy_cost),
        "opt": fraction_str(opt),
        "factor": fraction_str(factor) if factor == INF else f"{float(factor):.6g}",
        "bound": fraction_str(bound) if bound == INF else f"{float(bound):.6g}",
    }
    if greedy_cost <= bound:
        return CheckReport(f"bound:{kind}", True, details=details)
    return CheckReport(f"bound:{kind}", False, witness=dict(details), details=details)
