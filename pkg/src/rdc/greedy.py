"""Greedy selection under response-dependent costs.

Three utilities are supported.  All take the worst case over the responses
still possible given the history, of the truncated marginal gain divided
by a cost term:

* ``UF``: the cost actually incurred by that response;
* ``U2``: the largest cost of the action over every response;
* ``U3``: the incurred cost, capped at the smallest second-smallest cost.

Selection is exact argmax with ties going to the smallest action id.  An
action is never selected twice.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import EMPTY, EmptyVersionSpace, Instance, PairSet, actions_of, add_pair
from .cost import INF, Extended, fraction_str, ratios


class UtilityVariant(str, enum.Enum):
    UF = "uf"
    U2 = "u2"
    U3 = "u3"

    @classmethod
    def parse(cls, s) -> "UtilityVariant":
        if isinstance(s, cls):
            return s
        return cls(str(s).lower())


class StalledRun(RuntimeError):
    """No available action can make progress although the target is not reached."""

    def __init__(self, message: str, trace: Optional["RunTrace"] = None, variant=None):
        super().__init__(message)
        self.trace = trace
        self.variant = variant


def gain_ratio(delta: Fraction, cost: Fraction) -> Extended:
    # zero gain is worth nothing even at zero cost
    if delta == 0:
        return Fraction(0)
    if cost == 0:
        return INF
    return delta / cost


@dataclass(frozen=True)
class Step:
    action: int
    response: int
    cost: Fraction
    f_after: Fraction


@dataclass
class RunTrace:
    h_star: int
    steps: list[Step] = field(default_factory=list)
    total_cost: Fraction = Fraction(0)
    reached_target: bool = False

    @property
    def pairs(self) -> PairSet:
        return tuple(sorted((s.action, s.response) for s in self.steps))

    def as_rows(self, instance: Optional[Instance] = None) -> list[dict]:
        rows = []
        for t, s in enumerate(self.steps, start=1):
            rows.append({
                "step": t,
                "action": instance.action_name(s.action) if instance else s.action,
                "response": instance.response_name(s.response) if instance else s.response,
                "cost": fraction_str(s.cost),
                "f_after": fraction_str(s.f_after),
            })
        return rows


class Greedy:
    """Greedy policy for one instance and one utility variant.

    Cost terms that do not depend on the history are precomputed, which is
    what makes long experiment runs tolerable.
    """

    def __init__(self, instance: Instance, variant=UtilityVariant.UF):
        self.instance = instance
        self.variant = UtilityVariant.parse(variant)
        cm = instance.costs
        self._H = instance.hypotheses
        self._f = instance.objective
        if self.variant is UtilityVariant.U2:
            self._denom = [[cm.max_cost(x)] * cm.num_responses for x in range(cm.num_actions)]
        elif self.variant is UtilityVariant.U3:
            phi_min = ratios(cm).phi_min
            self._denom = [[min(c, phi_min) for c in row] for row in cm.table]
        else:
            self._denom = [list(row) for row in cm.table]

    # utilities ---------------------------------------------------------------

    def _responses(self, x: int, vs: int) -> list[int]:
        return self._H.possible_mask(x, vs)

    def gains(self, x: int, S: PairSet, vs: Optional[int] = None, f_S=None) -> dict[int, Fraction]:
        """Truncated marginal gain of ``(x, y)`` for every possible response ``y``."""
        if vs is None:
            vs = self._H.vs_mask(S)
        if not vs:
            raise EmptyVersionSpace("history is inconsistent with every hypothesis")
        f = self._f
        Q = f.Q
        if f_S is None:
            f_S = f.value(S)
        base = min(f_S, Q)
        ys = self._responses(x, vs)
        after = f.values_after(S, [(x, y) for y in ys])
        return {y: min(v, Q) - base for y, v in zip(ys, after)}

    def utility(self, x: int, S: PairSet, vs: Optional[int] = None, f_S=None) -> Extended:
        g = self.gains(x, S, vs, f_S)
        return min(gain_ratio(d, self._denom[x][y]) for y, d in g.items())

    def utility_fn(self) -> Callable[[int, PairSet], Extended]:
        """A fixed utility ``u(x, S)``, zero for actions already in ``S``."""
        def u(x: int, S: PairSet) -> Extended:
            if x in actions_of(S):
                return Fraction(0)
            return self.utility(x, S)
        return u

    # selection ---------------------------------------------------------------

    def step(self, S: PairSet, available: Optional[Sequence[int]] = None) -> Optional[int]:
        f_S = self._f.value(S)
        if f_S >= self._f.Q:
            return None
        vs = self._H.vs_mask(S)
        if not vs:
            raise EmptyVersionSpace("history is inconsistent with every hypothesis")
        if available is None:
            available = self.instance.actions
        used = actions_of(S)
        best, best_u = None, None
        progress = False
        for x in available:
            if x in used:
                continue
            g = self.gains(x, S, vs, f_S)
            if any(d > 0 for d in g.values()):
                progress = True
            u = min(gain_ratio(d, self._denom[x][y]) for y, d in g.items())
            if best_u is None or u > best_u:
                best, best_u = x, u
        if not progress:
            raise StalledRun(f"no available action improves f(S) = {f_S} < Q = {self._f.Q}")
        return best

    def run(self, h_star: int) -> RunTrace:
        H = self._H
        if not 0 <= h_star < len(H):
            raise IndexError(f"hypothesis index {h_star} out of range")
        h = H[h_star]
        cm = self.instance.costs
        trace = RunTrace(h_star)
        S: PairSet = EMPTY
        available = self.instance.actions
        while True:
            try:
                x = self.step(S, available)
            except StalledRun as exc:
                raise StalledRun(str(exc), trace, self.variant) from None
            if x is None:
                trace.reached_target = True
                return trace
            y = h[x]
            S = add_pair(S, (x, y))
            c = cm(x, y)
            trace.total_cost += c
            trace.steps.append(Step(x, y, c, self._f.value(S)))


def utility(variant, instance: Instance, x: int, S: PairSet) -> Extended:
    return Greedy(instance, variant).utility(x, S)


def greedy_step(variant, instance: Instance, S: PairSet, available=None) -> Optional[int]:
    return Greedy(instance, variant).step(S, available)


def run(variant, instance: Instance, h_star: int) -> RunTrace:
    return Greedy(instance, variant).run(h_star)


def worst_case_cost(variant, instance: Instance, hypotheses: Optional[Sequence[int]] = None):
    """Largest total greedy cost over ``hypotheses`` (default: all of H).

    Returns ``(cost, witness_index, witness_trace)``; the witness is the
    smallest index attaining the maximum.
    """
    g = Greedy(instance, variant)
    if hypotheses is None:
        hypotheses = range(len(instance.hypotheses))
    best = None
    for h in hypotheses:
        trace = g.run(h)
        if best is None or trace.total_cost > best.total_cost:
            best = trace
    if best is None:
        raise ValueError("no hypotheses to evaluate")
    return best.total_cost, best.h_star, best
