"""Monotone submodular objectives over pair sets.

Every objective carries its target ``Q`` and gap ``eta`` and is defined on
all pair sets, including ones no hypothesis is consistent with.  Values are
exact ``Fraction`` objects.

Kinds
-----
``VersionSpaceReduction``
    ``1 - |vs(S)|/|H|`` with ``Q = 1 - 1/|H|``.
``StructureDisqualification``
    Total weight of structures (subsets of H) not contained in ``vs(S)``.
``FBar``
    The uniform or weighted aggregate of a per-hypothesis family: every
    hypothesis outside ``vs(S)`` contributes ``Q`` and every hypothesis inside
    contributes ``min(Q, f_h(S))``.
``Indicator``
    ``Q`` as soon as ``S`` contains one of a set of trigger pairs, else 0.
``Custom``
    An explicit value table over all subsets of a small ground set.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .core import (
    EMPTY,
    HypothesisClass,
    Pair,
    PairSet,
    actions_of,
    add_pair,
    make_pairset,
    popcount,
)
from .cost import to_fraction
from .graph import Graph


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def _fraction_gcd(values: Iterable[Fraction]) -> Fraction:
    values = [Fraction(v) for v in values]
    d = _lcm(v.denominator for v in values)
    g = reduce(math.gcd, (int(v * d) for v in values), 0)
    return Fraction(g, d)


class Objective:
    """Base class.  Subclasses implement :meth:`value`."""

    kind = "abstract"
    #: declared learning objective (value depends on S only through vs(S))
    learning = False
    hypotheses: Optional[HypothesisClass] = None

    def __init__(self, Q, eta):
        self.Q = to_fraction(Q)
        self.eta = to_fraction(eta)
        if self.Q < 0 or self.eta <= 0:
            raise ValueError("Q must be non-negative and eta positive")

    def value(self, S: PairSet) -> Fraction:
        raise NotImplementedError

    def values_after(self, S: PairSet, pairs: Sequence[Pair]) -> list[Fraction]:
        """``f(S | {p})`` for each ``p`` in ``pairs``."""
        return [self.value(add_pair(S, p)) for p in pairs]

    def value_vs(self, vs: int) -> Fraction:
        """Value as a function of a version-space bitmask (learning objectives only)."""
        raise TypeError(f"{self.kind} objective is not a function of the version space")

    def reached(self, S: PairSet) -> bool:
        return self.value(S) >= self.Q


def evaluate(f: Objective, S: PairSet) -> Fraction:
    return f.value(S)


def marginal(f: Objective, p: Pair, S: PairSet) -> Fraction:
    """Gain of ``p`` on the objective truncated at ``Q``."""
    before = min(f.value(S), f.Q)
    return min(f.value(add_pair(S, p)), f.Q) - before


class VersionSpaceReduction(Objective):
    kind = "vs_reduction"
    learning = True

    def __init__(self, H: HypothesisClass):
        n = len(H)
        if n < 1:
            raise ValueError("empty hypothesis class")
        self.hypotheses = H
        super().__init__(1 - Fraction(1, n), Fraction(1, n))

    def value_vs(self, vs: int) -> Fraction:
        return 1 - Fraction(popcount(vs), len(self.hypotheses))

    def value(self, S: PairSet) -> Fraction:
        return self.value_vs(self.hypotheses.vs_mask(S))


def vs_reduction(H: HypothesisClass, S: PairSet) -> Fraction:
    return VersionSpaceReduction(H).value(S)


class StructureDisqualification(Objective):
    """Weight of structures with at least one member ruled out by ``S``.

    ``Q`` is the total weight and ``eta`` the smallest structure weight.
    """

    kind = "structure"
    learning = True

    def __init__(self, H: HypothesisClass, structures: Sequence[Iterable[int]], weights=None):
        structs = [frozenset(int(i) for i in s) for s in structures]
        if not structs:
            raise ValueError("need at least one structure")
        for s in structs:
            if not s:
                raise ValueError("structures must be non-empty")
            if any(not 0 <= i < len(H) for i in s):
                raise ValueError("structure references an unknown hypothesis")
        if weights is None:
            weights = [1] * len(structs)
        weights = [to_fraction(w) for w in weights]
        if len(weights) != len(structs) or any(w <= 0 for w in weights):
            raise ValueError("need one positive weight per structure")
        self.hypotheses = H
        self.structures = tuple(structs)
        self.weights = tuple(weights)
        self._masks = tuple(sum(1 << i for i in s) for s in structs)
        super().__init__(sum(weights), min(weights))

    def value_vs(self, vs: int) -> Fraction:
        alive = sum((w for m, w in zip(self._masks, self.weights) if m & vs == m), Fraction(0))
        return self.Q - alive

    def value(self, S: PairSet) -> Fraction:
        return self.value_vs(self.hypotheses.vs_mask(S))

    @classmethod
    def equivalence_classes(cls, H: HypothesisClass, classes: Sequence[Iterable[int]]):
        """Equivalence class determination: all pairs of hypotheses from different classes."""
        label = {}
        for c, members in enumerate(classes):
            for i in members:
                label[i] = c
        n = len(H)
        pairs = [
            (i, j) for i in range(n) for j in range(i + 1, n)
            if label.get(i, -1 - i) != label.get(j, -1 - j)
        ]
        return cls(H, pairs)


def structure_disqualify(G: Sequence[Iterable[int]], H: HypothesisClass, S: PairSet, weights=None) -> Fraction:
    return StructureDisqualification(H, G, weights).value(S)


# -- per-hypothesis families for FBar ------------------------------------------


class ModularFamily:
    """``f_h(S) = sum of w_h(x, y) over (x, y) in S``.

    ``pair_weights`` is either one ``[x][y]`` table shared by all hypotheses
    or a ``[h][x][y]`` table.
    """

    kind = "modular"

    def __init__(self, pair_weights, num_hypotheses: int):
        arr = np.asarray(pair_weights, dtype=object)
        if arr.ndim == 2:
            arr = np.broadcast_to(arr, (num_hypotheses,) + arr.shape)
        if arr.ndim != 3 or arr.shape[0] != num_hypotheses:
            raise ValueError("pair_weights must be [x][y] or [h][x][y]")
        fr = np.vectorize(to_fraction, otypes=[object])(arr)
        if any(w < 0 for w in fr.flat):
            raise ValueError("modular weights must be non-negative")
        self.weights = fr
        self.denominator = _lcm(w.denominator for w in fr.flat)
        self._scaled = np.array(
            [[[int(w * self.denominator) for w in row] for row in hx] for hx in fr], dtype=np.int64
        )
        self.num_hypotheses = num_hypotheses

    def shape_ok(self, num_actions: int, num_responses: int) -> bool:
        return self._scaled.shape[1:] == (num_actions, num_responses)

    def value(self, h: int, S: PairSet) -> Fraction:
        return sum((self.weights[h, x, y] for x, y in S), Fraction(0))

    def scaled_values(self, S: PairSet) -> np.ndarray:
        out = np.zeros(self.num_hypotheses, dtype=np.int64)
        for x, y in S:
            out += self._scaled[:, x, y]
        return out

    def scaled_increment(self, S: PairSet, p: Pair) -> Optional[np.ndarray]:
        if p in S:
            return None
        return self._scaled[:, p[0], p[1]]

    def atoms(self) -> list[Fraction]:
        return list(self.weights.flat)


class EdgeUsersFamily:
    """Per-hypothesis count of queried users with a neighbour in another community.

    Actions are graph nodes; ``labelings[h][x]`` is the community of node
    ``x`` under hypothesis ``h``.  The response to a query is ignored.
    """

    kind = "edge_users"

    def __init__(self, graph: Graph, labelings: Sequence[Sequence[int]]):
        labelings = [list(l) for l in labelings]
        for h, lab in enumerate(labelings):
            if len(lab) != graph.num_nodes:
                raise ValueError(f"labeling {h} does not cover every graph node")
        self.graph = graph
        self.labelings = labelings
        lab = np.asarray(labelings, dtype=np.int64)
        border = np.zeros(lab.shape, dtype=np.int64)
        for u, v in graph.edges:
            diff = lab[:, u] != lab[:, v]
            border[:, u] |= diff
            border[:, v] |= diff
        self.border = border
        self.denominator = 1
        self.num_hypotheses = len(labelings)

    def shape_ok(self, num_actions: int, num_responses: int) -> bool:
        return self.border.shape[1] == num_actions

    def _check(self, S: PairSet):
        for x, _ in S:
            if not 0 <= x < self.graph.num_nodes:
                raise ValueError(f"action {x} is not a graph node")

    def value(self, h: int, S: PairSet) -> Fraction:
        self._check(S)
        return Fraction(int(sum(self.border[h, x] for x in actions_of(S))))

    def scaled_values(self, S: PairSet) -> np.ndarray:
        self._check(S)
        acts = sorted(actions_of(S))
        if not acts:
            return np.zeros(self.num_hypotheses, dtype=np.int64)
        return self.border[:, acts].sum(axis=1)

    def scaled_increment(self, S: PairSet, p: Pair) -> Optional[np.ndarray]:
        if any(x == p[0] for x, _ in S):
            return None
        return self.border[:, p[0]]

    def border_counts(self) -> np.ndarray:
        return self.border.sum(axis=1)

    def atoms(self) -> list[Fraction]:
        return [Fraction(1)]


def edge_users_value(graph: Graph, labeling: Sequence[int], S: PairSet) -> int:
    """Number of distinct queried nodes with a neighbour labelled differently."""
    count = 0
    for x in actions_of(S):
        if not 0 <= x < graph.num_nodes:
            raise ValueError(f"action {x} is not a graph node")
        if any(labeling[v] != labeling[x] for v in graph.neighbors(x)):
            count += 1
    return count


class FBar(Objective):
    """Consistency-aware aggregate of a per-hypothesis family.

    Evaluation is vectorised over hypotheses in scaled integer arithmetic
    and converted back to a Fraction, so it stays exact.
    """

    kind = "fbar"

    def __init__(self, H: HypothesisClass, family, Q, weights=None, eta=None):
        n = len(H)
        if family.num_hypotheses != n:
            raise ValueError("family size does not match the hypothesis class")
        if not family.shape_ok(H.num_actions, H.num_responses):
            raise ValueError("family does not match the instance dimensions")
        Q = to_fraction(Q)
        if weights is None:
            w = [Fraction(1, n)] * n
        else:
            w = [to_fraction(v) for v in weights]
            if len(w) != n or any(v <= 0 for v in w):
                raise ValueError("need one positive weight per hypothesis")
            total = sum(w)
            w = [v / total for v in w]
        if eta is None:
            eta = min(w) * _fraction_gcd(family.atoms() + [Q])
        super().__init__(Q, eta)
        self.hypotheses = H
        self.family = family
        self.weights = tuple(w)
        self.uniform = weights is None or len(set(w)) == 1

        self._D = _lcm([family.denominator, Q.denominator])
        self._mult = self._D // family.denominator
        self._Qs = int(Q * self._D)
        self._Dw = _lcm(v.denominator for v in w)
        self._W = np.array([int(v * self._Dw) for v in w], dtype=np.int64)
        hyp = H.as_array()
        self._resp = [
            [hyp[:, x] == y for y in range(H.num_responses)] for x in range(H.num_actions)
        ]

    def _vs_bool(self, S: PairSet) -> np.ndarray:
        vs = np.ones(len(self.hypotheses), dtype=bool)
        for x, y in S:
            vs &= self._resp[x][y]
        return vs

    def _combine(self, vs: np.ndarray, scaled: np.ndarray) -> Fraction:
        terms = np.where(vs, np.minimum(scaled * self._mult, self._Qs), self._Qs)
        return Fraction(int(np.dot(self._W, terms)), self._D * self._Dw)

    def value(self, S: PairSet) -> Fraction:
        return self._combine(self._vs_bool(S), self.family.scaled_values(S))

    def values_after(self, S: PairSet, pairs: Sequence[Pair]) -> list[Fraction]:
        vs = self._vs_bool(S)
        base = self.family.scaled_values(S)
        out = []
        for p in pairs:
            inc = self.family.scaled_increment(S, p)
            vals = base if inc is None else base + inc
            out.append(self._combine(vs & self._resp[p[0]][p[1]], vals))
        return out

    def per_hypothesis(self, S: PairSet) -> list[Fraction]:
        return [self.family.value(h, S) for h in range(len(self.hypotheses))]


def fbar_evaluate(family, Q, S: PairSet, H: HypothesisClass, weights=None) -> Fraction:
    return FBar(H, family, Q, weights).value(S)


class Indicator(Objective):
    """``Q`` when ``S`` contains any trigger pair, else 0 (so ``eta = Q``)."""

    kind = "indicator"

    def __init__(self, triggers: Iterable[Pair], Q=1):
        self.triggers = frozenset((int(x), int(y)) for x, y in triggers)
        super().__init__(Q, Q)

    def value(self, S: PairSet) -> Fraction:
        return self.Q if any(p in self.triggers for p in S) else Fraction(0)


class Custom(Objective):
    """Explicit table over every subset of ``ground`` (at most 12 pairs)."""

    kind = "custom"
    MAX_GROUND = 12

    def __init__(self, ground: Iterable[Pair], table: dict, Q, eta):
        ground = make_pairset(ground)
        if len(ground) > self.MAX_GROUND:
            raise ValueError(f"custom objectives support at most {self.MAX_GROUND} ground pairs")
        self.ground = ground
        self._index = {p: i for i, p in enumerate(ground)}
        self._table = [None] * (1 << len(ground))
        for key, v in table.items():
            self._table[self._mask(make_pairset(key))] = to_fraction(v)
        if any(v is None for v in self._table):
            raise ValueError("custom table must give a value for every subset of the ground set")
        if self._table[0] != 0:
            raise ValueError("custom objective must satisfy f(empty) = 0")
        super().__init__(Q, eta)

    @classmethod
    def from_function(cls, ground: Iterable[Pair], fn: Callable[[PairSet], object], Q, eta):
        ground = make_pairset(ground)
        table = {}
        for m in range(1 << len(ground)):
            S = tuple(p for i, p in enumerate(ground) if m >> i & 1)
            table[S] = fn(S)
        return cls(ground, table, Q, eta)

    def _mask(self, S: PairSet) -> int:
        m = 0
        for p in S:
            try:
                m |= 1 << self._index[p]
            except KeyError:
                raise ValueError(f"pair {p} is outside the custom ground set") from None
        return m

    def value(self, S: PairSet) -> Fraction:
        return self._table[self._mask(S)]

    def table_items(self):
        for m, v in enumerate(self._table):
            yield tuple(p for i, p in enumerate(self.ground) if m >> i & 1), v


__all__ = [
    "EMPTY",
    "Custom",
    "EdgeUsersFamily",
    "FBar",
    "Indicator",
    "ModularFamily",
    "Objective",
    "StructureDisqualification",
    "VersionSpaceReduction",
    "edge_users_value",
    "evaluate",
    "fbar_evaluate",
    "marginal",
    "structure_disqualify",
    "vs_reduction",
]
