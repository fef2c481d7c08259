"""Actions, responses, hypotheses, pair sets and version spaces.

Actions and responses are plain integer indices.  A pair set is a sorted
tuple of ``(action, response)`` pairs without duplicates, which makes it
hashable and value-stable, so it can be used directly as a memo key.
Version spaces are bitmasks over hypothesis indices.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

import numpy as np

if TYPE_CHECKING:
    from .cost import CostModel
    from .objective import Objective

Pair = tuple[int, int]
PairSet = tuple[Pair, ...]

EMPTY: PairSet = ()


class EmptyVersionSpace(ValueError):
    """Raised when an operation needs a hypothesis consistent with the history."""


def make_pairset(pairs: Iterable[Pair]) -> PairSet:
    return tuple(sorted({(int(x), int(y)) for x, y in pairs}))


def add_pair(S: PairSet, p: Pair) -> PairSet:
    i = bisect_left(S, p)
    if i < len(S) and S[i] == p:
        return S
    return S[:i] + (p,) + S[i:]


def actions_of(S: PairSet) -> frozenset[int]:
    return frozenset(x for x, _ in S)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_indices(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class HypothesisClass:
    """A finite set of distinct total maps from actions to responses.

    ``hypotheses[i][x]`` is the response of hypothesis ``i`` to action ``x``.
    """

    hypotheses: tuple[tuple[int, ...], ...]
    num_actions: int
    num_responses: int
    _masks: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        hyps = tuple(tuple(int(v) for v in h) for h in self.hypotheses)
        object.__setattr__(self, "hypotheses", hyps)
        if not hyps:
            raise ValueError("hypothesis class must be non-empty")
        if len(set(hyps)) != len(hyps):
            raise ValueError("hypotheses must be distinct")
        for i, h in enumerate(hyps):
            if len(h) != self.num_actions:
                raise ValueError(f"hypothesis {i} has length {len(h)}, expected {self.num_actions}")
            if any(not 0 <= v < self.num_responses for v in h):
                raise ValueError(f"hypothesis {i} has a response out of range")
        masks = [[0] * self.num_responses for _ in range(self.num_actions)]
        for i, h in enumerate(hyps):
            for x, y in enumerate(h):
                masks[x][y] |= 1 << i
        object.__setattr__(self, "_masks", tuple(tuple(row) for row in masks))

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[int]], num_responses: Optional[int] = None):
        vectors = [list(v) for v in vectors]
        if not vectors:
            raise ValueError("hypothesis class must be non-empty")
        if num_responses is None:
            num_responses = max(max(v) for v in vectors) + 1
        return cls(tuple(tuple(v) for v in vectors), len(vectors[0]), num_responses)

    def __len__(self) -> int:
        return len(self.hypotheses)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.hypotheses[i]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.hypotheses)) - 1

    def response_mask(self, x: int, y: int) -> int:
        """Bitmask of hypotheses answering ``y`` to action ``x``."""
        return self._masks[x][y]

    def vs_mask(self, S: PairSet) -> int:
        mask = self.full_mask
        for x, y in S:
            mask &= self._masks[x][y]
            if not mask:
                break
        return mask

    def possible_mask(self, x: int, vs: int) -> list[int]:
        """Responses to ``x`` still possible under the version space bitmask ``vs``."""
        return [y for y, m in enumerate(self._masks[x]) if m & vs]

    def full_pairs(self, h: int, actions: Optional[Iterable[int]] = None) -> PairSet:
        if actions is None:
            actions = range(self.num_actions)
        return make_pairset((x, self.hypotheses[h][x]) for x in actions)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.hypotheses, dtype=np.int64)


def version_space(H: HypothesisClass, S: PairSet) -> frozenset[int]:
    return frozenset(mask_indices(H.vs_mask(S)))


def possible_responses(x: int, S: PairSet, H: HypothesisClass) -> frozenset[int]:
    return frozenset(H.possible_mask(x, H.vs_mask(S)))


def check_pairs(S: Iterable[Pair], num_actions: int, num_responses: int) -> None:
    for x, y in S:
        if not 0 <= x < num_actions:
            raise ValueError(f"action {x} out of range")
        if not 0 <= y < num_responses:
            raise ValueError(f"response {y} out of range")


@dataclass(frozen=True)
class Instance:
    """An interactive covering problem: hypotheses, costs and an objective.

    ``available`` restricts the actions a policy may select; ``None`` means
    every action.  Restriction never changes the hypotheses, costs or the
    objective, which keeps utilities independent of the available set.
    """

    hypotheses: HypothesisClass
    costs: "CostModel"
    objective: "Objective"
    action_names: Optional[tuple[str, ...]] = None
    response_names: Optional[tuple[str, ...]] = None
    available: Optional[frozenset[int]] = None

    def __post_init__(self):
        H = self.hypotheses
        if self.costs.num_actions != H.num_actions or self.costs.num_responses != H.num_responses:
            raise ValueError("cost table dimensions do not match the hypothesis class")
        oh = getattr(self.objective, "hypotheses", None)
        if oh is not None and len(oh) != len(H):
            raise ValueError("objective is defined over a different hypothesis class")
        if self.action_names is not None and len(self.action_names) != H.num_actions:
            raise ValueError("action_names length mismatch")
        if self.response_names is not None and len(self.response_names) != H.num_responses:
            raise ValueError("response_names length mismatch")
        if self.available is not None:
            if any(not 0 <= x < H.num_actions for x in self.available):
                raise ValueError("available action out of range")
            object.__setattr__(self, "available", frozenset(self.available))

    @property
    def num_actions(self) -> int:
        return self.hypotheses.num_actions

    @property
    def num_responses(self) -> int:
        return self.hypotheses.num_responses

    @property
    def actions(self) -> list[int]:
        if self.available is None:
            return list(range(self.num_actions))
        return sorted(self.available)

    def restrict(self, actions: Iterable[int]) -> "Instance":
        return Instance(
            self.hypotheses,
            self.costs,
            self.objective,
            self.action_names,
            self.response_names,
            frozenset(actions),
        )

    def action_name(self, x: int) -> str:
        return self.action_names[x] if self.action_names else str(x)

    def response_name(self, y: int) -> str:
        return self.response_names[y] if self.response_names else str(y)
