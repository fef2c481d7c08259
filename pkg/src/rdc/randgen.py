"""Seeded random desk-scale instances for property checks."""

from __future__ import annotations

import random
from typing import Optional

from .core import HypothesisClass, Instance
from .cost import CostModel
from .objective import FBar, ModularFamily, VersionSpaceReduction


def random_hypotheses(rng: random.Random, num_actions: int, num_responses: int, num_hyps: int) -> HypothesisClass:
    num_hyps = min(num_hyps, num_responses ** num_actions)
    seen: set[tuple[int, ...]] = set()
    while len(seen) < num_hyps:
        seen.add(tuple(rng.randrange(num_responses) for _ in range(num_actions)))
    return HypothesisClass(tuple(sorted(seen)), num_actions, num_responses)


def random_costs(rng: random.Random, num_actions: int, num_responses: int, max_cost: int = 5) -> CostModel:
    """Integer costs in ``0..max_cost`` with at least one positive cost per action."""
    rows = []
    for _ in range(num_actions):
        row = [rng.randint(0, max_cost) for _ in range(num_responses)]
        if not any(row):
            row[rng.randrange(num_responses)] = rng.randint(1, max_cost)
        rows.append(row)
    return CostModel.from_rows(rows)


def _dims(rng: random.Random, max_actions: int, max_responses: int, max_hyps: int, num_responses: Optional[int]):
    nx = rng.randint(2, max_actions)
    ny = num_responses or rng.randint(2, max_responses)
    nh = rng.randint(2, min(max_hyps, ny ** nx))
    return nx, ny, nh


def random_learning_instance(seed: int, max_actions=5, max_responses=3, max_hyps=8,
                             num_responses: Optional[int] = None) -> Instance:
    rng = random.Random(seed)
    nx, ny, nh = _dims(rng, max_actions, max_responses, max_hyps, num_responses)
    H = random_hypotheses(rng, nx, ny, nh)
    return Instance(H, random_costs(rng, nx, ny), VersionSpaceReduction(H))


def random_fbar_instance(seed: int, max_actions=5, max_responses=3, max_hyps=8, max_weight=3, max_Q=4,
                         num_responses: Optional[int] = None) -> Instance:
    """Uniform-weight aggregate of random modular per-hypothesis functions."""
    rng = random.Random(seed)
    nx, ny, nh = _dims(rng, max_actions, max_responses, max_hyps, num_responses)
    H = random_hypotheses(rng, nx, ny, nh)
    weights = [[[rng.randint(0, max_weight) for _ in range(ny)] for _ in range(nx)] for _ in range(nh)]
    f = FBar(H, ModularFamily(weights, nh), rng.randint(1, max_Q))
    return Instance(H, random_costs(rng, nx, ny), f)


def ground_sample(instance: Instance, size: int, seed: int = 0) -> list[tuple[int, int]]:
    ground = [(x, y) for x in instance.actions for y in range(instance.num_responses)]
    if len(ground) <= size:
        return ground
    return random.Random(seed).sample(ground, size)
