"""Response-dependent cost tables and the cost ratios crr, sscr and gsscr.

Costs are exact ``Fraction`` values.  Ratios live in the extended
non-negative rationals: ``p/0`` is ``math.inf`` for ``p > 0`` and ``0/0`` is
taken as 1, so an all-zero action never dominates a max.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Extended = Union[Fraction, float]  # float only ever holds math.inf

INF = math.inf


def to_fraction(v) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction.

    Floats are rejected: the engine relies on exact comparisons.
    """
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not costs")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"expected an exact rational, got {v!r}")


def fraction_str(v: Extended) -> str:
    if v == INF:
        return "inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def ratio(p: Fraction, q: Fraction) -> Extended:
    """``p/q`` with ``p/0 = inf`` for ``p > 0`` and ``0/0 = 1``."""
    if q == 0:
        return Fraction(1) if p == 0 else INF
    return Fraction(p) / q


@dataclass(frozen=True)
class CostModel:
    table: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(to_fraction(c) for c in row) for row in self.table)
        if not rows or not rows[0]:
            raise ValueError("cost table needs at least one action and one response")
        width = len(rows[0])
        for x, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"cost row {x} has {len(row)} entries, expected {width}")
            if any(c < 0 for c in row):
                raise ValueError(f"negative cost for action {x}")
        object.__setattr__(self, "table", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "CostModel":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def uniform(cls, num_actions: int, num_responses: int, c=1) -> "CostModel":
        return cls(tuple((to_fraction(c),) * num_responses for _ in range(num_actions)))

    @property
    def num_actions(self) -> int:
        return len(self.table)

    @property
    def num_responses(self) -> int:
        return len(self.table[0])

    def __call__(self, x: int, y: int) -> Fraction:
        return self.table[x][y]

    def scaled(self, factor) -> "CostModel":
        factor = to_fraction(factor)
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return CostModel(tuple(tuple(c * factor for c in row) for row in self.table))

    def max_cost(self, x: int) -> Fraction:
        return max(self.table[x])

    def pairs_cost(self, S) -> Fraction:
        return sum((self.table[x][y] for x, y in S), Fraction(0))


def minsec(cm: CostModel, x: int) -> Fraction:
    """Second-smallest cost of ``x`` counting multiplicity; the only cost if |Y| = 1."""
    row = sorted(cm.table[x])
    return row[1] if len(row) > 1 else row[0]


@dataclass(frozen=True)
class CostRatios:
    crr: Extended
    sscr: Extended
    gsscr: Extended
    phi: tuple[Fraction, ...]
    phi_min: Fraction
    cmax: Fraction

    def as_dict(self) -> dict:
        return {
            "crr": fraction_str(self.crr),
            "sscr": fraction_str(self.sscr),
            "gsscr": fraction_str(self.gsscr),
            "phi_min": fraction_str(self.phi_min),
            "cmax": fraction_str(self.cmax),
        }


def ratios(cm: CostModel) -> CostRatios:
    phi = tuple(minsec(cm, x) for x in range(cm.num_actions))
    crr = max(ratio(max(row), min(row)) for row in cm.table)
    sscr = max(ratio(c, phi[x]) for x, row in enumerate(cm.table) for c in row)
    cmax = max(max(row) for row in cm.table)
    phi_min = min(phi)
    return CostRatios(crr=crr, sscr=sscr, gsscr=ratio(cmax, phi_min), phi=phi, phi_min=phi_min, cmax=cmax)
