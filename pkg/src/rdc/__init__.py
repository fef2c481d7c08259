"""Greedy interactive covering and learning with response-dependent costs."""

from .core import (
    EmptyVersionSpace,
    HypothesisClass,
    Instance,
    add_pair,
    make_pairset,
    possible_responses,
    version_space,
)
from .cost import CostModel, CostRatios, minsec, ratios
from .greedy import Greedy, RunTrace, StalledRun, UtilityVariant, run, worst_case_cost
from .objective import (
    Custom,
    EdgeUsersFamily,
    FBar,
    Indicator,
    ModularFamily,
    StructureDisqualification,
    VersionSpaceReduction,
    evaluate,
    marginal,
)
from .oracle import brute_force_opt, verify_bound

__version__ = "0.1.0"
