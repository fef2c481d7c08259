"""Social-network experiments: community hypotheses, objectives and the comparison table.

Actions are users and the response to a query is the user's community.
Each hypothesis is a partition generated from randomly drawn center users:
every node joins its hop-nearest center, ties going to the lower center id.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .core import HypothesisClass, Instance
from .cost import CostModel, fraction_str, to_fraction
from .graph import Graph, load_edge_list, parse_edge_list
from .greedy import Greedy, StalledRun, UtilityVariant

log = logging.getLogger(__name__)

# bundled desk-scale graph (40 nodes, three planted groups)
BUNDLED_GRAPH = "synthetic40.txt"


def bundled_graph() -> Graph:
    text = resources.files("rdc.data").joinpath(BUNDLED_GRAPH).read_text()
    return parse_edge_list(text)


class PartitionError(RuntimeError):
    pass


class ExperimentError(ValueError):
    pass


def voronoi_labels(g: Graph, centers: Sequence[int]) -> list[int]:
    """Label each node with its hop-nearest center (the center's node id)."""
    centers = sorted(centers)
    best = [(-1, -1)] * g.num_nodes
    for c in centers:
        for v, d in enumerate(g.bfs_distances(c)):
            if d < 0:
                continue
            if best[v][0] < 0 or d < best[v][0]:
                best[v] = (d, c)
    if any(b[0] < 0 for b in best):
        raise PartitionError("some node is unreachable from every center")
    return [c for _, c in best]


@dataclass(frozen=True)
class CommunityModel:
    num_communities: int
    seed: int
    centers: tuple[tuple[int, ...], ...]
    # community index = rank of the node's center among the sorted centers
    hypotheses: tuple[tuple[int, ...], ...]


def gen_partitions(g: Graph, num_communities: int, num_hypotheses: int, seed: int = 0,
                   max_tries: Optional[int] = None) -> CommunityModel:
    if num_communities < 2:
        raise ValueError("need at least two communities")
    if num_communities > g.num_nodes:
        raise ValueError("more communities than nodes")
    if not g.is_connected():
        raise PartitionError("graph is not connected; use Graph.largest_component() first")
    rng = random.Random(seed)
    if max_tries is None:
        max_tries = 50 * num_hypotheses + 100
    seen = set()
    centers_out, labels_out = [], []
    tries = 0
    while len(labels_out) < num_hypotheses:
        tries += 1
        if tries > max_tries:
            raise PartitionError(
                f"only {len(labels_out)} distinct partitions after {max_tries} draws"
            )
        centers = tuple(sorted(rng.sample(range(g.num_nodes), num_communities)))
        raw = voronoi_labels(g, centers)
        rank = {c: i for i, c in enumerate(centers)}
        labels = tuple(rank[c] for c in raw)
        if len(set(labels)) < num_communities or labels in seen:
            continue
        seen.add(labels)
        centers_out.append(centers)
        labels_out.append(labels)
    return CommunityModel(num_communities, seed, tuple(centers_out), tuple(labels_out))


def parse_cost_spec(spec: str) -> tuple[str, list[Fraction]]:
    """``preferred-zero:v1,v2,...`` or ``uniform:c``."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip()
    if kind not in ("preferred-zero", "uniform"):
        raise ExperimentError(f"unknown cost pattern {kind!r}")
    values = [to_fraction(v) for v in rest.split(",") if v.strip()] or [Fraction(1)]
    if any(v < 0 for v in values):
        raise ExperimentError("costs must be non-negative")
    return kind, values


def community_costs(num_actions: int, num_responses: int, reference: Sequence[int], spec="preferred-zero:1") -> CostModel:
    """Cost table for community experiments.

    ``preferred-zero``: the response equal to the action's community under
    the reference labeling costs 0; the other responses take the listed
    values in response order, cycling.  ``uniform``: every response costs c.
    """
    kind, values = parse_cost_spec(spec)
    if kind == "uniform":
        return CostModel.uniform(num_actions, num_responses, values[0])
    rows = []
    for x in range(num_actions):
        row, j = [], 0
        for y in range(num_responses):
            if y == reference[x]:
                row.append(Fraction(0))
            else:
                row.append(values[j % len(values)])
                j += 1
        rows.append(row)
    return CostModel.from_rows(rows)


def build_experiment(g: Graph, cm: CommunityModel, objective_kind: str = "edge_users", Q=None,
                     costs="preferred-zero:1", reference: int = 0) -> Instance:
    from .objective import EdgeUsersFamily, FBar, VersionSpaceReduction

    H = HypothesisClass(cm.hypotheses, g.num_nodes, cm.num_communities)
    cost_model = costs if isinstance(costs, CostModel) else community_costs(
        g.num_nodes, cm.num_communities, cm.hypotheses[reference], costs)
    if objective_kind == "edge_users":
        Q = to_fraction(50 if Q is None else Q)
        fam = EdgeUsersFamily(g, cm.hypotheses)
        reachable = int(fam.border_counts().min())
        if Q > reachable:
            raise ExperimentError(
                f"edge-users target Q={Q} is unreachable: some hypothesis has only {reachable} border users"
            )
        f = FBar(H, fam, Q)
    elif objective_kind == "vs_reduction":
        f = VersionSpaceReduction(H)
    else:
        raise ExperimentError(f"unknown objective {objective_kind!r}")
    names = tuple(g.labels) if g.labels else None
    return Instance(H, cost_model, f, names, tuple(f"C{i}" for i in range(cm.num_communities)))


@dataclass
class VariantResult:
    variant: str
    worst_cost: Fraction
    witness: int
    trace_length: int
    reached_target: bool
    wall_time: float
    hypotheses_evaluated: int

    def row(self) -> dict:
        return {
            "variant": self.variant,
            "worst_cost": fraction_str(self.worst_cost),
            "witness_h": self.witness,
            "trace_length": self.trace_length,
            "reached_target": self.reached_target,
            "hypotheses_evaluated": self.hypotheses_evaluated,
            "wall_time_s": round(self.wall_time, 3),
        }


@dataclass
class ExperimentResult:
    rows: list[VariantResult] = field(default_factory=list)
    sampled: bool = False
    meta: dict = field(default_factory=dict)

    def table(self, fmt: str = "table") -> str:
        rows = [r.row() for r in self.rows]
        cols = list(rows[0]) if rows else list(VariantResult.__dataclass_fields__)
        if fmt == "json":
            return json.dumps({"meta": self.meta, "sampled_lower_bound": self.sampled, "rows": rows}, indent=1)
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
            return buf.getvalue()
        widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
        lines = ["  ".join(c.ljust(widths[c]) for c in cols)]
        lines.append("  ".join("-" * widths[c] for c in cols))
        for r in rows:
            lines.append("  ".join(str(r[c]).ljust(widths[c]) for c in cols))
        if self.sampled:
            lines.append("(worst costs are over a hypothesis sample: lower bounds on the true worst case)")
        return "\n".join(lines)


def run_experiment(instance: Instance, variants: Sequence = ("uf", "u2", "u3"),
                   sample_h: Optional[int] = None, seed: int = 0) -> ExperimentResult:
    n = len(instance.hypotheses)
    if sample_h is not None and sample_h < n:
        hs = sorted(random.Random(seed).sample(range(n), sample_h))
    else:
        hs = list(range(n))
    result = ExperimentResult(sampled=len(hs) < n)
    for v in variants:
        v = UtilityVariant.parse(v)
        g = Greedy(instance, v)
        t0 = time.perf_counter()
        worst = None
        for h in hs:
            try:
                trace = g.run(h)
            except StalledRun as exc:
                raise StalledRun(f"variant {v.value} stalled on hypothesis {h}: {exc}", exc.trace, v) from None
            if worst is None or trace.total_cost > worst.total_cost:
                worst = trace
        elapsed = time.perf_counter() - t0
        log.info("variant %s: worst cost %s (h=%d) in %.2fs", v.value, worst.total_cost, worst.h_star, elapsed)
        result.rows.append(VariantResult(
            v.value, worst.total_cost, worst.h_star, len(worst.steps), True, elapsed, len(hs),
        ))
    return result
