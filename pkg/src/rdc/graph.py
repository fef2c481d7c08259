"""Undirected simple graphs and SNAP-style edge-list parsing."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

log = logging.getLogger(__name__)


class EdgeListError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Nodes are ``0..num_nodes-1``; ``edges`` holds ``(u, v)`` with ``u < v``.

    ``labels`` keeps the original node ids from the input file, in remapped order.
    """

    num_nodes: int
    edges: frozenset[tuple[int, int]]
    labels: tuple[str, ...] = ()
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.num_nodes and 0 <= v < self.num_nodes):
                raise ValueError(f"edge ({u}, {v}) references a missing node")
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Iterable[tuple[int, int]], labels=()) -> "Graph":
        clean = {(min(u, v), max(u, v)) for u, v in edges if u != v}
        return cls(num_nodes, frozenset(clean), tuple(labels))

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def bfs_distances(self, source: int) -> list[int]:
        """Hop distances from ``source``; -1 marks unreachable nodes."""
        dist = [-1] * self.num_nodes
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self.adjacency[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def components(self) -> list[list[int]]:
        seen = [False] * self.num_nodes
        comps = []
        for s in range(self.num_nodes):
            if seen[s]:
                continue
            comp = [v for v, d in enumerate(self.bfs_distances(s)) if d >= 0]
            for v in comp:
                seen[v] = True
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return self.num_nodes > 0 and len(self.components()) == 1

    def subgraph(self, nodes: Iterable[int]) -> "Graph":
        nodes = sorted(set(nodes))
        index = {u: i for i, u in enumerate(nodes)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        labels = tuple(self.labels[u] for u in nodes) if self.labels else ()
        return Graph.from_edges(len(nodes), edges, labels)

    def largest_component(self) -> "Graph":
        comps = self.components()
        best = max(comps, key=len)
        if len(comps) > 1:
            log.warning(
                "graph has %d components; using the largest (%d of %d nodes)",
                len(comps), len(best), self.num_nodes,
            )
            return self.subgraph(best)
        return self

    def to_edge_list(self) -> str:
        names = self.labels or tuple(str(i) for i in range(self.num_nodes))
        return "".join(f"{names[u]} {names[v]}\n" for u, v in sorted(self.edges))


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated ``u v`` lines; ``#`` starts a comment line.

    Node ids are remapped to ``0..n-1`` in order of first appearance.
    Duplicate edges (in either direction) and self-loops are dropped.
    """
    index: dict[str, int] = {}
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise EdgeListError(f"line {lineno}: expected two node ids, got {raw!r}")
        u, v = parts[0], parts[1]
        for tok in (u, v):
            if tok not in index:
                index[tok] = len(index)
        a, b = index[u], index[v]
        if a != b:
            edges.add((min(a, b), max(a, b)))
    if not index:
        raise EdgeListError("edge list contains no nodes")
    return Graph(len(index), frozenset(edges), tuple(index))


def load_edge_list(path: Union[str, Path]) -> Graph:
    return parse_edge_list(Path(path).read_text())
