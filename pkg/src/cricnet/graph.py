"""The teammate interaction network.

Node ``i`` links to ``j`` when both appeared in the same playing XI at least
once. The directed weight is ``|M_i & M_j| / |M_i|``, the share of ``i``'s
matches that ``j`` also played in, so the two directions of a pair usually
carry different weights.
"""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import CricnetError, EmptyGraphError
from .ingest import MatchRecord, ParticipationIndex


@dataclass(frozen=True, eq=False)
class InteractionGraph:
    nodes: tuple[str, ...]
    successors: tuple[tuple[int, ...], ...]
    weights: Mapping[tuple[int, int], float]
    # shared-match counts and per-node match totals; absent for re-imported
    # or synthetic graphs
    common: Mapping[tuple[int, int], int] | None = None
    match_counts: tuple[int, ...] | None = None
    labels: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.successors) != len(self.nodes):
            raise ValueError("successor lists do not match node count")
        for i, succ in enumerate(self.successors):
            if i in succ:
                raise ValueError(f"self-loop at {self.nodes[i]!r}")
            for j in succ:
                if i not in self.successors[j]:
                    raise ValueError(
                        f"edge {self.nodes[i]!r}->{self.nodes[j]!r} has no reverse edge"
                    )
        object.__setattr__(self, "_pos", {pid: i for i, pid in enumerate(self.nodes)})

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def directed_edge_count(self) -> int:
        return sum(len(s) for s in self.successors)

    @property
    def undirected_pair_count(self) -> int:
        return self.directed_edge_count // 2

    def index(self, player_id: str) -> int:
        return self._pos[player_id]

    def weight(self, i: int, j: int) -> float:
        return self.weights[(i, j)]

    def label(self, i: int) -> str:
        pid = self.nodes[i]
        return self.labels.get(pid, pid)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Directed edges in canonical (source, target) order."""
        for i, succ in enumerate(self.successors):
            for j in succ:
                yield i, j, self.weights[(i, j)]

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for i, succ in enumerate(self.successors):
            a[i, list(succ)] = 1
        return a

    def weight_matrix(self) -> np.ndarray:
        w = np.zeros((self.n, self.n), dtype=float)
        for (i, j), value in self.weights.items():
            w[i, j] = value
        return w

    def summary(self) -> dict:
        return {
            "N": self.n,
            "directed_edge_count": self.directed_edge_count,
            "undirected_pair_count": self.undirected_pair_count,
        }


def _assemble(nodes, weights, common=None, match_counts=None, labels=None) -> InteractionGraph:
    succ: list[list[int]] = [[] for _ in nodes]
    for i, j in weights:
        succ[i].append(j)
    return InteractionGraph(
        nodes=tuple(nodes),
        successors=tuple(tuple(sorted(s)) for s in succ),
        weights=dict(sorted(weights.items())),
        common=dict(sorted(common.items())) if common is not None else None,
        match_counts=tuple(match_counts) if match_counts is not None else None,
        labels=dict(labels or {}),
    )


def build_network(
    index: ParticipationIndex,
    matches: Iterable[MatchRecord],
    labels: Mapping[str, str] | None = None,
) -> InteractionGraph:
    """Teammate network over every indexed player.

    Opponents are never linked. Raises :class:`EmptyGraphError` when there
    are no matches.
    """
    matches = list(matches)
    if not matches or len(index) == 0:
        raise EmptyGraphError("cannot build a network from an empty match list")
    nodes = index.players()
    pos = {pid: i for i, pid in enumerate(nodes)}

    shared: Counter[tuple[int, int]] = Counter()
    for match in matches:
        for lineup in match.lineups.values():
            ids = sorted(pos[p] for p in lineup)
            for a, b in combinations(ids, 2):
                shared[(a, b)] += 1

    totals = [len(index.match_sets[pid]) for pid in nodes]
    weights: dict[tuple[int, int], float] = {}
    common: dict[tuple[int, int], int] = {}
    for (a, b), c in shared.items():
        common[(a, b)] = common[(b, a)] = c
        weights[(a, b)] = c / totals[a]
        weights[(b, a)] = c / totals[b]
    return _assemble(nodes, weights, common, totals, labels)


def from_pairs(n: int, pairs: Iterable[tuple[int, int]], prefix: str = "v") -> InteractionGraph:
    """Unit-weight bidirectional graph on ``n`` synthetic nodes."""
    width = len(str(max(n - 1, 0)))
    nodes = [f"{prefix}{i:0{width}d}" for i in range(n)]
    weights = {}
    for a, b in pairs:
        if a == b:
            raise ValueError(f"self-loop at node {a}")
        weights[(a, b)] = weights[(b, a)] = 1.0
    return _assemble(nodes, weights)


def export_dot(graph: InteractionGraph, name: str = "interactions") -> str:
    if graph.n == 0:
        raise EmptyGraphError("refusing to export an empty graph")
    lines = [f"digraph {_dot_id(name)} {{"]
    for i, pid in enumerate(graph.nodes):
        lines.append(f"  {_dot_id(pid)} [label={_dot_id(graph.label(i))}];")
    for i, j, w in graph.edges():
        lines.append(f"  {_dot_id(graph.nodes[i])} -> {_dot_id(graph.nodes[j])} [weight={w:.6f}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_edgelist(graph: InteractionGraph) -> str:
    if graph.n == 0:
        raise EmptyGraphError("refusing to export an empty graph")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "weight"])
    for i, j, w in graph.edges():
        writer.writerow([graph.nodes[i], graph.nodes[j], f"{w:.6f}"])
    return buf.getvalue()


def read_edgelist(text: str) -> InteractionGraph:
    """Inverse of :func:`export_edgelist` (weights only, no match counts)."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or set(reader.fieldnames) < {"source", "target", "weight"}:
        raise CricnetError("edge list needs a source,target,weight header")
    rows = [(r["source"], r["target"], float(r["weight"])) for r in reader]
    nodes = sorted({r[0] for r in rows} | {r[1] for r in rows})
    pos = {pid: i for i, pid in enumerate(nodes)}
    weights = {(pos[s], pos[t]): w for s, t, w in rows}
    return _assemble(nodes, weights)
