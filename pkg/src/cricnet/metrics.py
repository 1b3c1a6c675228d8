"""Centrality, clustering and path statistics over an InteractionGraph.

Conventions:

* degree is in-degree + out-degree, i.e. twice the number of distinct
  teammates in a bidirectional graph;
* shortest paths count hops and ignore weights;
* betweenness sums over *ordered* source/target pairs of the directed graph,
  which on a bidirectional graph is twice the undirected value;
* closeness is the unnormalised ``1 / sum(distances)``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graph import InteractionGraph

CLUSTERING_MODES = ("fagiolo", "binary")


def degree(graph: InteractionGraph) -> dict[str, int]:
    in_deg = [0] * graph.n
    for succ in graph.successors:
        for j in succ:
            in_deg[j] += 1
    return {pid: len(graph.successors[i]) + in_deg[i] for i, pid in enumerate(graph.nodes)}


def hop_distances(graph: InteractionGraph) -> np.ndarray:
    """All-pairs hop distances; ``-1`` marks unreachable pairs.

    Runs a breadth-first search from every source at once, one boolean
    matrix product per BFS level.
    """
    n = graph.n
    adj = graph.adjacency().astype(float)
    dist = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    reached = np.eye(n, dtype=bool)
    frontier = reached.copy()
    level = 0
    while frontier.any():
        level += 1
        nxt = (frontier.astype(float) @ adj) > 0
        nxt &= ~reached
        dist[nxt] = level
        reached |= nxt
        frontier = nxt
    return dist


def betweenness(graph: InteractionGraph) -> dict[str, float]:
    """Brandes' algorithm on the unweighted directed graph."""
    n = graph.n
    succ = graph.successors
    cb = [0.0] * n
    for s in range(n):
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            dv = dist[v] + 1
            for w in succ[v]:
                if dist[w] < 0:
                    dist[w] = dv
                    queue.append(w)
                if dist[w] == dv:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                cb[w] += delta[w]
    return dict(zip(graph.nodes, cb))


def closeness(graph: InteractionGraph, dist: np.ndarray | None = None) -> dict[str, float]:
    """``1 / sum`` of hop distances to reachable nodes; NaN when none are reachable."""
    if dist is None:
        dist = hop_distances(graph)
    out = {}
    for i, pid in enumerate(graph.nodes):
        row = dist[i]
        total = int(row[row > 0].sum())
        out[pid] = 1.0 / total if total > 0 else math.nan
    return out


def avg_path_length(graph: InteractionGraph, dist: np.ndarray | None = None) -> tuple[float, float]:
    """Mean hop distance over ordered reachable pairs, and ``ln(N)``."""
    if dist is None:
        dist = hop_distances(graph)
    off = dist[dist > 0]
    mean = float(off.sum() / off.size) if off.size else math.nan
    return mean, math.log(graph.n)


def local_clustering(
    graph: InteractionGraph,
    mode: str = "fagiolo",
    normalize: bool = True,
) -> dict[str, float]:
    """Weighted directed clustering (Fagiolo's total coefficient).

    Each directed triangle around ``i`` contributes the geometric mean of its
    three edge weights, and the count is divided by the number of triangles
    ``i`` could form given its total and bilateral degrees. ``mode="binary"``
    replaces every weight with 1. Weights are rescaled by the largest weight
    first unless ``normalize`` is false. Nodes that cannot close a triangle
    get 0.
    """
    if mode not in CLUSTERING_MODES:
        raise ValueError(f"mode must be one of {CLUSTERING_MODES}, got {mode!r}")
    a = graph.adjacency().astype(float)
    w = a if mode == "binary" else graph.weight_matrix()
    if normalize and w.size and w.max() > 0:
        w = w / w.max()
    root = np.cbrt(w)
    s = root + root.T
    closed = np.einsum("ij,ji->i", s @ s, s)
    d_tot = a.sum(axis=1) + a.sum(axis=0)
    d_bil = (a * a.T).sum(axis=1)
    possible = 2.0 * (d_tot * (d_tot - 1) - 2.0 * d_bil)
    coeff = np.divide(closed, possible, out=np.zeros_like(closed), where=possible > 0)
    return dict(zip(graph.nodes, coeff.tolist()))


def _undirected(graph: InteractionGraph) -> np.ndarray:
    a = graph.adjacency()
    return ((a + a.T) > 0).astype(float)


def global_clustering(graph: InteractionGraph) -> float:
    """Transitivity of the undirected projection: closed triples / connected triples."""
    a = _undirected(graph)
    k = a.sum(axis=1)
    triples = float((k * (k - 1)).sum())
    if triples == 0:
        return 0.0
    closed = float(np.einsum("ij,ji->", a @ a, a))
    return closed / triples


def mean_local_clustering(graph: InteractionGraph) -> float:
    """Average of the classic undirected local coefficient (0 for degree < 2)."""
    a = _undirected(graph)
    k = a.sum(axis=1)
    tri2 = np.einsum("ij,ji->i", a @ a, a)
    pairs = k * (k - 1)
    c = np.divide(tri2, pairs, out=np.zeros_like(tri2), where=pairs > 0)
    return float(c.mean()) if c.size else 0.0


@dataclass(frozen=True)
class Histogram:
    metric: str
    edges: tuple[float, ...]
    counts: tuple[int, ...]

    def rows(self) -> list[tuple[float, float, int]]:
        return [(self.edges[i], self.edges[i + 1], c) for i, c in enumerate(self.counts)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["bin_lo", "bin_hi", "count"])
        for lo, hi, c in self.rows():
            writer.writerow([_num(lo), _num(hi), c])
        return buf.getvalue()


def histogram(
    values: Iterable[float],
    bin_width: float | None = None,
    edges: Sequence[float] | None = None,
    metric: str = "",
) -> Histogram:
    """Counts per half-open bin ``[lo, hi)``; the last bin is closed.

    Give either ``bin_width`` (bins are aligned to multiples of the width) or
    explicit ascending ``edges`` that cover every value.
    """
    vals = np.asarray([v for v in values if not math.isnan(v)], dtype=float)
    if vals.size == 0:
        raise ValueError("histogram of an empty sequence")
    if (bin_width is None) == (edges is None):
        raise ValueError("pass exactly one of bin_width or edges")
    if edges is not None:
        e = np.asarray(edges, dtype=float)
        if e.size < 2 or np.any(np.diff(e) <= 0):
            raise ValueError(f"bin edges must be strictly ascending, got {list(edges)}")
        if vals.min() < e[0] or vals.max() > e[-1]:
            raise ValueError("values fall outside the supplied bin edges")
    else:
        if bin_width <= 0:
            raise ValueError("bin_width must be positive")
        lo = math.floor(vals.min() / bin_width) * bin_width
        nbins = max(1, math.ceil((vals.max() - lo) / bin_width))
        e = lo + bin_width * np.arange(nbins + 1)
        while e[-1] < vals.max():
            e = np.append(e, e[-1] + bin_width)
    counts, _ = np.histogram(vals, bins=e)
    return Histogram(metric, tuple(float(x) for x in e), tuple(int(c) for c in counts))


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


@dataclass(frozen=True)
class PlayerMetrics:
    player_id: str
    name: str
    degree: int
    betweenness: float
    closeness: float
    local_clustering: float
    matches: int | None = None

    @property
    def co_players(self) -> int:
        return self.degree // 2


METRIC_FIELDS = {
    "degree": "degree",
    "betweenness": "betweenness",
    "closeness": "closeness",
    "clustering": "local_clustering",
}


@dataclass(frozen=True)
class MetricReport:
    rows: tuple[PlayerMetrics, ...]
    avg_path_length: float
    ln_n: float
    global_clustering: float
    mean_local_clustering: float
    mean_degree: float
    max_degree: int
    mean_betweenness: float
    max_betweenness: float
    mean_closeness: float
    clustering_mode: str = "fagiolo"
    _by_id: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._by_id.update({r.player_id: r for r in self.rows})

    def __getitem__(self, player_id: str) -> PlayerMetrics:
        return self._by_id[player_id]

    def __contains__(self, player_id: str) -> bool:
        return player_id in self._by_id

    def values(self, metric: str) -> dict[str, float]:
        attr = METRIC_FIELDS[metric]
        return {r.player_id: getattr(r, attr) for r in self.rows}

    def graph_stats(self) -> dict:
        return {
            "N": len(self.rows),
            "avg_path_length": self.avg_path_length,
            "ln_N": self.ln_n,
            "global_clustering": self.global_clustering,
            "mean_local_clustering": self.mean_local_clustering,
            "mean_degree": self.mean_degree,
            "max_degree": self.max_degree,
            "mean_betweenness": self.mean_betweenness,
            "max_betweenness": self.max_betweenness,
            "mean_closeness": self.mean_closeness,
            "clustering_mode": self.clustering_mode,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "name", "degree", "betweenness", "closeness", "clustering"])
        for r in self.rows:
            writer.writerow([
                r.player_id, r.name, r.degree,
                f"{r.betweenness:.6f}", f"{r.closeness:.8f}", f"{r.local_clustering:.6f}",
            ])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "graph": self.graph_stats(),
            "players": [asdict(r) for r in self.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "MetricReport":
        payload = json.loads(text)
        g = payload["graph"]
        return cls(
            rows=tuple(PlayerMetrics(**r) for r in payload["players"]),
            avg_path_length=g["avg_path_length"],
            ln_n=g["ln_N"],
            global_clustering=g["global_clustering"],
            mean_local_clustering=g["mean_local_clustering"],
            mean_degree=g["mean_degree"],
            max_degree=g["max_degree"],
            mean_betweenness=g["mean_betweenness"],
            max_betweenness=g["max_betweenness"],
            mean_closeness=g["mean_closeness"],
            clustering_mode=g.get("clustering_mode", "fagiolo"),
        )


def compute_report(graph: InteractionGraph, clustering_mode: str = "fagiolo") -> MetricReport:
    dist = hop_distances(graph)
    deg = degree(graph)
    btw = betweenness(graph)
    clo = closeness(graph, dist)
    clu = local_clustering(graph, mode=clustering_mode)
    apl, ln_n = avg_path_length(graph, dist)
    rows = tuple(
        PlayerMetrics(
            player_id=pid,
            name=graph.label(i),
            degree=deg[pid],
            betweenness=btw[pid],
            closeness=clo[pid],
            local_clustering=clu[pid],
            matches=graph.match_counts[i] if graph.match_counts else None,
        )
        for i, pid in enumerate(graph.nodes)
    )
    degs = np.array([r.degree for r in rows], dtype=float)
    btws = np.array([r.betweenness for r in rows])
    clos = np.array([r.closeness for r in rows])
    return MetricReport(
        rows=rows,
        avg_path_length=apl,
        ln_n=ln_n,
        global_clustering=global_clustering(graph),
        mean_local_clustering=float(np.mean([r.local_clustering for r in rows])),
        mean_degree=float(degs.mean()),
        max_degree=int(degs.max()),
        mean_betweenness=float(btws.mean()),
        max_betweenness=float(btws.max()),
        mean_closeness=float(np.nanmean(clos)) if np.any(~np.isnan(clos)) else math.nan,
        clustering_mode=clustering_mode,
    )


def default_histograms(report: MetricReport) -> dict[str, Histogram]:
    """Bin widths used for the distribution files written by ``analyze``."""
    widths = {"degree": 20, "betweenness": 500, "closeness": 0.0001, "clustering": 0.1}
    out = {}
    for metric, width in widths.items():
        values = list(report.values(metric).values())
        if metric == "closeness":
            out[metric] = _closeness_histogram(values)
        elif metric == "clustering":
            out[metric] = histogram(values, edges=[i / 10 for i in range(11)], metric=metric)
        else:
            out[metric] = histogram(values, bin_width=width, metric=metric)
    return out


def _closeness_histogram(values: Sequence[float]) -> Histogram:
    # decimal-aligned edges keep bin boundaries free of float drift
    finite = [v for v in values if not math.isnan(v)]
    lo = math.floor(min(finite) * 10000)
    hi = math.ceil(max(finite) * 10000)
    if hi == lo:
        hi += 1
    return histogram(finite, edges=[k / 10000 for k in range(lo, hi + 1)], metric="closeness")
