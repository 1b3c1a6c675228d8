"""Random reference graphs matched to an observed network, and the
small-world comparison built from them."""
from __future__ import annotations

import csv
import io
import json
import math
import statistics
from dataclasses import dataclass, field
from enum import Enum

import networkx as nx

from . import metrics
from .graph import InteractionGraph, from_pairs

DEFAULT_WS_P = 0.05
DEFAULT_RUNS = 10


class ModelKind(str, Enum):
    ER = "ER"
    WS = "WS"
    BA = "BA"


@dataclass(frozen=True)
class ModelSpec:
    kind: ModelKind
    n: int
    target_pairs: int
    ws_rewire_p: float = DEFAULT_WS_P
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        max_pairs = self.n * (self.n - 1) // 2
        if not 0 <= self.target_pairs <= max_pairs:
            raise ValueError(f"target_pairs={self.target_pairs} outside [0, {max_pairs}] for n={self.n}")
        if not 0.0 <= self.ws_rewire_p <= 1.0:
            raise ValueError(f"ws_rewire_p must lie in [0, 1], got {self.ws_rewire_p}")

    def with_seed(self, seed: int) -> "ModelSpec":
        return ModelSpec(self.kind, self.n, self.target_pairs, self.ws_rewire_p, seed)


def _half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def ws_ring_degree(spec: ModelSpec) -> int:
    return 2 * _half_up(spec.target_pairs / spec.n)


def ba_attachment(spec: ModelSpec) -> int:
    return _half_up(spec.target_pairs / spec.n)


def _check_kind(spec: ModelSpec, kind: ModelKind):
    if spec.kind is not kind:
        raise ValueError(f"expected a {kind.value} spec, got {spec.kind.value}")


def gen_er(spec: ModelSpec) -> InteractionGraph:
    """Uniform G(n, m) with exactly ``target_pairs`` pairs."""
    _check_kind(spec, ModelKind.ER)
    g = nx.gnm_random_graph(spec.n, spec.target_pairs, seed=spec.seed)
    return from_pairs(spec.n, g.edges(), prefix="er")


def gen_ws(spec: ModelSpec) -> InteractionGraph:
    """Ring lattice of even degree ``k`` with per-edge rewiring."""
    _check_kind(spec, ModelKind.WS)
    k = ws_ring_degree(spec)
    if k < 2:
        raise ValueError(f"ring degree {k} < 2 for target_pairs={spec.target_pairs}, n={spec.n}")
    if k >= spec.n:
        raise ValueError(f"ring degree {k} must be below n={spec.n}")
    g = nx.watts_strogatz_graph(spec.n, k, spec.ws_rewire_p, seed=spec.seed)
    return from_pairs(spec.n, g.edges(), prefix="ws")


def gen_ba(spec: ModelSpec) -> InteractionGraph:
    """Preferential attachment grown from a complete seed graph of ``m + 1`` nodes."""
    _check_kind(spec, ModelKind.BA)
    m = ba_attachment(spec)
    if m < 1:
        raise ValueError(f"attachment count {m} < 1 for target_pairs={spec.target_pairs}, n={spec.n}")
    if m >= spec.n:
        raise ValueError(f"attachment count {m} must be below n={spec.n}")
    g = nx.barabasi_albert_graph(spec.n, m, seed=spec.seed, initial_graph=nx.complete_graph(m + 1))
    return from_pairs(spec.n, g.edges(), prefix="ba")


GENERATORS = {ModelKind.ER: gen_er, ModelKind.WS: gen_ws, ModelKind.BA: gen_ba}


def generate(spec: ModelSpec) -> InteractionGraph:
    return GENERATORS[spec.kind](spec)


def matched_specs(graph: InteractionGraph, seed: int = 0, ws_rewire_p: float = DEFAULT_WS_P) -> list[ModelSpec]:
    pairs = graph.undirected_pair_count
    return [ModelSpec(kind, graph.n, pairs, ws_rewire_p, seed) for kind in ModelKind]


@dataclass(frozen=True)
class Stat:
    mean: float
    sd: float

    @classmethod
    def of(cls, xs: list[float]) -> "Stat":
        return cls(statistics.fmean(xs), statistics.stdev(xs) if len(xs) > 1 else 0.0)


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    runs: int
    avg_path_length: Stat
    global_clustering: Stat
    mean_local_clustering: Stat
    degree_histogram: metrics.Histogram
    pair_count: Stat = field(default_factory=lambda: Stat(math.nan, math.nan))

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "runs": self.runs,
            "avg_path_length": self.avg_path_length.mean,
            "avg_path_length_sd": self.avg_path_length.sd,
            "global_clustering": self.global_clustering.mean,
            "global_clustering_sd": self.global_clustering.sd,
            "mean_local_clustering": self.mean_local_clustering.mean,
            "mean_local_clustering_sd": self.mean_local_clustering.sd,
            "pair_count": self.pair_count.mean,
        }


@dataclass(frozen=True)
class ComparisonReport:
    reference: ComparisonRow
    models: tuple[ComparisonRow, ...]
    ln_n: float
    closest_path_length: str
    closest_clustering: str

    def row(self, label: str) -> ComparisonRow:
        for r in (self.reference, *self.models):
            if r.label == label:
                return r
        raise KeyError(label)

    def to_csv(self) -> str:
        buf = io.StringIO()
        rows = [r.as_dict() for r in (*self.models, self.reference)]
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v) for k, v in r.items()})
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "ln_N": self.ln_n,
            "closest_path_length": self.closest_path_length,
            "closest_clustering": self.closest_clustering,
            "rows": [r.as_dict() for r in (*self.models, self.reference)],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _measure(graphs: list[InteractionGraph], label: str, bin_width: float) -> ComparisonRow:
    apl, glob, loc, pairs = [], [], [], []
    for g in graphs:
        apl.append(metrics.avg_path_length(g)[0])
        glob.append(metrics.global_clustering(g))
        loc.append(metrics.mean_local_clustering(g))
        pairs.append(float(g.undirected_pair_count))
    # histogram of the first draw so its counts sum to N
    hist = metrics.histogram(metrics.degree(graphs[0]).values(), bin_width=bin_width, metric=f"degree_{label}")
    return ComparisonRow(label, len(graphs), Stat.of(apl), Stat.of(glob), Stat.of(loc), hist, Stat.of(pairs))


def compare(
    reference: InteractionGraph,
    specs: list[ModelSpec],
    runs: int = DEFAULT_RUNS,
    label: str = "PSL",
    bin_width: float = 20,
) -> ComparisonReport:
    """Evaluate every model spec over ``runs`` seeds (``spec.seed + run``)."""
    if not specs:
        raise ValueError("no model specs to compare against")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    ref_row = _measure([reference], label, bin_width)
    rows = []
    for spec in specs:
        graphs = [generate(spec.with_seed(spec.seed + r)) for r in range(runs)]
        rows.append(_measure(graphs, spec.kind.value, bin_width))

    def closest(attr):
        target = getattr(ref_row, attr).mean
        return min(rows, key=lambda r: abs(getattr(r, attr).mean - target)).label

    return ComparisonReport(
        reference=ref_row,
        models=tuple(rows),
        ln_n=math.log(reference.n),
        closest_path_length=closest("avg_path_length"),
        closest_clustering=closest("global_clustering"),
    )
