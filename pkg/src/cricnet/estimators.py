"""scikit-learn style wrappers around the pipeline stages.

These let the network metrics and team selection sit inside ordinary
estimator tooling (``get_params``/``set_params``, ``clone``, fitted-state
checks) while the underlying functions stay usable on their own.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import models
from .graph import InteractionGraph, build_network
from .ingest import MatchRecord, PlayerRecord, build_index
from .metrics import CLUSTERING_MODES, MetricReport, compute_report
from .selection import (
    DEFAULT_COMPOSITION,
    EligibilityRules,
    Metric,
    filter_eligible,
    form_team,
    rank_by,
)

FEATURES = ("degree", "betweenness", "closeness", "clustering")


def check_matches(X) -> list[MatchRecord]:
    matches = list(X)
    if not matches:
        raise ValueError("expected at least one MatchRecord")
    bad = [type(m).__name__ for m in matches if not isinstance(m, MatchRecord)]
    if bad:
        raise TypeError(f"expected MatchRecord instances, got {sorted(set(bad))}")
    return matches


def check_graph(X) -> InteractionGraph:
    if not isinstance(X, InteractionGraph):
        raise TypeError(f"expected an InteractionGraph, got {type(X).__name__}")
    if X.n == 0:
        raise ValueError("graph has no nodes")
    return X


class CentralityTransformer(TransformerMixin, BaseEstimator):
    """Fit on matches, transform player ids into metric rows.

    Columns of the transformed array follow ``FEATURES``.
    """

    def __init__(self, clustering="fagiolo", labels=None):
        self.clustering = clustering
        self.labels = labels

    def fit(self, X: Iterable[MatchRecord], y=None):
        if self.clustering not in CLUSTERING_MODES:
            raise ValueError(f"clustering must be one of {CLUSTERING_MODES}")
        matches = check_matches(X)
        self.index_ = build_index(matches)
        self.graph_ = build_network(self.index_, matches, labels=self.labels)
        self.report_ = compute_report(self.graph_, clustering_mode=self.clustering)
        self.n_features_in_ = len(FEATURES)
        return self

    def transform(self, X: Iterable[str]) -> np.ndarray:
        check_is_fitted(self, "report_")
        ids = list(X)
        unknown = [pid for pid in ids if pid not in self.report_]
        if unknown:
            raise KeyError(f"players not in the fitted network: {unknown}")
        return np.array(
            [[getattr(self.report_[pid], f) for f in
              ("degree", "betweenness", "closeness", "local_clustering")] for pid in ids],
            dtype=float,
        ).reshape(len(ids), len(FEATURES))

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X, y).transform(self.graph_.nodes)

    def get_feature_names_out(self, input_features=None):
        return np.array(FEATURES, dtype=object)


class TeamSelector(BaseEstimator):
    """Rank eligible players by one metric and fill the role quotas."""

    def __init__(self, metric="degree", composition=None, rules=None):
        self.metric = metric
        self.composition = composition
        self.rules = rules

    def fit(self, X: MetricReport, y=None, players: Iterable[PlayerRecord] = ()):
        if not isinstance(X, MetricReport):
            raise TypeError(f"expected a MetricReport, got {type(X).__name__}")
        players = list(players)
        rules = self.rules if self.rules is not None else EligibilityRules()
        self.eligible_ = filter_eligible(players, rules)
        self.ranking_ = rank_by(X, self.eligible_, Metric(self.metric), players)
        self.team_ = form_team(self.ranking_, self.composition or DEFAULT_COMPOSITION)
        return self

    def predict(self, X: Iterable[str]) -> np.ndarray:
        """Selected role for each id, or an empty string when not picked."""
        check_is_fitted(self, "team_")
        role_of = {pid: role.value for role, pid in self.team_.rows()}
        return np.array([role_of.get(pid, "") for pid in X], dtype=object)


class ModelComparison(BaseEstimator):
    """Fit on an observed graph; ``report_`` holds the ER/WS/BA comparison."""

    def __init__(self, seed=0, runs=models.DEFAULT_RUNS, ws_rewire_p=models.DEFAULT_WS_P, label="PSL"):
        self.seed = seed
        self.runs = runs
        self.ws_rewire_p = ws_rewire_p
        self.label = label

    def fit(self, X: InteractionGraph, y=None):
        graph = check_graph(X)
        specs = models.matched_specs(graph, seed=self.seed, ws_rewire_p=self.ws_rewire_p)
        self.report_ = models.compare(graph, specs, runs=self.runs, label=self.label)
        return self
