"""Teammate interaction networks from ball-by-ball cricket data."""

from .errors import CricnetError
from .graph import InteractionGraph, build_network, export_dot, export_edgelist, read_edgelist
from .ingest import (
    MatchRecord,
    ParticipationIndex,
    PlayerRecord,
    Role,
    build_index,
    load_matches,
    load_supplement,
    parse_match,
    parse_registry,
)
from .metrics import (
    MetricReport,
    avg_path_length,
    betweenness,
    closeness,
    compute_report,
    degree,
    global_clustering,
    histogram,
    local_clustering,
)
from .models import ModelKind, ModelSpec, compare, gen_ba, gen_er, gen_ws
from .selection import (
    EligibilityRules,
    Metric,
    diff_squad,
    filter_eligible,
    form_team,
    rank_by,
)

__version__ = "0.1.0"
