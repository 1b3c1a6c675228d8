"""Command line entry point: ``cricnet <stage> [options]``.

Every stage reads and writes files under ``--out`` so it can be rerun on its
own. Data goes to files and stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import datetime as dt
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import graph as graph_mod
from . import ingest, metrics, models, selection
from .errors import CricnetError

log = logging.getLogger("cricnet")


@dataclass(frozen=True)
class RunConfig:
    output_dir: Path
    archive_dir: Path | None = None
    registry_csv: Path | None = None
    enrichment_csv: Path | None = None
    supplement_dir: Path | None = None
    squad_csv: Path | None = None
    seed: int = 0
    ws_rewire_p: float = models.DEFAULT_WS_P
    model_runs: int = models.DEFAULT_RUNS
    as_of_date: dt.date = selection.EligibilityRules().as_of_date
    metrics: tuple[str, ...] = tuple(m.value for m in selection.Metric)
    clustering: str = "fagiolo"

    def __post_init__(self):
        if self.model_runs < 1:
            raise CricnetError("--runs must be >= 1")


def _require(path: Path | None, flag: str) -> Path:
    if path is None:
        raise CricnetError(f"{flag} is required for this command")
    if not path.exists():
        raise CricnetError(f"{flag}: file not found: {path}")
    return path


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _load_graph(cfg: RunConfig):
    matches, players, index = ingest.load_dataset(cfg.output_dir)
    labels = {p.player_id: p.display_name for p in players}
    return graph_mod.build_network(index, matches, labels=labels), players, index


def cmd_ingest(cfg: RunConfig) -> str:
    archive = _require(cfg.archive_dir, "--archive")
    matches = ingest.load_matches(archive, cfg.supplement_dir)
    index = ingest.build_index(matches)
    registry = []
    if cfg.registry_csv is not None:
        registry = ingest.parse_registry(_require(cfg.registry_csv, "--registry").read_text(encoding="utf-8-sig"))
    players = ingest.resolve_players(index, matches, registry)
    ingest.save_dataset(cfg.output_dir, matches, players, index)
    return f"{len(matches)} matches, {len(index)} players"


def cmd_analyze(cfg: RunConfig) -> str:
    graph, _, _ = _load_graph(cfg)
    report = metrics.compute_report(graph, clustering_mode=cfg.clustering)
    out = cfg.output_dir
    _write(out / "metrics.csv", report.to_csv())
    _write(out / "metrics.json", report.to_json())
    for name, hist in metrics.default_histograms(report).items():
        _write(out / "histograms" / f"{name}.csv", hist.to_csv())
    _write(out / "graph.dot", graph_mod.export_dot(graph, name="psl"))
    _write(out / "edges.csv", graph_mod.export_edgelist(graph))
    summary = {**graph.summary(), **report.graph_stats()}
    _write(out / "summary.json", selection.dumps(summary))
    return (
        f"N={graph.n} directed_edges={graph.directed_edge_count} "
        f"avg_path_length={report.avg_path_length:.2f} ln_N={report.ln_n:.2f} "
        f"global_clustering={report.global_clustering:.4f}"
    )


def cmd_compare_models(cfg: RunConfig) -> str:
    graph, _, _ = _load_graph(cfg)
    specs = models.matched_specs(graph, seed=cfg.seed, ws_rewire_p=cfg.ws_rewire_p)
    report = models.compare(graph, specs, runs=cfg.model_runs)
    out = cfg.output_dir
    _write(out / "comparison.csv", report.to_csv())
    _write(out / "comparison.json", report.to_json())
    for row in (*report.models, report.reference):
        _write(out / "histograms" / f"degree_{row.label}.csv", row.degree_histogram.to_csv())
    lines = [f"ln(N) = {report.ln_n:.2f}"]
    for row in (*report.models, report.reference):
        lines.append(
            f"{row.label:>4}  path={row.avg_path_length.mean:.3f}±{row.avg_path_length.sd:.3f}  "
            f"clustering={row.global_clustering.mean:.4f}±{row.global_clustering.sd:.4f}"
        )
    lines.append(f"closest path length: {report.closest_path_length}; "
                 f"closest clustering: {report.closest_clustering}")
    return "\n".join(lines)


def _selection_inputs(cfg: RunConfig):
    enrichment_path = _require(cfg.enrichment_csv, "--enrichment")
    matches, players, index = ingest.load_dataset(cfg.output_dir)
    metrics_path = cfg.output_dir / "metrics.json"
    if not metrics_path.exists():
        raise CricnetError(f"{metrics_path} not found; run `cricnet analyze` first")
    report = metrics.MetricReport.from_json(metrics_path.read_text(encoding="utf-8"))
    enrichment = ingest.parse_enrichment(enrichment_path.read_text(encoding="utf-8-sig"))
    players = ingest.apply_enrichment(players, enrichment)
    rules = selection.EligibilityRules(as_of_date=cfg.as_of_date)
    eligible = selection.filter_eligible(players, rules)
    names = {p.player_id: p.display_name for p in players}
    rankings = {
        m: selection.rank_by(report, eligible, m, players, index.total_matches)
        for m in selection.Metric
    }
    return players, names, rankings


def cmd_rank(cfg: RunConfig) -> str:
    _, names, rankings = _selection_inputs(cfg)
    chunks = []
    for m in cfg.metrics:
        text = selection.rankings_to_csv(rankings[selection.Metric(m)], names)
        _write(cfg.output_dir / "rankings" / f"{m}.csv", text)
        chunks.append(text)
    return "".join(chunks).rstrip("\n")


def cmd_form_teams(cfg: RunConfig) -> str:
    players, names, rankings = _selection_inputs(cfg)
    teams = [selection.form_team(rankings[selection.Metric(m)]) for m in cfg.metrics]
    out = cfg.output_dir
    _write(out / "teams.csv", selection.teams_to_csv(teams, names))
    _write(out / "teams.json", selection.dumps([t.to_dict() for t in teams]))
    text = selection.format_teams(teams, names)
    if cfg.squad_csv is not None:
        text += "\n" + _diff(cfg, players, names, rankings)
    return text.rstrip("\n")


def _diff(cfg: RunConfig, players, names, rankings) -> str:
    squad_path = _require(cfg.squad_csv, "--squad")
    squad = selection.load_squad(squad_path.read_text(encoding="utf-8-sig"), players)
    teams = [selection.form_team(rankings[m]) for m in selection.CENTRALITY_METRICS]
    diff = selection.diff_squad(
        teams, squad,
        known_ids=[p.player_id for p in players],
        rankings=[rankings[m] for m in selection.CENTRALITY_METRICS],
    )
    _write(cfg.output_dir / "squad_diff.json", selection.dumps(diff.to_dict()))
    lines = [
        f"{len(diff.team_ids)} distinct players across the centrality teams",
        f"{len(diff.included)} included / {len(diff.excluded_from_teams)} excluded",
    ]
    for pid in diff.excluded_from_teams:
        ranks = ", ".join(
            f"{metric} #{r['role']} in role" for metric, r in diff.near_miss[pid].items()
        )
        lines.append(f"  excluded: {names.get(pid, pid)} ({ranks})")
    return "\n".join(lines) + "\n"


def cmd_diff_squad(cfg: RunConfig) -> str:
    _require(cfg.squad_csv, "--squad")
    players, names, rankings = _selection_inputs(cfg)
    return _diff(cfg, players, names, rankings).rstrip("\n")


COMMANDS = {
    "ingest": cmd_ingest,
    "analyze": cmd_analyze,
    "compare-models": cmd_compare_models,
    "rank": cmd_rank,
    "form-team": cmd_form_teams,
    "diff-squad": cmd_diff_squad,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cricnet", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *flags):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", type=Path, default=Path("out"), help="dataset and output directory")
        for flag in flags:
            flag(p)
        return p

    def archive(p):
        p.add_argument("--archive", type=Path, required=True, help="directory of Cricsheet match JSON")
        p.add_argument("--registry", type=Path, help="Cricsheet people.csv")
        p.add_argument("--supplement", type=Path, help="directory of hand-made match JSON")

    def clustering(p):
        p.add_argument("--clustering", choices=metrics.CLUSTERING_MODES, default="fagiolo")

    def model_opts(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--ws-p", type=float, default=models.DEFAULT_WS_P, dest="ws_p")
        p.add_argument("--runs", type=int, default=models.DEFAULT_RUNS)

    def select_opts(p):
        p.add_argument("--enrichment", type=Path, required=True, help="curated roles/eligibility CSV")
        p.add_argument("--as-of", type=dt.date.fromisoformat, default=RunConfig.as_of_date, dest="as_of")

    def metric_opt(p):
        p.add_argument("--metric", choices=[m.value for m in selection.Metric],
                       help="single metric (default: all four)")

    def squad(required):
        def inner(p):
            p.add_argument("--squad", type=Path, required=required, help="official squad CSV")
        return inner

    add("ingest", "parse the archive into canonical dataset files", archive)
    add("analyze", "compute metrics, histograms and graph exports", clustering)
    add("compare-models", "compare against ER, WS and BA reference graphs", model_opts)
    add("rank", "rank eligible players per metric", select_opts, metric_opt)
    add("form-team", "form role-constrained 18-player teams", select_opts, metric_opt, squad(False))
    add("diff-squad", "compare the centrality teams with an official squad", select_opts, squad(True))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    get = lambda name, default=None: getattr(args, name, default)  # noqa: E731
    metric = get("metric")
    return RunConfig(
        output_dir=args.out,
        archive_dir=get("archive"),
        registry_csv=get("registry"),
        enrichment_csv=get("enrichment"),
        supplement_dir=get("supplement"),
        squad_csv=get("squad"),
        seed=get("seed", 0),
        ws_rewire_p=get("ws_p", models.DEFAULT_WS_P),
        model_runs=get("runs", models.DEFAULT_RUNS),
        as_of_date=get("as_of", RunConfig.as_of_date),
        metrics=(metric,) if metric else tuple(m.value for m in selection.Metric),
        clustering=get("clustering", "fagiolo"),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = config_from_args(args)
        message = COMMANDS[args.command](cfg)
    except CricnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if message:
        print(message)
    return 0


if __name__ == "__main__":
    sys.exit(main())
