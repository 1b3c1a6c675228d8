"""Eligibility filtering, per-metric rankings and role-constrained team sheets."""
from __future__ import annotations

import csv
import datetime as dt
import io
import json
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import RoleShortfallError, SelectionError, UnresolvedIdentityError
from .ingest import PlayerRecord, Role, find_by_name
from .metrics import MetricReport

log = logging.getLogger(__name__)


class Metric(str, Enum):
    DEGREE = "degree"
    BETWEENNESS = "betweenness"
    CLOSENESS = "closeness"
    CLUSTERING = "clustering"


CENTRALITY_METRICS = (Metric.DEGREE, Metric.BETWEENNESS, Metric.CLOSENESS)

# order used when printing a team sheet
ROLE_ORDER = (Role.BAT, Role.WK, Role.ALL, Role.BALL)
DEFAULT_COMPOSITION: dict[Role, int] = {Role.BAT: 6, Role.WK: 2, Role.ALL: 3, Role.BALL: 7}


@dataclass(frozen=True)
class EligibilityRules:
    as_of_date: dt.date = dt.date(2022, 10, 1)
    max_age: int = 40
    stale_window_min_age: int = 35
    stale_years: int = 5
    require_nationality: str = "Pakistan"

    def __post_init__(self):
        if self.stale_window_min_age >= self.max_age:
            raise ValueError("stale_window_min_age must be below max_age")
        if self.stale_years <= 0:
            raise ValueError("stale_years must be positive")


def age_on(birth: dt.date, when: dt.date) -> int:
    return when.year - birth.year - ((when.month, when.day) < (birth.month, birth.day))


def _years_before(when: dt.date, years: int) -> dt.date:
    try:
        return when.replace(year=when.year - years)
    except ValueError:  # 29 February
        return when.replace(year=when.year - years, day=28)


def eligibility_status(player: PlayerRecord, rules: EligibilityRules) -> str:
    """``"eligible"`` or the first rule the player fails."""
    if player.nationality.casefold() != rules.require_nationality.casefold():
        return "international"
    if player.banned:
        return "banned"
    if player.retired_intl_t20:
        return "retired"
    if player.birth_date is None:
        return "indeterminate"
    age = age_on(player.birth_date, rules.as_of_date)
    if age >= rules.max_age:
        return "over_age"
    if age >= rules.stale_window_min_age:
        cutoff = _years_before(rules.as_of_date, rules.stale_years)
        if player.last_intl_t20 is None or player.last_intl_t20 <= cutoff:
            return "stale"
    return "eligible"


def eligibility_report(players: Iterable[PlayerRecord], rules: EligibilityRules) -> dict[str, str]:
    return {p.player_id: eligibility_status(p, rules) for p in players}


def filter_eligible(players: Iterable[PlayerRecord], rules: EligibilityRules) -> set[str]:
    """Ids of players in the performance pool.

    Players without a birth date are left out and logged.
    """
    status = eligibility_report(players, rules)
    unknown = sorted(pid for pid, s in status.items() if s == "indeterminate")
    if unknown:
        log.warning("eligibility indeterminate (no birth date) for %d player(s): %s",
                    len(unknown), ", ".join(unknown))
    return {pid for pid, s in status.items() if s == "eligible"}


@dataclass(frozen=True)
class RankRow:
    rank: int
    player_id: str
    role: Role
    value: float


@dataclass(frozen=True)
class Ranking:
    metric: Metric
    rows: tuple[RankRow, ...]

    def ids(self) -> list[str]:
        return [r.player_id for r in self.rows]

    def rank_of(self, player_id: str) -> int | None:
        for r in self.rows:
            if r.player_id == player_id:
                return r.rank
        return None

    def role_rank_of(self, player_id: str) -> int | None:
        role = None
        for r in self.rows:
            if r.player_id == player_id:
                role = r.role
        if role is None:
            return None
        same = [r.player_id for r in self.rows if r.role is role]
        return same.index(player_id) + 1


def rank_by(
    report: MetricReport,
    eligible: Iterable[str],
    metric: Metric | str,
    players: Mapping[str, PlayerRecord] | Iterable[PlayerRecord],
    total_matches: Mapping[str, int] | None = None,
) -> Ranking:
    """Descending order of ``metric``; ties go to more matches, then the smaller id."""
    metric = Metric(metric)
    if not isinstance(players, Mapping):
        players = {p.player_id: p for p in players}
    eligible = sorted(set(eligible))
    if not eligible:
        raise SelectionError("no eligible players to rank")
    values = report.values(metric.value)
    missing = [pid for pid in eligible if pid not in values]
    if missing:
        raise SelectionError(f"no {metric.value} value for: {', '.join(missing)}")
    no_role = [pid for pid in eligible if players.get(pid) is None or players[pid].role is None]
    if no_role:
        raise SelectionError(f"no role recorded for: {', '.join(no_role)}")

    def matches(pid):
        if total_matches is not None:
            return total_matches.get(pid, 0)
        return report[pid].matches or 0

    def key(pid):
        v = values[pid]
        v = -math.inf if math.isnan(v) else v
        return (-v, -matches(pid), pid)

    ordered = sorted(eligible, key=key)
    rows = tuple(
        RankRow(rank=i + 1, player_id=pid, role=players[pid].role, value=float(values[pid]))
        for i, pid in enumerate(ordered)
    )
    return Ranking(metric, rows)


@dataclass(frozen=True)
class TeamSheet:
    metric: Metric
    members: Mapping[Role, tuple[str, ...]]

    def ids(self) -> list[str]:
        return [pid for role in ROLE_ORDER for pid in self.members.get(role, ())]

    def composition(self) -> dict[Role, int]:
        return {role: len(self.members.get(role, ())) for role in ROLE_ORDER}

    def rows(self) -> list[tuple[Role, str]]:
        return [(role, pid) for role in ROLE_ORDER for pid in self.members.get(role, ())]

    def to_dict(self) -> dict:
        return {
            "metric": self.metric.value,
            "members": {role.value: list(self.members.get(role, ())) for role in ROLE_ORDER},
        }


def form_team(ranking: Ranking, composition: Mapping[Role, int] | None = None) -> TeamSheet:
    """Top-ranked players of each role until that role's quota is filled."""
    composition = DEFAULT_COMPOSITION if composition is None else composition
    members: dict[Role, tuple[str, ...]] = {}
    for role in ROLE_ORDER:
        need = composition.get(role, 0)
        pool = [r.player_id for r in ranking.rows if r.role is role]
        if len(pool) < need:
            raise RoleShortfallError(role.value, need, len(pool))
        members[role] = tuple(pool[:need])
    return TeamSheet(ranking.metric, members)


@dataclass(frozen=True)
class SquadEntry:
    player_id: str
    name: str
    role: Role | None


def load_squad(raw, players: Iterable[PlayerRecord]) -> list[SquadEntry]:
    """Read an ``identifier,name,role`` squad file.

    A blank identifier is resolved by exact name match against the players,
    which must be unambiguous.
    """
    players = list(players)
    known = {p.player_id for p in players}
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8-sig")
    reader = csv.DictReader(io.StringIO(raw) if isinstance(raw, str) else raw)
    entries, unresolved = [], []
    for row in reader:
        pid = (row.get("identifier") or "").strip()
        name = (row.get("name") or "").strip()
        role_text = (row.get("role") or "").strip()
        if not pid:
            hits = find_by_name(players, name)
            if len(hits) != 1:
                unresolved.append(name or f"<line {reader.line_num}>")
                continue
            pid = hits[0].player_id
        elif pid not in known:
            unresolved.append(pid)
            continue
        entries.append(SquadEntry(pid, name, Role.parse(role_text) if role_text else None))
    if unresolved:
        raise UnresolvedIdentityError(unresolved, where="squad file")
    return entries


@dataclass(frozen=True)
class SquadDiff:
    team_ids: tuple[str, ...]
    official_ids: tuple[str, ...]
    included: tuple[str, ...]
    excluded_from_teams: tuple[str, ...]
    # excluded id -> metric -> {"overall": rank, "role": rank}
    near_miss: Mapping[str, Mapping[str, Mapping[str, int | None]]]

    def to_dict(self) -> dict:
        return {
            "team_ids": list(self.team_ids),
            "official_ids": list(self.official_ids),
            "included": list(self.included),
            "excluded_from_teams": list(self.excluded_from_teams),
            "near_miss": {k: dict(v) for k, v in self.near_miss.items()},
            "summary": f"{len(self.included)} included / {len(self.excluded_from_teams)} excluded",
        }


def diff_squad(
    teams: TeamSheet | Sequence[TeamSheet],
    official: Sequence[SquadEntry | str],
    known_ids: Iterable[str] | None = None,
    rankings: Iterable[Ranking] = (),
) -> SquadDiff:
    """Overlap between the union of ``teams`` and an official squad."""
    if isinstance(teams, TeamSheet):
        teams = [teams]
    official_ids = [e.player_id if isinstance(e, SquadEntry) else e for e in official]
    if not official_ids:
        raise SelectionError("official squad is empty")
    if known_ids is not None:
        known = set(known_ids)
        unknown = [pid for pid in official_ids if pid not in known]
        if unknown:
            raise UnresolvedIdentityError(unknown, where="official squad")
    union = sorted({pid for t in teams for pid in t.ids()})
    union_set = set(union)
    included = [pid for pid in official_ids if pid in union_set]
    excluded = [pid for pid in official_ids if pid not in union_set]
    rankings = list(rankings)
    near = {
        pid: {
            r.metric.value: {"overall": r.rank_of(pid), "role": r.role_rank_of(pid)}
            for r in rankings
        }
        for pid in excluded
    }
    return SquadDiff(tuple(union), tuple(official_ids), tuple(included), tuple(excluded), near)


def format_teams(teams: Sequence[TeamSheet], names: Mapping[str, str] | None = None) -> str:
    """Side-by-side text table, one column per team, rows grouped by role."""
    names = names or {}
    headers = [t.metric.value.capitalize() for t in teams]
    columns = [[f"{names.get(pid, pid)} ({role.value})" for role, pid in t.rows()] for t in teams]
    height = max((len(c) for c in columns), default=0)
    for c in columns:
        c.extend([""] * (height - len(c)))
    widths = [max(len(h), *(len(x) for x in c)) if c else len(h) for h, c in zip(headers, columns)]
    lines = [" | ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("-+-".join("-" * w for w in widths))
    for i in range(height):
        lines.append(" | ".join(c[i].ljust(w) for c, w in zip(columns, widths)))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def teams_to_csv(teams: Sequence[TeamSheet], names: Mapping[str, str] | None = None) -> str:
    names = names or {}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric", "role", "slot", "id", "name"])
    for t in teams:
        slot = 0
        for role, pid in t.rows():
            slot += 1
            writer.writerow([t.metric.value, role.value, slot, pid, names.get(pid, pid)])
    return buf.getvalue()


def rankings_to_csv(ranking: Ranking, names: Mapping[str, str] | None = None) -> str:
    names = names or {}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rank", "id", "name", "role", "value"])
    for r in ranking.rows:
        writer.writerow([r.rank, r.player_id, names.get(r.player_id, r.player_id), r.role.value, repr(r.value)])
    return buf.getvalue()


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
