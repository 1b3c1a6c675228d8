"""Cricsheet match archives and people registry -> canonical records.

Participation is defined by the playing XI listed in ``info.players``;
names that only occur inside deliveries (substitute fielders, etc.) are
ignored.
"""
from __future__ import annotations

import csv
import datetime as dt
import io
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    DuplicateIdentifierError,
    IngestError,
    LineupError,
    MatchConflictError,
    MatchParseError,
    RegistryRowError,
    UnresolvedIdentityError,
)

log = logging.getLogger(__name__)

LINEUP_SIZE = 11


class Role(str, Enum):
    BAT = "BAT"
    BALL = "BALL"
    WK = "WK"
    ALL = "ALL"

    @classmethod
    def parse(cls, text: str) -> "Role":
        key = text.strip().upper().replace("-", "").replace(" ", "").replace("_", "")
        try:
            return _ROLE_ALIASES[key]
        except KeyError:
            raise ValueError(f"unknown role {text!r}") from None


_ROLE_ALIASES = {
    "BAT": Role.BAT, "BATTER": Role.BAT, "BATSMAN": Role.BAT,
    "BALL": Role.BALL, "BOWL": Role.BALL, "BOWLER": Role.BALL,
    "WK": Role.WK, "WICKETKEEPER": Role.WK, "KEEPER": Role.WK,
    "ALL": Role.ALL, "ALLROUNDER": Role.ALL, "AR": Role.ALL,
}


@dataclass(frozen=True)
class MatchRecord:
    match_id: str
    date: dt.date
    season: str
    teams: tuple[str, str]
    lineups: Mapping[str, tuple[str, ...]]
    # registry id -> name as printed in this match file
    names: Mapping[str, str] = field(default_factory=dict, compare=False)

    def players(self) -> frozenset[str]:
        return frozenset(pid for lineup in self.lineups.values() for pid in lineup)

    def to_dict(self) -> dict:
        return {
            "match_id": self.match_id,
            "date": self.date.isoformat(),
            "season": self.season,
            "teams": list(self.teams),
            "lineups": {team: list(self.lineups[team]) for team in self.teams},
            "names": dict(sorted(self.names.items())),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "MatchRecord":
        teams = tuple(d["teams"])
        return cls(
            match_id=d["match_id"],
            date=dt.date.fromisoformat(d["date"]),
            season=str(d["season"]),
            teams=teams,
            lineups={t: tuple(d["lineups"][t]) for t in teams},
            names=dict(d.get("names", {})),
        )


@dataclass(frozen=True)
class PlayerRecord:
    player_id: str
    display_name: str
    aliases: tuple[str, ...] = ()
    # None until the enrichment sidecar has been applied
    role: Role | None = None
    nationality: str = ""
    birth_date: dt.date | None = None
    last_intl_t20: dt.date | None = None
    retired_intl_t20: bool = False
    banned: bool = False

    def to_dict(self) -> dict:
        return {
            "player_id": self.player_id,
            "display_name": self.display_name,
            "aliases": list(self.aliases),
            "role": self.role.value if self.role else None,
            "nationality": self.nationality,
            "birth_date": _iso(self.birth_date),
            "last_intl_t20": _iso(self.last_intl_t20),
            "retired_intl_t20": self.retired_intl_t20,
            "banned": self.banned,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "PlayerRecord":
        return cls(
            player_id=d["player_id"],
            display_name=d["display_name"],
            aliases=tuple(d.get("aliases", ())),
            role=Role(d["role"]) if d.get("role") else None,
            nationality=d.get("nationality", ""),
            birth_date=_date_or_none(d.get("birth_date")),
            last_intl_t20=_date_or_none(d.get("last_intl_t20")),
            retired_intl_t20=bool(d.get("retired_intl_t20", False)),
            banned=bool(d.get("banned", False)),
        )


@dataclass(frozen=True)
class ParticipationIndex:
    """Match set of every player who appears in at least one lineup."""

    match_sets: Mapping[str, frozenset[str]]

    @property
    def total_matches(self) -> dict[str, int]:
        return {pid: len(ms) for pid, ms in self.match_sets.items()}

    def players(self) -> list[str]:
        return sorted(self.match_sets)

    def __len__(self) -> int:
        return len(self.match_sets)

    def to_dict(self) -> dict:
        return {
            pid: {"matches": sorted(ms), "total_matches": len(ms)}
            for pid, ms in sorted(self.match_sets.items())
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ParticipationIndex":
        return cls({pid: frozenset(v["matches"]) for pid, v in d.items()})


def _iso(d: dt.date | None) -> str | None:
    return d.isoformat() if d else None


def _date_or_none(text) -> dt.date | None:
    if text is None:
        return None
    text = str(text).strip()
    return dt.date.fromisoformat(text) if text else None


def _parse_bool(text: str | None) -> bool:
    if text is None:
        return False
    value = text.strip().lower()
    if value in ("", "0", "false", "no", "n"):
        return False
    if value in ("1", "true", "yes", "y"):
        return True
    raise ValueError(f"not a boolean: {text!r}")


# --------------------------------------------------------------------------
# matches


def parse_match(raw: str | bytes | Mapping, source: str | Path = "<memory>") -> MatchRecord:
    """Parse one Cricsheet JSON match document.

    ``source`` is the originating file path; its stem becomes the match id.
    Raises :class:`MatchParseError`, :class:`LineupError` or
    :class:`UnresolvedIdentityError`.
    """
    source = Path(source)
    if isinstance(raw, (str, bytes)):
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MatchParseError(source, f"malformed JSON ({exc})") from exc
    else:
        doc = raw

    try:
        info = doc["info"]
        teams = tuple(info["teams"])
        players = info["players"]
        people = info["registry"]["people"]
        dates = info["dates"]
    except (KeyError, TypeError) as exc:
        raise MatchParseError(source, f"missing info field {exc}") from exc
    if len(teams) != 2 or teams[0] == teams[1]:
        raise MatchParseError(source, f"expected two distinct teams, got {list(teams)}")
    if not dates:
        raise MatchParseError(source, "no match date")
    try:
        date = dt.date.fromisoformat(str(dates[0]))
    except ValueError as exc:
        raise MatchParseError(source, f"bad date {dates[0]!r}") from exc

    lineups: dict[str, tuple[str, ...]] = {}
    names: dict[str, str] = {}
    unresolved = set()
    for team in teams:
        roster = players.get(team)
        if roster is None:
            raise LineupError(source, team, "is missing")
        if len(roster) != LINEUP_SIZE:
            raise LineupError(source, team, f"has {len(roster)} players, expected {LINEUP_SIZE}")
        ids = []
        for name in roster:
            pid = people.get(name)
            if not pid:
                unresolved.add(name)
                continue
            ids.append(pid)
            names[pid] = name
        lineups[team] = tuple(ids)
    if unresolved:
        raise UnresolvedIdentityError(unresolved, where=str(source))

    for team, ids in lineups.items():
        if len(set(ids)) != LINEUP_SIZE:
            raise LineupError(source, team, "contains a repeated player")
    overlap = set(lineups[teams[0]]) & set(lineups[teams[1]])
    if overlap:
        raise LineupError(source, teams[1], f"shares players with {teams[0]!r}: {sorted(overlap)}")

    season = info.get("season", date.year)
    return MatchRecord(
        match_id=source.stem,
        date=date,
        season=str(season),
        teams=teams,
        lineups=lineups,
        names=names,
    )


def load_match_file(path: str | Path) -> MatchRecord:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise MatchParseError(path, str(exc)) from exc
    return parse_match(raw, source=path)


def load_archive(directory: str | Path) -> list[MatchRecord]:
    """Parse every ``*.json`` file in ``directory``, sorted by match id."""
    directory = Path(directory)
    if not directory.is_dir():
        raise IngestError(f"archive directory not found: {directory}")
    files = sorted(directory.glob("*.json"))
    if not files:
        raise IngestError(f"no match files (*.json) in {directory}")
    return sorted((load_match_file(p) for p in files), key=lambda m: m.match_id)


def load_supplement(
    raw: str | bytes | Mapping,
    existing_ids: Iterable[str] = (),
    source: str | Path = "<memory>",
) -> MatchRecord:
    """Parse a manually authored match file and check it against the archive ids."""
    match = parse_match(raw, source=source)
    if match.match_id in set(existing_ids):
        raise MatchConflictError(match.match_id)
    return match


def load_matches(archive_dir: str | Path, supplement_dir: str | Path | None = None) -> list[MatchRecord]:
    matches = load_archive(archive_dir)
    if supplement_dir is not None:
        seen = {m.match_id for m in matches}
        for path in sorted(Path(supplement_dir).glob("*.json")):
            extra = load_supplement(path.read_bytes(), seen, source=path)
            seen.add(extra.match_id)
            matches.append(extra)
        matches.sort(key=lambda m: m.match_id)
    return matches


def build_index(matches: Iterable[MatchRecord]) -> ParticipationIndex:
    sets: dict[str, set[str]] = defaultdict(set)
    for match in matches:
        for pid in match.players():
            sets[pid].add(match.match_id)
    return ParticipationIndex({pid: frozenset(ms) for pid, ms in sorted(sets.items())})


# --------------------------------------------------------------------------
# registry and enrichment


def _reader(raw) -> csv.DictReader:
    if isinstance(raw, (str, bytes)):
        text = raw.decode("utf-8-sig") if isinstance(raw, bytes) else raw
        raw = io.StringIO(text)
    return csv.DictReader(raw)


def parse_registry(raw) -> list[PlayerRecord]:
    """Read the Cricsheet people registry (``identifier,name,unique_name,...``).

    Players sharing a display name stay distinct as long as their identifiers
    differ. A repeated identifier is an error rather than a silent merge.
    """
    reader = _reader(raw)
    if reader.fieldnames is None:
        return []
    if "identifier" not in reader.fieldnames:
        raise RegistryRowError(1, "header has no 'identifier' column")

    records: dict[str, PlayerRecord] = {}
    duplicates = set()
    for row in reader:
        pid = (row.get("identifier") or "").strip()
        if not pid:
            raise RegistryRowError(reader.line_num, "blank identifier")
        if pid in records:
            duplicates.add(pid)
            continue
        name = (row.get("name") or "").strip()
        unique = (row.get("unique_name") or "").strip()
        display = unique or name or pid
        aliases = tuple(dict.fromkeys(a for a in (name, unique) if a))
        records[pid] = PlayerRecord(player_id=pid, display_name=display, aliases=aliases)
    if duplicates:
        raise DuplicateIdentifierError(duplicates)
    return list(records.values())


@dataclass(frozen=True)
class Enrichment:
    role: Role | None
    nationality: str
    birth_date: dt.date | None
    last_intl_t20: dt.date | None
    retired: bool
    banned: bool


def parse_enrichment(raw) -> dict[str, Enrichment]:
    """Read the curated sidecar with roles, nationality and eligibility facts."""
    reader = _reader(raw)
    out: dict[str, Enrichment] = {}
    if reader.fieldnames is None:
        return out
    if "identifier" not in reader.fieldnames:
        raise RegistryRowError(1, "header has no 'identifier' column")
    for row in reader:
        line = reader.line_num
        pid = (row.get("identifier") or "").strip()
        if not pid:
            raise RegistryRowError(line, "blank identifier")
        if pid in out:
            raise DuplicateIdentifierError([pid])
        try:
            role_text = (row.get("role") or "").strip()
            out[pid] = Enrichment(
                role=Role.parse(role_text) if role_text else None,
                nationality=(row.get("nationality") or "").strip(),
                birth_date=_date_or_none(row.get("birth_date")),
                last_intl_t20=_date_or_none(row.get("last_intl_t20")),
                retired=_parse_bool(row.get("retired")),
                banned=_parse_bool(row.get("banned")),
            )
        except ValueError as exc:
            raise RegistryRowError(line, str(exc)) from exc
    return out


def apply_enrichment(players: Iterable[PlayerRecord], enrichment: Mapping[str, Enrichment]) -> list[PlayerRecord]:
    out = []
    for p in players:
        e = enrichment.get(p.player_id)
        if e is None:
            out.append(p)
            continue
        out.append(replace(
            p,
            role=e.role,
            nationality=e.nationality,
            birth_date=e.birth_date,
            last_intl_t20=e.last_intl_t20,
            retired_intl_t20=e.retired,
            banned=e.banned,
        ))
    return out


def resolve_players(
    index: ParticipationIndex,
    matches: Iterable[MatchRecord],
    registry: Iterable[PlayerRecord] = (),
) -> list[PlayerRecord]:
    """One record per indexed player, preferring registry data over match names."""
    by_id = {p.player_id: p for p in registry}
    seen_names: dict[str, str] = {}
    for m in matches:
        seen_names.update(m.names)
    out = []
    missing = []
    for pid in index.players():
        rec = by_id.get(pid)
        if rec is None:
            missing.append(pid)
            name = seen_names.get(pid, pid)
            rec = PlayerRecord(player_id=pid, display_name=name, aliases=(name,))
        out.append(rec)
    if missing and by_id:
        log.warning("%d player(s) absent from the registry CSV; using match-file names", len(missing))
    return out


def find_by_name(players: Iterable[PlayerRecord], name: str) -> list[PlayerRecord]:
    key = name.strip().casefold()
    return [
        p for p in players
        if p.display_name.casefold() == key or any(a.casefold() == key for a in p.aliases)
    ]


def write_json(path: str | Path, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def save_dataset(out_dir: str | Path, matches, players, index) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_json(out_dir / "matches.json", [m.to_dict() for m in matches])
    write_json(out_dir / "players.json", [p.to_dict() for p in players])
    write_json(out_dir / "index.json", index.to_dict())


def load_dataset(out_dir: str | Path):
    out_dir = Path(out_dir)
    paths = [out_dir / n for n in ("matches.json", "players.json", "index.json")]
    missing = [p for p in paths if not p.exists()]
    if missing:
        raise IngestError(
            f"canonical dataset not found ({', '.join(str(p) for p in missing)}); run `cricnet ingest` first"
        )
    matches = [MatchRecord.from_dict(d) for d in json.loads(paths[0].read_text(encoding="utf-8"))]
    players = [PlayerRecord.from_dict(d) for d in json.loads(paths[1].read_text(encoding="utf-8"))]
    index = ParticipationIndex.from_dict(json.loads(paths[2].read_text(encoding="utf-8")))
    return matches, players, index
