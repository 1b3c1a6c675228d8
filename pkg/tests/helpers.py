"""Synthetic Cricsheet fixtures and independent oracles for the test suite."""
from __future__ import annotations

import csv
import datetime as dt
import itertools
import json
import random
from pathlib import Path

from cricnet.graph import from_pairs


def match_doc(lineups: dict[str, list[str]], date="2020-02-20", season="2020", people=None):
    """Minimal Cricsheet-style match document; player ids default to ``id-<name>``."""
    names = [n for lineup in lineups.values() for n in lineup]
    if people is None:
        people = {n: f"id-{n}" for n in names}
    return {
        "meta": {"data_version": "1.1.0"},
        "info": {
            "dates": [date] if isinstance(date, str) else list(date),
            "season": season,
            "teams": list(lineups),
            "players": lineups,
            "registry": {"people": people},
        },
        "innings": [],
    }


def xi(prefix: str, n: int = 11) -> list[str]:
    return [f"{prefix}{i}" for i in range(n)]


ROLE_PLAN = ["BAT"] * 5 + ["WK"] * 2 + ["ALL"] * 3 + ["BALL"] * 6


def write_league(root: Path, seed: int = 7, n_teams: int = 4, n_matches: int = 24) -> dict:
    """Write a small random league: archive, registry, enrichment and squad files.

    Every team has a fixed 16-player squad (roles per ``ROLE_PLAN``) and
    fields a random XI from it. Returns the paths and the squads.
    """
    rng = random.Random(seed)
    root = Path(root)
    archive = root / "archive"
    archive.mkdir(parents=True, exist_ok=True)
    teams = [f"Team {chr(65 + t)}" for t in range(n_teams)]
    squads = {t: [f"{t[-1]}{k:02d}" for k in range(len(ROLE_PLAN))] for t in teams}
    # player "A03" -> id "a3f0a03"
    ids = {p: f"a3f0{p.lower()}" for s in squads.values() for p in s}
    start = dt.date(2016, 2, 4)
    for m in range(n_matches):
        home, away = rng.sample(teams, 2)
        lineups = {t: sorted(rng.sample(squads[t], 11)) for t in (home, away)}
        people = {p: ids[p] for lineup in lineups.values() for p in lineup}
        date = (start + dt.timedelta(days=3 * m)).isoformat()
        doc = match_doc(lineups, date=date, season=str(start.year + m // 12), people=people)
        (archive / f"{100000 + m}.json").write_text(json.dumps(doc))

    registry = root / "people.csv"
    with registry.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["identifier", "name", "unique_name"])
        for p, pid in sorted(ids.items()):
            w.writerow([pid, f"Player {p}", f"Player {p}"])

    enrichment = root / "enrichment.csv"
    with enrichment.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["identifier", "role", "nationality", "birth_date", "last_intl_t20", "retired", "banned"])
        for t in teams:
            for k, p in enumerate(squads[t]):
                nat = "Pakistan" if k % 8 != 7 else "England"
                birth = dt.date(1990 + rng.randrange(10), 1 + rng.randrange(12), 1 + rng.randrange(28))
                w.writerow([ids[p], ROLE_PLAN[k], nat, birth.isoformat(), "2021-11-01", "false", "false"])

    squad = root / "squad.csv"
    with squad.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["identifier", "name", "role"])
        for p in squads[teams[0]][:6]:
            w.writerow(["", f"Player {p}", ""])
    return {"root": root, "archive": archive, "registry": registry, "enrichment": enrichment,
            "squad": squad, "squads": squads, "ids": ids}


# ---------------------------------------------------------------------------
# graph corpora and oracles


def random_small_graph(seed: int, max_nodes: int = 7):
    rng = random.Random(seed)
    n = rng.randint(2, max_nodes)
    p = rng.uniform(0.2, 0.9)
    pairs = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
    return from_pairs(n, pairs), n, pairs


def neighbours(n, pairs):
    nb = {v: set() for v in range(n)}
    for a, b in pairs:
        nb[a].add(b)
        nb[b].add(a)
    return nb


def all_simple_paths(nb, s, t):
    out = []

    def walk(path):
        v = path[-1]
        if v == t:
            out.append(tuple(path))
            return
        for w in nb[v]:
            if w not in path:
                walk(path + [w])

    walk([s])
    return out


def betweenness_oracle(n, pairs):
    """Enumerate every simple path, keep the shortest ones per ordered pair."""
    nb = neighbours(n, pairs)
    score = [0.0] * n
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            paths = all_simple_paths(nb, s, t)
            if not paths:
                continue
            shortest = min(len(p) for p in paths)
            best = [p for p in paths if len(p) == shortest]
            for v in range(n):
                if v in (s, t):
                    continue
                score[v] += sum(v in p for p in best) / len(best)
    return score


def floyd_warshall(n, pairs):
    inf = float("inf")
    d = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for a, b in pairs:
        d[a][b] = d[b][a] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def triangle_clustering_oracle(n, pairs):
    nb = neighbours(n, pairs)
    out = []
    for v in range(n):
        k = len(nb[v])
        if k < 2:
            out.append(0.0)
            continue
        links = sum(1 for a, b in itertools.combinations(sorted(nb[v]), 2) if b in nb[a])
        out.append(links / (k * (k - 1) / 2))
    return out
