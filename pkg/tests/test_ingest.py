import datetime as dt
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cricnet.errors import (
    DuplicateIdentifierError,
    IngestError,
    LineupError,
    MatchConflictError,
    MatchParseError,
    RegistryRowError,
    UnresolvedIdentityError,
)
from cricnet.ingest import (
    MatchRecord,
    Role,
    apply_enrichment,
    build_index,
    load_archive,
    load_dataset,
    load_matches,
    load_supplement,
    parse_enrichment,
    parse_match,
    parse_registry,
    resolve_players,
    save_dataset,
)
from helpers import match_doc, xi


def two_xi(date="2016-02-11"):
    return match_doc({"Peshawar Zalmi": xi("pz"), "Karachi Kings": xi("kk")}, date=date, season="2015/16")


class TestParseMatch:
    def test_full_registry_gives_22_ids(self):
        m = parse_match(json.dumps(two_xi()), source="archive/987654.json")
        assert m.match_id == "987654"
        assert m.date == dt.date(2016, 2, 11)
        assert m.season == "2015/16"
        assert m.teams == ("Peshawar Zalmi", "Karachi Kings")
        assert len(m.players()) == 22
        assert m.lineups["Karachi Kings"][0] == "id-kk0"
        assert m.names["id-pz3"] == "pz3"

    def test_first_date_wins(self):
        doc = two_xi()
        doc["info"]["dates"] = ["2017-03-01", "2017-03-02"]
        assert parse_match(doc).date == dt.date(2017, 3, 1)

    def test_ten_man_lineup_rejected(self):
        doc = match_doc({"A": xi("a", 10), "B": xi("b")})
        with pytest.raises(LineupError, match="'A'"):
            parse_match(doc, source="x.json")

    def test_unresolved_name_listed(self):
        doc = two_xi()
        del doc["info"]["registry"]["people"]["kk4"]
        with pytest.raises(UnresolvedIdentityError) as exc:
            parse_match(doc, source="x.json")
        assert exc.value.names == ["kk4"]

    def test_malformed_json_names_the_file(self):
        with pytest.raises(MatchParseError, match="broken.json"):
            parse_match("{not json", source="dir/broken.json")

    def test_missing_info_fields(self):
        with pytest.raises(MatchParseError):
            parse_match({"info": {"teams": ["A", "B"]}})

    def test_shared_player_between_lineups_rejected(self):
        people = {n: f"id-{n}" for n in xi("a") + xi("b")}
        people["b0"] = "id-a0"
        doc = match_doc({"A": xi("a"), "B": xi("b")}, people=people)
        with pytest.raises(LineupError, match="shares"):
            parse_match(doc)

    def test_repeated_player_rejected(self):
        names = xi("a", 10) + ["a0"]
        doc = match_doc({"A": names, "B": xi("b")})
        with pytest.raises(LineupError, match="repeated"):
            parse_match(doc)

    def test_roundtrip_dict(self):
        m = parse_match(two_xi(), source="1.json")
        assert MatchRecord.from_dict(m.to_dict()) == m


class TestRegistry:
    def test_same_name_distinct_ids(self):
        text = "identifier,name,unique_name\nabc1,Mohammad Irfan,Mohammad Irfan\nabc2,Mohammad Irfan,Mohammad Irfan (5)\n"
        recs = parse_registry(text)
        assert [r.player_id for r in recs] == ["abc1", "abc2"]
        assert recs[1].display_name == "Mohammad Irfan (5)"
        assert recs[1].aliases == ("Mohammad Irfan", "Mohammad Irfan (5)")

    def test_empty_body(self):
        assert parse_registry("identifier,name,unique_name\n") == []
        assert parse_registry("") == []

    def test_blank_identifier_reports_line(self):
        text = "identifier,name,unique_name\nabc1,A,A\n,B,B\n"
        with pytest.raises(RegistryRowError) as exc:
            parse_registry(text)
        assert exc.value.line == 3

    def test_duplicate_identifier(self):
        text = "identifier,name,unique_name\nabc1,A,A\nabc1,A2,A2\n"
        with pytest.raises(DuplicateIdentifierError, match="abc1"):
            parse_registry(text)

    def test_enrichment_applied(self):
        recs = parse_registry("identifier,name,unique_name\nabc1,A,A\nabc2,B,B\n")
        enr = parse_enrichment(
            "identifier,role,nationality,birth_date,last_intl_t20,retired,banned\n"
            "abc1,Bowler,Pakistan,1995-04-01,2022-09-20,no,0\n"
        )
        out = apply_enrichment(recs, enr)
        assert out[0].role is Role.BALL
        assert out[0].birth_date == dt.date(1995, 4, 1)
        assert out[0].retired_intl_t20 is False
        assert out[1].role is None

    def test_enrichment_bad_role(self):
        with pytest.raises(RegistryRowError, match="line 2"):
            parse_enrichment("identifier,role\nabc1,goalkeeper\n")


class TestSupplementAndArchive:
    def test_supplement_raises_count(self, tmp_path):
        archive = tmp_path / "archive"
        archive.mkdir()
        for k in range(3):
            (archive / f"{k}.json").write_text(json.dumps(two_xi(f"2016-02-0{k + 1}")))
        supp = tmp_path / "supp"
        supp.mkdir()
        (supp / "psl_2016_pz_kk.json").write_text(json.dumps(two_xi()))
        assert len(load_matches(archive)) == 3
        merged = load_matches(archive, supp)
        assert len(merged) == 4
        assert [m.match_id for m in merged] == sorted(m.match_id for m in merged)

    def test_duplicate_match_id_conflicts(self):
        with pytest.raises(MatchConflictError):
            load_supplement(two_xi(), existing_ids={"42"}, source="42.json")

    def test_empty_supplement_dir_is_identity(self, tmp_path):
        archive = tmp_path / "archive"
        archive.mkdir()
        (archive / "1.json").write_text(json.dumps(two_xi()))
        (tmp_path / "supp").mkdir()
        assert load_matches(archive, tmp_path / "supp") == load_matches(archive)

    def test_empty_archive_errors(self, tmp_path):
        with pytest.raises(IngestError, match="no match files"):
            load_archive(tmp_path)

    def test_order_independent(self, league):
        a = load_archive(league["archive"])
        b = load_archive(league["archive"])
        assert a == b
        assert [m.match_id for m in a] == sorted(m.match_id for m in a)


class TestIndex:
    def test_single_match(self):
        idx = build_index([parse_match(two_xi(), source="m1.json")])
        assert len(idx) == 22
        assert set(idx.total_matches.values()) == {1}

    def test_hand_enumerated_match_sets(self):
        # A plays m1, m2; B plays m2, m3
        m1 = match_doc({"X": ["A"] + xi("x", 10), "Y": xi("y")})
        m2 = match_doc({"X": ["A", "B"] + xi("x", 9), "Y": xi("y")})
        m3 = match_doc({"X": ["B"] + xi("x", 10), "Y": xi("y")})
        matches = [parse_match(d, source=f"m{i}.json") for i, d in enumerate((m1, m2, m3), 1)]
        idx = build_index(matches)
        assert idx.match_sets["id-A"] == {"m1", "m2"}
        assert idx.match_sets["id-B"] == {"m2", "m3"}
        assert len(idx.match_sets["id-A"] & idx.match_sets["id-B"]) == 1

    def test_participation_sum(self, league):
        matches = load_archive(league["archive"])
        idx = build_index(matches)
        assert sum(idx.total_matches.values()) == 22 * len(matches)
        known = {m.match_id for m in matches}
        assert all(ms <= known and len(ms) >= 1 for ms in idx.match_sets.values())

    def test_dataset_roundtrip(self, league, tmp_path):
        matches = load_archive(league["archive"])
        idx = build_index(matches)
        players = resolve_players(idx, matches, parse_registry(league["registry"].read_text()))
        save_dataset(tmp_path / "ds", matches, players, idx)
        m2, p2, i2 = load_dataset(tmp_path / "ds")
        assert m2 == matches and p2 == players and i2 == idx

    def test_missing_dataset_guidance(self, tmp_path):
        with pytest.raises(IngestError, match="cricnet ingest"):
            load_dataset(tmp_path)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.permutations(list(range(30))), min_size=1, max_size=6))
def test_identity_resolution_is_a_function(perms):
    # same (name, registry) pair always resolves to the same id, whatever order
    people = {f"p{k}": f"id{k:02d}" for k in range(30)}
    seen = {}
    for i, perm in enumerate(perms):
        lineups = {"A": [f"p{k}" for k in perm[:11]], "B": [f"p{k}" for k in perm[11:22]]}
        m = parse_match(match_doc(lineups, people=people), source=f"{i}.json")
        for pid, name in m.names.items():
            assert seen.setdefault(name, pid) == pid
