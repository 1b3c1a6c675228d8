import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import write_league  # noqa: E402

_criteria: dict[str, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, text): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    cid = getattr(report, "criterion", None)
    if cid is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _criteria.setdefault(cid, []).append((status, report.head_line, report.criterion_text))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        rep.criterion = marker.args[0]
        rep.criterion_text = marker.args[1]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")

    def order(cid):
        num = "".join(ch for ch in cid if ch.isdigit())
        return (int(num) if num else 0, cid)

    for cid in sorted(_criteria, key=order):
        results = _criteria[cid]
        statuses = {s for s, _, _ in results}
        overall = "FAIL" if "FAIL" in statuses else ("PASS" if "PASS" in statuses else "SKIP")
        terminalreporter.write_line(f"[{overall}] {cid}: {results[0][2]}")
        if len(results) > 1:
            for status, name, _ in results:
                terminalreporter.write_line(f"         {status:4} {name}")


@pytest.fixture
def league(tmp_path):
    return write_league(tmp_path / "league")


@pytest.fixture(scope="session")
def psl_dir():
    path = os.environ.get("CRICNET_PSL_DIR")
    if not path or not (Path(path) / "archive").is_dir():
        pytest.skip(
            "PSL 2016-2022 archive not available: set CRICNET_PSL_DIR to a directory with "
            "archive/, people.csv, enrichment.csv (and optionally supplement/, squad.csv)"
        )
    return Path(path)
