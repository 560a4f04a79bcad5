import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            num, title = mark.args
            _criteria.setdefault(num, {"title": title, "outcomes": []})
            item.user_properties.append(("criterion", num))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    num = props.get("criterion")
    if num is None:
        return
    if "note" in props and report.when == "call":
        _criteria[num].setdefault("notes", []).append(props["note"])
    if report.when == "call" or report.outcome != "passed":
        _criteria[num]["outcomes"].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_criteria):
        c = _criteria[num]
        if not c["outcomes"]:
            verdict = "NOT RUN"
        elif all(o == "passed" for o in c["outcomes"]):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        tr.write_line(f"criterion {num:2d}: {verdict}  {c['title']}")
        for note in c.get("notes", []):
            tr.write_line(f"               {note}")
