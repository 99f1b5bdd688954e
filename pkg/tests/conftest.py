import pytest

_results: dict[int, tuple[str, str]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker is not None:
            _results.setdefault(marker.args[0], ("NOT RUN", item.name))


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = next((m for m in getattr(report, "_acceptance", [])), None)
    if marker is None:
        return
    number, name = marker
    status = "PASS" if report.outcome == "passed" else "FAIL"
    previous = _results.get(number, ("PASS", name))[0]
    if previous == "FAIL":
        status = "FAIL"
    _results[number] = (status, name)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        report._acceptance = [(marker.args[0], item.name)]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        status, name = _results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  ({name})")
