import pytest

_criteria: dict[int, list[tuple[str, str]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.outcome != "passed"):
        return
    if rep.when == "call" or rep.outcome != "passed":
        xfail = hasattr(rep, "wasxfail")
        ok = rep.passed and not xfail
        _criteria.setdefault(marker.args[0], []).append((item.name, "pass" if ok else "FAIL"))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        results = _criteria[n]
        status = "PASS" if all(s == "pass" for _, s in results) else "FAIL"
        failed = [name for name, s in results if s != "pass"]
        detail = f" ({', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {n}: {status}{detail}")
