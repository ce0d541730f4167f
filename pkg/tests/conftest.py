import pytest

_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.failed):
        prev = _OUTCOMES.get(label, True)
        _OUTCOMES[label] = prev and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_OUTCOMES, key=lambda s: int(s.split()[0][2:])):
        terminalreporter.write_line(f"{'PASS' if _OUTCOMES[label] else 'FAIL'}  {label}")
