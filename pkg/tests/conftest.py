import pytest

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line; status flips to PASS only if the test body finishes."""
    number = request.node.get_closest_marker("criterion").args[0]
    notes: list[str] = []
    _ACCEPTANCE[number] = ("FAIL", "")
    yield notes
    if request.node.rep_call.passed:
        _ACCEPTANCE[number] = ("PASS", "; ".join(notes))
    else:
        _ACCEPTANCE[number] = ("FAIL", "; ".join(notes))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, note = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {note}")
