import pytest
from hypothesis import HealthCheck, settings, strategies as st

from bterms.bterm import B, BApp

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    n, title = m.args
    prev = _criteria.get(n, (title, "PASS"))[1]
    status = "PASS" if rep.passed and prev == "PASS" else "FAIL"
    _criteria[n] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, status = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d} [{status}] {title}")


def bterms(max_leaves=6):
    """Random B-terms as application trees."""
    return st.recursive(st.just(B), lambda c: st.builds(BApp, c, c), max_leaves=max_leaves)


def decreasing(max_len=8, max_deg=8, min_len=1):
    return st.lists(st.integers(0, max_deg), min_size=min_len, max_size=max_len).map(
        lambda xs: tuple(sorted(xs, reverse=True)))
