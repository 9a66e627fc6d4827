import pytest

_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion")
    config.stash[_KEY] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    num, label = mark.args
    measured = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    results = item.config.stash[_KEY]
    # a failing setup or teardown overrides a passing call
    if rep.when == "call" or not rep.passed:
        results[num] = ("PASS" if rep.passed else "FAIL", label, measured, rep.duration)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_KEY]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        status, label, measured, dt = results[num]
        line = f"{status} criterion {num:2d}: {label} ({dt:.1f}s)"
        if measured:
            line += f" | {measured}"
        terminalreporter.write_line(line)
