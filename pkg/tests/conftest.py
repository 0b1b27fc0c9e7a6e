import pytest

from helpers import golden_config
from intercomm.config import network_from_config
from intercomm.coordination import Coordinator

_criteria = {}


@pytest.fixture(scope="session")
def golden_cfg():
    return golden_config()


@pytest.fixture(scope="session")
def golden_net(golden_cfg):
    return network_from_config(golden_cfg)


@pytest.fixture(scope="session")
def golden_coord(golden_net):
    return Coordinator(golden_net)


@pytest.fixture(scope="session")
def golden_plan(golden_coord):
    return golden_coord.synthesize()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with (number, text)."""
    state = {}

    def record(num, text):
        state["num"], state["text"] = num, text

    yield record
    if "num" in state:
        rep = getattr(request.node, "rep_call", None)
        ok = rep is not None and rep.passed
        _criteria.setdefault(state["num"], []).append((ok, state["text"]))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        for ok, text in _criteria[num]:
            terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {text}")
