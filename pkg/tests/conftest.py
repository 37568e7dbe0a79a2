import pytest

from iwt53 import _backend, _purelift

KERNELS = [pytest.param(_purelift, id="python")]
if _backend.COMPILED:
    KERNELS.append(pytest.param(_backend._fast, id="cython"))


@pytest.fixture(params=KERNELS)
def kernel(request):
    return request.param


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)
