import pytest

from fourier_uncertainty import _backend


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run the test once per available kernel implementation."""
    previous = _backend.name()
    _backend.use(request.param)
    yield request.param
    _backend.use(previous)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
