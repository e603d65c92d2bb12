import pytest

_ACCEPTANCE = {}


@pytest.fixture
def measured(request):
    """Attach ``key=value`` measurements to the current test report."""

    def record(**values):
        for k, v in values.items():
            request.node.user_properties.append((k, v))

    return record


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    passed = call.excinfo is None
    _ACCEPTANCE[number] = (title, passed, list(item.user_properties))


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, passed, props = _ACCEPTANCE[number]
        detail = " ".join(f"{k}={_fmt(v)}" for k, v in props)
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status} {number:2d} {title}: {detail}")
