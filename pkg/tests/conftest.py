import pytest

from splitred.localfield import make_tower


def build(p, levels, characteristic=0, residue_degree=1, precision=40):
    return make_tower(
        {
            "characteristic": characteristic,
            "p": p,
            "residue_degree": residue_degree,
            "precision": precision,
            "levels": [{"name": n, "poly": f} for n, f in levels],
        }
    )


@pytest.fixture
def zeta3():
    return build(3, [("L", "t^2+3*t+3")])


@pytest.fixture
def two_step():
    """Q_2^ur(2^(1/3)) followed by a square root of its uniformizer."""
    return build(2, [("K", "t^3-2"), ("L", "t^2-pi_K")])


# -- acceptance summary: one pass/fail line per criterion ----------------------------
_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    n, title = marker
    prev = _CRITERIA.get(n, (title, True))
    ok = prev[1] and not report.failed
    _CRITERIA[n] = (title, ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:>2}: {title:<60} {'PASS' if ok else 'FAIL'}")
