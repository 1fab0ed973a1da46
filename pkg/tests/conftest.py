import pytest

from multiexam import model as m


def make_pool(rows, domains=None):
    """rows: (topic, level, min-dur, max-dur, type, points) per question."""
    domains = domains or m.Domains()
    qs = [m.Question(i, *r) for i, r in enumerate(rows, start=1)]
    return m.QuestionPool(domains, tuple(qs))


@pytest.fixture
def abc_pool():
    # topics A=1, B=2, A=1 as in the three-question working example
    return make_pool([(1, 1, 5, 10, 1, 2), (2, 2, 5, 10, 2, 3), (1, 4, 5, 10, 3, 4)])


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
