import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from cubiform.cubic import CubicForm
from cubiform.field import Field, FieldElem

FIELDS = [Field.Q, Field.Q_I, Field.Q_OMEGA]

small_rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def elems(field: Field):
    if field is Field.Q:
        return small_rationals.map(lambda a: FieldElem(a, 0, field))
    return st.tuples(small_rationals, small_rationals).map(lambda ab: FieldElem(*ab, field))


any_elem = st.sampled_from(FIELDS).flatmap(elems)


def random_form(rng: random.Random, m: int, lo: int = -3, hi: int = 3, density: float = 0.6):
    entries = {}
    for a in range(m):
        for b in range(a, m):
            for c in range(b, m):
                if rng.random() < density:
                    entries[(a, b, c)] = rng.randint(lo, hi)
    return CubicForm.from_entries(m, entries)


def random_point(rng: random.Random, m: int, field: Field = Field.Q, lo: int = -5, hi: int = 5):
    if field is Field.Q:
        return [FieldElem(rng.randint(lo, hi)) for _ in range(m)]
    return [FieldElem(rng.randint(lo, hi), rng.randint(lo, hi), field) for _ in range(m)]


def random_invertible(rng: random.Random, m: int, lo: int = -2, hi: int = 2):
    from cubiform.linalg import is_invertible

    while True:
        L = [[FieldElem(rng.randint(lo, hi)) for _ in range(m)] for _ in range(m)]
        if is_invertible(L):
            return L


@pytest.fixture
def rng():
    return random.Random(20261016)


# -- acceptance reporting ----------------------------------------------------

_criteria: dict[str, tuple[int, str]] = {}
_outcomes: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _criteria[item.nodeid] = (mark.args[0], mark.args[1])


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    number, title = _criteria[report.nodeid]
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes[number] = ("PASS" if report.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        status, title = _outcomes[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")


__all__ = ["Fraction", "random_form", "random_point", "random_invertible", "elems", "any_elem"]
