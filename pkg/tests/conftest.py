from pathlib import Path

import pytest
from hypothesis import strategies as st

from cmc4.exprio import load_fixture_dir
from cmc4.poly import Poly, VarTable

FIXTURES_DIR = Path(__file__).resolve().parents[1] / "fixtures"

# a small table keeps randomized cases fast and readable
SMALL = VarTable([("x", 1), ("y", 1), ("z", 2)])


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def fixtures():
    return load_fixture_dir(FIXTURES_DIR)


_reports = {}


def stage_report(name):
    """Run a stage once per session."""
    if name not in _reports:
        from cmc4.replay import run_stage

        _reports[name] = run_stage(name, load_fixture_dir(FIXTURES_DIR), {})
    return _reports[name]


@pytest.fixture(scope="session")
def reports():
    return stage_report


def polys(table=SMALL, max_terms=5, max_exp=3, max_coeff=50):
    """Random polynomials over ``table``."""
    n = len(table.names)
    term = st.tuples(
        st.tuples(*[st.integers(0, max_exp)] * n),
        st.integers(-max_coeff, max_coeff),
    )
    return st.lists(term, max_size=max_terms).map(lambda items: _build(items, table))


def _build(items, table):
    acc = {}
    for exps, c in items:
        acc[exps] = acc.get(exps, 0) + c
    return Poly.from_exponents(acc.items(), table)


def nonzero_polys(**kw):
    return polys(**kw).filter(lambda p: not p.is_zero())


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
