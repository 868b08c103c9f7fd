import pytest

from cmc4.exprio import load_fixtures
from cmc4.poly import INHOMOGENEOUS

from .conftest import FIXTURES_DIR


def test_every_fixture_homogeneous(fixtures):
    bad = [e.id for e in fixtures if not e.expr.is_zero() and e.expr.weight() is INHOMOGENEOUS]
    assert bad == []


def test_one_file_per_section():
    names = sorted(p.name for p in FIXTURES_DIR.glob("*.txt"))
    assert names == ["section3.txt", "section4.txt"]
    for p in FIXTURES_DIR.glob("*.txt"):
        assert len(load_fixtures(p)) > 0


@pytest.mark.parametrize("m", range(0, 17, 2))
def test_p_block_weight(fixtures, m):
    assert fixtures[f"4.36.P{m}"].weight() == 10


@pytest.mark.parametrize("m", range(0, 27, 2))
def test_q_block_weight(fixtures, m):
    assert fixtures[f"4.37.Q{m}"].weight() == 12


@pytest.mark.parametrize(
    "fid,w",
    [("3.28", 4), ("3.36", 4), ("3.ii", 2), ("4.47", 9), ("4.56", 18), ("4.57", 29), ("4.14", 1)],
)
def test_selected_weights(fixtures, fid, w):
    assert fixtures[fid].weight() == w


def test_blocks_are_kappa_free(fixtures):
    for e in fixtures:
        if e.id.startswith(("4.36.P", "4.37.Q")):
            assert set(e.expr.variables()) <= {"c", "y1"}, e.id


def test_case_b_cofactors(fixtures):
    split = fixtures["4.50"].exact_div(fixtures["4.56"])
    assert split == fixtures["4.51"].exact_div(fixtures["4.57"])
