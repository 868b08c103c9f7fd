import re

import pytest
from hypothesis import given, settings

from cmc4.exprio import (
    DuplicateId,
    ExprSyntaxError,
    load_fixture_dir,
    load_fixtures,
    parse,
    parse_fixtures,
    render,
    render_latex,
)
from cmc4.poly import REGISTRY, Poly, UnknownVariable

from .conftest import SMALL, polys


def _signed_terms(text):
    """Split a rendered sum into a set of signed terms, ignoring their order."""
    parts = re.split(r"\s+([+-])\s+", text.strip())
    first = parts[0]
    terms = {first if first.startswith("-") else "+" + first}
    for sign, body in zip(parts[1::2], parts[2::2]):
        terms.add(sign + body)
    return terms


def test_parse_336_lhs():
    p = parse("62*lam*lam2 - 109*lam1^2 + 192*lam^4 - 48*c*lam^2")
    lam, lam1, lam2, c = (Poly.var(v) for v in ("lam", "lam1", "lam2", "c"))
    assert p == lam * lam2 * 62 - lam1 ** 2 * 109 + lam ** 4 * 192 - c * lam ** 2 * 48


def test_parse_zero():
    assert parse("0").is_zero()


def test_parse_rejects_double_star():
    with pytest.raises(SyntaxError) as err:
        parse("lam ** 2")
    assert err.value.column == 5


def test_parse_unknown_variable():
    with pytest.raises(UnknownVariable) as err:
        parse("lam + q")
    assert "q" in str(err.value)


def test_parse_reports_position():
    with pytest.raises(ExprSyntaxError) as err:
        parse("(lam + c")
    assert err.value.line == 1
    assert err.value.column == 9


def test_parse_leading_minus_and_parentheses():
    assert parse("-(lam - c)^2") == parse("-lam^2 + 2*lam*c - c^2")


def test_parse_whitespace_insignificant():
    assert parse("3 *lam ^2-  c") == parse("3*lam^2 - c")


def test_parse_big_integers():
    p = parse("3762339840000000000000000000*kap^26")
    assert p.leading_coefficient() == 3762339840000000000000000000


def test_render_difference_of_squares():
    assert render(parse("lam^2 - c^2")) == "lam^2 - c^2"


def test_render_zero():
    assert render(Poly.zero()) == "0"


def test_render_case_ii():
    assert render(parse("827421*lam^2 + 1776889*c")) == "1776889*c + 827421*lam^2"


def test_render_is_deterministic():
    assert render(parse("c + lam^2 + T1")) == render(parse("T1 + lam^2 + c"))


def test_latex_f2_terms():
    # same signed terms as the printed closed form; terms appear in increasing order
    out = render_latex(parse("T1 + 3*lam^2 - 3*c"))
    assert _signed_terms(out) == _signed_terms(r"T' + 3\lambda^2 - 3c")


def test_latex_one():
    assert render_latex(parse("1")) == "1"


def test_latex_kappa():
    assert render_latex(parse("kap^2*y1")) == r"\kappa^2 y_1"


def test_latex_primes_and_braces():
    assert render_latex(parse("lam2*lam^12")) == r"\lambda^{12} \lambda''"
    assert render_latex(parse("lam1^2")) == r"{\lambda'}^2"


@settings(max_examples=1000, deadline=None)
@given(polys(max_terms=6, max_exp=4, max_coeff=10 ** 6))
def test_round_trip(p):
    assert parse(render(p), SMALL) == p


@settings(max_examples=300, deadline=None)
@given(polys(REGISTRY, max_terms=4, max_exp=2, max_coeff=1000))
def test_round_trip_registry(p):
    assert parse(render(p)) == p


@settings(max_examples=300, deadline=None)
@given(polys(), polys())
def test_render_injective(p, q):
    if p != q:
        assert render(p) != render(q)


def test_load_fixture_file(tmp_path):
    f = tmp_path / "s3.txt"
    f.write_text("3.36: 62*lam*lam2 - 109*lam1^2 + 192*lam^4 - 48*c*lam^2  # printed LHS\n")
    ff = load_fixtures(f)
    assert ff.ids() == ["3.36"]
    assert ff.entry("3.36").note == "printed LHS"
    assert ff["3.36"] == parse("62*lam*lam2 - 109*lam1^2 + 192*lam^4 - 48*c*lam^2")


def test_load_empty_file(tmp_path):
    f = tmp_path / "empty.txt"
    f.write_text("")
    assert len(load_fixtures(f)) == 0


def test_duplicate_id(tmp_path):
    f = tmp_path / "dup.txt"
    f.write_text("4.33: c\n4.33: y1\n")
    with pytest.raises(DuplicateId):
        load_fixtures(f)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_fixtures(tmp_path / "absent.txt")


def test_continuation_lines():
    ff = parse_fixtures("a: lam^2\n  - c  # second half\nb: c\n")
    assert ff["a"] == parse("lam^2 - c")
    assert ff.entry("a").note == "second half"
    assert ff.ids() == ["a", "b"]


def test_syntax_error_line_number():
    with pytest.raises(ExprSyntaxError) as err:
        parse_fixtures("a: c\nb: lam +* c\n")
    assert err.value.line == 2


def test_duplicate_across_files(tmp_path):
    (tmp_path / "a.txt").write_text("x1: c\n")
    (tmp_path / "b.txt").write_text("x1: lam\n")
    with pytest.raises(DuplicateId):
        load_fixture_dir(tmp_path)


def test_corpus_loads(fixtures):
    for fid in ("3.17.f2", "3.28", "3.35.a3", "3.43.b2", "4.36.P0", "4.37.Q26", "4.50", "4.57"):
        assert fid in fixtures
    assert sum(1 for e in fixtures if e.id.startswith("4.36.P")) == 9
    assert sum(1 for e in fixtures if e.id.startswith("4.37.Q")) == 14
