from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from cmc4.poly import INHOMOGENEOUS, Poly

from .conftest import SMALL, nonzero_polys, polys

RING = settings(max_examples=1000, deadline=None)
points = st.fixed_dictionaries({v: st.integers(-5, 5) for v in SMALL.names})


@RING
@given(polys(), polys())
def test_add_commutative(p, q):
    assert p + q == q + p


@RING
@given(polys(), polys(), polys())
def test_add_associative(p, q, r):
    assert (p + q) + r == p + (q + r)


@RING
@given(polys(), polys())
def test_mul_commutative(p, q):
    assert p * q == q * p


@RING
@given(polys(max_terms=4), polys(max_terms=4), polys(max_terms=4))
def test_mul_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


@RING
@given(polys(max_terms=4), polys(max_terms=4), polys(max_terms=4))
def test_distributive(p, q, r):
    assert p * (q + r) == p * q + p * r


@RING
@given(polys())
def test_identities_and_inverse(p):
    zero, one = Poly.zero(SMALL), Poly.const(1, SMALL)
    assert p + zero == p
    assert p * one == p
    assert (p - p).is_zero()
    assert p + (-p) == zero


@RING
@given(polys(), polys(), points)
def test_evaluation_is_a_homomorphism(p, q, pt):
    # an independent oracle: evaluate both sides at an integer point
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)


@RING
@given(polys(), nonzero_polys())
def test_exact_div_round_trip(p, q):
    assert (p * q).exact_div(q) == p


@RING
@given(polys())
def test_zero_terms_never_stored(p):
    assert all(c != 0 for c in p.terms_dict.values())


@settings(max_examples=300, deadline=None)
@given(polys(max_terms=4), st.sampled_from(SMALL.names))
def test_partial_product_rule(p, v):
    q = Poly.var(v, SMALL) ** 2 + p
    assert (p * q).partial(v) == p.partial(v) * q + p * q.partial(v)


@settings(max_examples=300, deadline=None)
@given(nonzero_polys())
def test_content_primitive_factorization(p):
    g, prim = p.content_primitive()
    assert prim * g == p
    assert prim.leading_coefficient() > 0


@settings(max_examples=300, deadline=None)
@given(nonzero_polys(), nonzero_polys())
def test_weight_additive(p, q):
    wp, wq = p.weight(), q.weight()
    if wp is not INHOMOGENEOUS and wq is not INHOMOGENEOUS:
        assert (p * q).weight() == wp + wq


@settings(max_examples=300, deadline=None)
@given(polys(max_terms=4, max_exp=2), polys(max_terms=3, max_exp=2), points)
def test_substitute_matches_evaluation(p, q, pt):
    sub = p.substitute("x", q)
    inner = q.evaluate(pt)
    assert sub.num.evaluate(pt) / sub.den.evaluate(pt) == p.evaluate({**pt, "x": inner})
    assert isinstance(inner, (int, Fraction))
