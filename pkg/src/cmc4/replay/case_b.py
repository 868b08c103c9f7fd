"""Case B: a = 0."""

from __future__ import annotations

from ..diffalg import CASE_B, D_CASE_B, N_Y1, N_Y3, derive, derive_on_locus, strip_factors
from ..elim import eliminate, remove_factor, resultant, resultant_prs
from ..exprio import FixtureFile, parse
from ..frame import LAMBDA1, elementary_symmetric, symmetric_reduce
from ..poly import FracPoly, Poly
from .frame_stage import scalar_relations
from .report import Recorder, Stage, StageReport, match_polys

MU = ("mu2", "mu3", "mu4")
SPLIT = (parse("c*y1 - 3*y3"), parse("c^3 - c*y1*y3 - 2*y3^2"))


def _d(i: int, j: int) -> Poly:
    return Poly.var(f"mu{i}") * Poly.var(f"mu{j}") + Poly.var("c")


def frame_relations() -> dict[str, Poly]:
    """(4.41)-(4.43): the a = 0 relations, the last with w3, w4 eliminated."""
    rel = scalar_relations()
    r41 = rel["4.18"].substitute("a", 0).num
    r42 = rel["4.16"].substitute("a", 0).num
    r40 = rel["4.17"].substitute("a", 0).num
    w2 = Poly.var("w2")
    w3 = FracPoly(-_d(2, 3), w2)
    w4 = FracPoly(-_d(2, 4), w2)
    r43 = FracPoly(r40).substitute("w3", w3).substitute("w4", w4).num
    return {"4.41": r41, "4.42": r42, "4.43": r43}


def frame_n_rules() -> dict[str, Poly]:
    """N_k with e1(y_k) = -N_k / (3*w2*(mu3*mu4 + c)).

    With w2^2 = -d23*d24/d34, w3 = -d23/w2 and w4 = -d24/w2, each
    e1(mu_i) = (mu_i - lam)*w_i times w2*d34 is a polynomial.
    """
    lam3 = LAMBDA1.num  # 3*lam
    d23, d24, d34 = _d(2, 3), _d(2, 4), _d(3, 4)
    scaled = {
        "mu2": -(Poly.var("mu2") * 3 - lam3) * d23 * d24,
        "mu3": -(Poly.var("mu3") * 3 - lam3) * d23 * d34,
        "mu4": -(Poly.var("mu4") * 3 - lam3) * d24 * d34,
    }
    out = {}
    for name, e in zip(("y1", "y2", "y3"), elementary_symmetric(MU)):
        total = Poly.zero()
        for m in MU:
            total = total + e.partial(m) * scaled[m]
        out[name] = symmetric_reduce(-total)
    return out


def _dn(p: Poly) -> Poly:
    return derive(p, CASE_B).num


def rewrite_biharmonic() -> Poly:
    """The biharmonic relation on the a = 0 locus, denominators cleared.

    Put s = w2*(mu3*mu4 + c), so s^2 = -D and e1(y_k) = -N_k/(3s). Then
    lam' = N1/(9s), lam'*(w2 + w3 + w4) = N1*sigma2/(9D) and
    lam'' = (dN(N1)/(3D) - N1*dN(D)/(6D^2))/9, with dN(p) = sum dp/dy_k N_k.
    """
    y1 = Poly.var("y1")
    d = FracPoly(D_CASE_B)
    sigma2 = symmetric_reduce(_d(2, 3) * _d(2, 4) + _d(2, 3) * _d(3, 4) + _d(2, 4) * _d(3, 4))
    n1 = FracPoly(N_Y1)
    ninth = FracPoly(Poly.const(1), Poly.const(9))
    l2 = ninth * (FracPoly(_dn(N_Y1)) / (d * 3) - n1 * FracPoly(_dn(D_CASE_B)) / (d * d * 6))
    l1w = n1 * FracPoly(sigma2) / (d * 9)
    lam = FracPoly(-y1, Poly.const(3))
    body = FracPoly(parse("-4*c")) + lam * lam + FracPoly(y1 * y1 - Poly.var("y2") * 2)
    return (-l2 + l1w + lam * body).num


def _branch(rec: Recorder, sid: str, f1: Poly, f2: Poly, common: Poly, zero_check: tuple[str, Poly, FracPoly]):
    """Both branches of a product pair f1 = common*g1, f2 = common*g2."""
    g1, k1 = remove_factor(f1, common)
    g2, k2 = remove_factor(f2, common)
    rec.check(f"{sid}.common", k1 >= 1 and k2 >= 1, f"common factor multiplicities {k1}, {k2}")
    # common != 0: the cofactors vanish; y2 is eliminated between them
    r = eliminate(g1, g2, "y2", CASE_B.nonvanishing)
    left = r.eliminated
    ok = not left.is_zero() and "y2" not in left.variables() and len(left.variables()) <= 2
    rec.record(f"{sid}.nonzero_branch", left, method=r.method.value, removed=r.removed_factors, check=ok,
               notes=[f"variables {left.variables()}; a nonzero relation with constant coefficients"])
    # common = 0: solve it for y2 and check the derivative of the remaining variable vanishes there
    y2 = FracPoly(-common.coeff_in("y2", 0), common.coeff_in("y2", 1))
    var, numer, subst = zero_check
    val = FracPoly(numer).substitute(var, subst) if var else FracPoly(numer)
    val = val.substitute("y2", y2)
    rec.check(f"{sid}.zero_branch", val.num.is_zero(), "the remaining variable has zero derivative on this branch")


def run_caseB(fixtures: FixtureFile | None = None) -> StageReport:
    rec = Recorder(Stage.CASE_B, fixtures)
    nv = CASE_B.nonvanishing

    for fid, p in frame_relations().items():
        rec.record(fid, p, fixture_id=fid, method="a = 0 relations")
    n = frame_n_rules()
    for fid, v in (("4.44.N", "y1"), ("4.45.N", "y2"), ("4.46.N", "y3")):
        rec.record(fid, n[v], fixture_id=fid, method="sum of e1(mu_i), symmetric reduction")
    rec.check("caseB.n_rules", all(FracPoly(n[v]) == CASE_B.rule(v) for v in n), "N rules agree with the table")
    d = symmetric_reduce(_d(2, 3) * _d(2, 4) * _d(3, 4))
    rec.check("caseB.D", d == D_CASE_B, "D = (mu2*mu3 + c)(mu2*mu4 + c)(mu3*mu4 + c) in symmetric form")

    e447, removed = strip_factors(rewrite_biharmonic(), nv)
    rec.record("4.47", e447, fixture_id="4.47", method="biharmonic relation with s^2 = -D", removed=removed)
    e448 = derive_on_locus(e447, CASE_B)
    rec.record("4.48", e448, fixture_id="4.48", method="derive_on_locus")
    e449 = derive_on_locus(e448, CASE_B)
    rec.record("4.49", e449, fixture_id="4.49", method="derive_on_locus")

    cof = {}
    for fid, other, cfid in (("4.50", e448, "4.56"), ("4.51", e449, "4.57")):
        with rec.timed():
            r = eliminate(e447, other, "y2", nv)
        body = r.eliminated
        mult = []
        for f in SPLIT:
            body, k = remove_factor(body, f)
            mult.append(k)
        step = rec.record(fid, r.eliminated, fixture_id=fid, method=r.method.value, removed=r.removed_factors,
                          factors=SPLIT, notes=[f"case-split factor multiplicities in the resultant: {mult}"])
        step.check = all(k >= 1 for k in mult)
        cof[cfid] = body
        rec.record(cfid, body, fixture_id=cfid, method="cofactor after removing the case-split factors")
        if fid in rec.fixtures:
            fx = rec.fixture(fid)
            ks = [remove_factor(fx, f)[1] for f in SPLIT]
            rest = fx
            for f in SPLIT:
                rest, _ = remove_factor(rest, f)
            ok = ks == [1, 1] and cfid in rec.fixtures and match_polys(rest, rec.fixture(cfid)).ok
            rec.check(f"{fid}.factorization", ok, f"printed form has multiplicities {ks} and cofactor ({cfid})")

    # B.1: c*y1 = 3*y3
    b1 = FracPoly(parse("c*y1"), Poly.const(3))
    p52 = FracPoly(e447).substitute("y3", b1).num.primitive()
    p53 = FracPoly(e448).substitute("y3", b1).num.primitive()
    p52, _ = strip_factors(p52, nv)
    p53, _ = strip_factors(p53, nv)
    rec.record("4.52", p52, fixture_id="4.52", method="y3 = c*y1/3")
    rec.record("4.53", p53, fixture_id="4.53", method="y3 = c*y1/3")
    _branch(rec, "B.1", p52, p53, parse("9*c + 4*y1^2 + 9*y2"), ("y3", N_Y1, b1))

    # B.2: c^3 - c*y1*y3 - 2*y3^2 = 0
    b2 = FracPoly(parse("c^3 - 2*y3^2"), parse("c*y3"))
    cy3 = (parse("c"), parse("y3"))
    p54, _ = strip_factors(FracPoly(e447).substitute("y1", b2).num.primitive(), cy3)
    p55, _ = strip_factors(FracPoly(e448).substitute("y1", b2).num.primitive(), cy3)
    rec.record("4.54", p54, fixture_id="4.54", method="y1 = (c^3 - 2*y3^2)/(c*y3)")
    rec.record("4.55", p55, fixture_id="4.55", method="y1 = (c^3 - 2*y3^2)/(c*y3)")
    _branch(rec, "B.2", p54, p55, parse("2*c^3 + c^2*y2 - y3^2"), ("y1", N_Y3, b2))

    # B.3: both cofactors vanish
    a, b = cof["4.56"], cof["4.57"]
    with rec.timed():
        r3 = resultant(a, b, "y3")
    rec.record("B.3.resultant", r3, method="SylvesterBareiss",
               notes=[f"Sylvester size {a.degree('y3') + b.degree('y3')}"])
    with rec.timed():
        r3b = resultant_prs(a, b, "y3")
    rec.check("B.3.backends", r3b == r3 or r3b == -r3, "Bareiss and subresultant PRS agree up to sign")
    rec.check("B.3.nonzero", not r3.is_zero(), "y3-resultant is a nonzero polynomial")
    rec.check("B.3.weight", not r3.is_zero() and r3.weight() == 174, f"weight {r3.weight()}")
    body, _ = strip_factors(r3, [Poly.var("c")])
    body = body.primitive()
    rec.check("B.3.degree", body.degree("y1") == 118, f"y1-degree {body.degree('y1')} after c-content removal",
              derived=body)
    return rec.finish()
