"""Case A: a nonzero, with w_i = kap*mu_i + tau."""

from __future__ import annotations

from ..diffalg import (
    CASE_A,
    CASE_A_REDUCED,
    Y2_CASE_A,
    Y3_CASE_A,
    apply_locus,
    derive,
    derive_on_locus,
    strip_factors,
)
from ..elim import Method, compress_power, eliminate, resultant, resultant_prs, solve_linear
from ..elim import _prem as prem
from ..exprio import FixtureFile, parse
from ..frame import LAMBDA1, elementary_symmetric, symmetric_reduce
from ..poly import FracPoly, NotDivisible, Poly
from .frame_stage import scalar_relations
from .report import Recorder, Stage, StageReport, match_polys

MU = ("mu2", "mu3", "mu4")
P_INDICES = tuple(range(0, 17, 2))
Q_INDICES = tuple(range(0, 27, 2))


def _w(i: int) -> Poly:
    return Poly.var("kap") * Poly.var(f"mu{i}") + Poly.var("tau")


def _on_frame(p: Poly) -> Poly:
    for i in (2, 3, 4):
        p = p.substitute(f"w{i}", _w(i)).num
    return p


def _e1_mu_times3(i: int) -> Poly:
    """3*e1(mu_i) = 3*(mu_i - lam)*w_i with lam = -(mu2 + mu3 + mu4)/3."""
    lam3 = -LAMBDA1.num  # 3*lam = -lam3
    return (Poly.var(f"mu{i}") * 3 + lam3) * _w(i)


def frame_y_rules() -> dict[str, Poly]:
    """3*e1(y_k) from the frame, in symmetric form."""
    out = {}
    for name, e in zip(("y1", "y2", "y3"), elementary_symmetric(MU)):
        total = Poly.zero()
        for i in (2, 3, 4):
            total = total + e.partial(f"mu{i}") * _e1_mu_times3(i)
        out[name] = symmetric_reduce(total)
    return out


def frame_kap_tau_rules() -> tuple[Poly, Poly, bool]:
    """3*e1(kap), 3*e1(tau) from e1(w_i) = w_i^2 + lam*mu_i + c, and whether the third index agrees."""
    c = Poly.var("c")
    kap = Poly.var("kap")
    lam3 = LAMBDA1.num  # 3*lam

    def rhs(i):
        mu = Poly.var(f"mu{i}")
        w = _w(i)
        return w * w * 3 + lam3 * mu + c * 3 - kap * _e1_mu_times3(i)

    dk = (rhs(2) - rhs(3)).exact_div(parse("mu2 - mu3"))
    dt = rhs(2) - dk * Poly.var("mu2")
    consistent = (rhs(4) - dk * Poly.var("mu4") - dt).is_zero()
    return symmetric_reduce(dk), symmetric_reduce(dt), consistent


def rewrite_biharmonic() -> Poly:
    """The biharmonic relation with lam = -y1/3, as a polynomial in c, kap, tau, y1, y2, y3."""
    y1 = Poly.var("y1")
    lam = FracPoly(-y1, Poly.const(3))
    l1 = derive(lam, CASE_A)
    l2 = derive(l1, CASE_A)
    wsum = FracPoly(Poly.var("kap") * y1 + Poly.var("tau") * 3)
    msq = FracPoly(y1 * y1 - Poly.var("y2") * 2)
    body = FracPoly(parse("-4*c")) + lam * lam + msq
    return (-l2 + l1 * wsum + lam * body).num


def _cancel_declared(f: FracPoly, factors) -> FracPoly:
    """Cancel powers of declared factors common to numerator and denominator."""
    num, den = f.num, f.den
    for g in factors:
        while True:
            try:
                n2, d2 = num.exact_div(g), den.exact_div(g)
            except NotDivisible:
                break
            num, den = n2, d2
    return FracPoly(num, den)


def _blocks(p: Poly, indices) -> dict[int, Poly]:
    return {m: p.coeff_in("kap", m) for m in indices}


def _assemble(rec: Recorder, prefix: str, indices) -> Poly | None:
    total = Poly.zero()
    kap = Poly.var("kap")
    for m in indices:
        fid = f"{prefix}{m}"
        if fid not in rec.fixtures:
            return None
        total = total + rec.fixture(fid) * kap ** m
    return total


def _normalized(derived: Poly, target: Poly | None) -> Poly:
    """derived rescaled so that it equals target when the two are proportional."""
    if target is None:
        return derived
    m = match_polys(derived, target)
    if m.ratio and not m.stripped:
        p, q = m.ratio
        try:
            return (derived * q).exact_div(Poly.const(p))
        except NotDivisible:
            return derived
    return derived


def _terminal_degree(r: Poly) -> tuple[Poly, int]:
    """Primitive part with powers of c removed, and its y1-degree."""
    body, _ = strip_factors(r, [Poly.var("c")])
    body = body.primitive()
    return body, body.degree("y1")


def run_caseA(fixtures: FixtureFile | None = None, kappa_resultant: bool = True) -> StageReport:
    rec = Recorder(Stage.CASE_A, fixtures)
    nv = CASE_A.nonvanishing

    with rec.timed():
        rel = scalar_relations()
        total = _on_frame(rel["4.16"] + rel["4.17"] + rel["4.18"])
        e426 = symmetric_reduce(total)
    rec.record("4.26", e426, fixture_id="4.26", method="sum of the three Gauss relations, symmetric reduction")

    y2 = solve_linear(e426, "y2", nv)
    rec.record("4.27.num", y2.num, fixture_id="4.27.num", method="solve_linear in y2")
    rec.record("4.27.den", y2.den, fixture_id="4.27.den", method="solve_linear in y2")
    rec.check("4.27.table", y2 == Y2_CASE_A, "locus value of y2 agrees with the derivation table")

    dk, dt, consistent = frame_kap_tau_rules()
    rec.record("4.24", dk, fixture_id="4.24", method="e1(w_i) for two indices")
    rec.record("4.25", dt, fixture_id="4.25", method="e1(w_i) for two indices")
    rec.check("4.24.consistency", consistent, "the third index gives the same e1(kap), e1(tau)")
    rec.check("4.24.table", FracPoly(dk, Poly.const(3)) == CASE_A.rule("kap") and
              FracPoly(dt, Poly.const(3)) == CASE_A.rule("tau"), "e1(kap), e1(tau) agree with the table")

    yr = frame_y_rules()
    rec.record("4.28", yr["y1"], fixture_id="4.28", method="sum of e1(mu_i), symmetric reduction")
    table_ok = all(FracPoly(yr[v], Poly.const(3)) == CASE_A.rule(v) for v in ("y1", "y2", "y3"))
    rec.check("caseA.y_rules", table_ok, "e1(y1), e1(y2), e1(y3) agree with the table")

    msq = parse("y1^2 - 2*y2")
    d_msq = _cancel_declared(apply_locus(derive(msq, CASE_A), CASE_A), CASE_A.denominators)
    rec.record("4.29.num", d_msq.num, fixture_id="4.29.num", method="e1(y1^2 - 2*y2) on the locus")
    rec.record("4.29.den", d_msq.den, fixture_id="4.29.den", method="e1(y1^2 - 2*y2) on the locus")
    sq = Poly.zero()
    for i in (2, 3, 4):
        sq = sq + Poly.var(f"mu{i}") * _e1_mu_times3(i) * 2
    rec.record("4.30", symmetric_reduce(sq), fixture_id="4.30", method="sum of 2*mu_i*e1(mu_i)")

    e431 = derive(e426, CASE_A).substitute("y2", Y2_CASE_A).num
    e431, removed = strip_factors(e431, nv)
    rec.record("4.31", e431, fixture_id="4.31", method="e1 of (4.26), y2 replaced", removed=removed)
    y3 = solve_linear(e431, "y3", nv)
    rec.record("4.32.num", y3.num, fixture_id="4.32.num", method="solve_linear in y3")
    rec.record("4.32.den", y3.den, fixture_id="4.32.den", method="solve_linear in y3")
    rec.check("4.32.table", y3 == Y3_CASE_A, "locus value of y3 agrees with the derivation table")

    e433 = rewrite_biharmonic()
    rec.record("4.33", e433, fixture_id="4.33", method="biharmonic relation with lam = -y1/3")
    n433 = FracPoly(e433).substitute("y2", Y2_CASE_A).substitute("y3", Y3_CASE_A).num
    n433, _ = strip_factors(n433, CASE_A.denominators)
    n433 = n433.primitive()
    rec.record("4.33.locus", n433, method="(4.33) with y2, y3 replaced")

    e434 = derive_on_locus(e433, CASE_A)
    rec.record("4.34", e434, fixture_id="4.34", method="derive_on_locus")
    e435 = derive_on_locus(e434, CASE_A)
    rec.record("4.35", e435, fixture_id="4.35", method="derive_on_locus")

    # the reduced table differentiates the locus form directly; it must agree modulo (4.33)
    alt = derive(n433, CASE_A_REDUCED).num
    ra = prem(alt.as_univariate("tau"), n433.as_univariate("tau"))
    rb = prem(e434.as_univariate("tau"), n433.as_univariate("tau"))
    ra_p = Poly.from_univariate(ra, "tau") if ra else Poly.zero()
    rb_p = Poly.from_univariate(rb, "tau") if rb else Poly.zero()
    rec.check("4.34.reduced_route", match_polys(ra_p, rb_p, nv).ok,
              "reduced-table derivative agrees with (4.34) modulo (4.33)")

    p_fix = _assemble(rec, "4.36.P", P_INDICES)
    q_fix = _assemble(rec, "4.37.Q", Q_INDICES)
    with rec.timed():
        r36 = eliminate(n433, e434, "tau", nv)
    rec.record("4.36", r36.eliminated, method=r36.method.value, removed=r36.removed_factors,
               notes=r36.notes, check=p_fix is not None and match_polys(r36.eliminated, p_fix).ok)
    with rec.timed():
        r37 = eliminate(n433, e435, "tau", nv)
    rec.record("4.37", r37.eliminated, method=r37.method.value, removed=r37.removed_factors,
               notes=r37.notes, check=q_fix is not None and match_polys(r37.eliminated, q_fix).ok)

    p = _normalized(r36.eliminated, p_fix)
    q = _normalized(r37.eliminated, q_fix)
    for prefix, poly, indices, w in (("4.36.P", p, P_INDICES, 10), ("4.37.Q", q, Q_INDICES, 12)):
        for m, block in _blocks(poly, indices).items():
            step = rec.record(f"{prefix}{m}", block, fixture_id=f"{prefix}{m}", method="coeff_in kap")
            if step.weight != w:
                step.check = False
                step.notes.append(f"weight {step.weight}, expected {w}")
    extra = [v for v in p.variables() + q.variables() if v not in ("c", "kap", "y1")]
    rec.check("4.36-4.37.variables", not extra, "P and Q involve only c, kap, y1")

    # kap occurs only through kap^2 = u
    pu, qu = compress_power(p, "kap", 2), compress_power(q, "kap", 2)
    with rec.timed():
        ru = resultant(pu, qu, "kap")
    rec.record("caseA.u_resultant", ru, method=Method.SYLVESTER_BAREISS.value,
               notes=[f"u = kap^2; Sylvester size {pu.degree('kap') + qu.degree('kap')}"])
    with rec.timed():
        ru2 = resultant_prs(pu, qu, "kap")
    rec.check("caseA.u_resultant.backends", ru2 == ru or ru2 == -ru, "Bareiss and subresultant PRS agree up to sign")
    body, dy = _terminal_degree(ru) if not ru.is_zero() else (ru, -1)
    rec.check("caseA.u_resultant.nonzero", not ru.is_zero(), "u-resultant is a nonzero polynomial")
    rec.check("caseA.u_resultant.weight", ru.weight() == 226, f"weight {ru.weight()}")
    rec.check("caseA.u_resultant.degree", dy == 214, f"y1-degree {dy} after c-content removal",
              derived=body)
    if kappa_resultant:
        with rec.timed():
            rk = resultant(p, q, "kap")
        rec.record("caseA.kap_resultant", rk, method=Method.SYLVESTER_BAREISS.value,
                   notes=[f"Sylvester size {p.degree('kap') + q.degree('kap')}"])
        sq_ok = rk == ru * ru or rk == -(ru * ru)
        rec.check("caseA.kap_resultant.square", sq_ok, "kap-resultant is +-(u-resultant)^2")
        _, dk2 = _terminal_degree(rk)
        rec.check("caseA.kap_resultant.degree", dk2 == 428, f"y1-degree {dk2} after c-content removal")
    return rec.finish()
