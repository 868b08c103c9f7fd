"""Power sums of the omega_ii^1 along e1 and the elimination cascade built on them."""

from __future__ import annotations

from dataclasses import dataclass

from ..diffalg import SECTION3, derive, derive_on_locus, strip_factors
from ..elim import compress_power, eliminate, solve_linear
from ..exprio import FixtureFile, parse, render
from ..poly import FracPoly, Poly, VarTable
from .report import MatchKind, Recorder, Stage, StageReport

LAM = parse("lam")
LAM1 = parse("lam1")
C = parse("c")
T = parse("T")


def _e1(f) -> FracPoly:
    return derive(f, SECTION3)


@dataclass(frozen=True)
class PowerSums:
    f: tuple[FracPoly, ...]  # f1..f5
    g: tuple[FracPoly, ...]  # g1..g4


def power_sums() -> PowerSums:
    """f_k = sum w_i^k and the auxiliary g_k, built by the e1 recursions.

    Uses e1(w_i) = w_i^2 + lam*lam_i + c and e1(lam_i) = (lam_i - lam)*w_i,
    with sum lam_i = -3*lam and sum lam_i^2 = S - lam^2 where S is fixed by the
    definition of T.
    """
    lam = FracPoly(LAM)
    c = FracPoly(C)
    half, third = FracPoly(Poly.const(1), Poly.const(2)), FracPoly(Poly.const(1), Poly.const(3))
    s = c * 4 + FracPoly(parse("lam2 - lam1*T"), LAM)  # S from the definition of T
    sq = s - lam * lam  # sum of lam_i^2

    f1 = FracPoly(T)
    f2 = lam * lam * 3 + _e1(f1) - c * 3
    g1 = _e1(lam * -3) + lam * f1
    f3 = _e1(f2) * half - lam * g1 - c * f1
    g2 = (_e1(g1) - lam * sq + lam * f2 + c * lam * 3) * half
    f4 = _e1(f3) * third - lam * g2 - c * f2
    g3 = _e1(sq) * half + lam * g1  # sum lam_i^2 * w_i
    g4 = (_e1(g2) + lam * f3 - lam * g3 * 2 - c * g1 * 2) * third
    f5 = _e1(f4) * FracPoly(Poly.const(1), Poly.const(4)) - lam * g4 - c * f3
    return PowerSums((f1, f2, f3, f4, f5), (g1, g2, g3, g4))


def _polynomial_part(f: FracPoly) -> Poly:
    if not f.den.is_constant():
        raise ValueError("expected a polynomial up to an integer denominator")
    return f.num


def _against(f: FracPoly, den: Poly) -> Poly | None:
    """Numerator of f once written over ``den``; None if den is not a multiple of f.den."""
    g = f * FracPoly(den)
    return g.num if g.is_polynomial() else None


def run_lemma33(fixtures: FixtureFile | None = None) -> StageReport:
    rec = Recorder(Stage.SECTION3, fixtures)
    ps = power_sums()
    f, g = ps.f, ps.g
    rec.record("3.17.f1", _polynomial_part(f[0]), fixture_id="3.17.f1", method="definition")
    rec.record("3.17.f2", _polynomial_part(f[1]), fixture_id="3.17.f2", method="recursion")
    rec.record("3.20", _polynomial_part(g[0]), fixture_id="3.20", method="recursion")
    rec.record("3.21", _polynomial_part(f[2]), fixture_id="3.21", method="recursion")
    rec.record("3.17.f3", _polynomial_part(f[2]), fixture_id="3.17.f3", method="recursion")
    rec.record("3.23", _polynomial_part(g[1]), fixture_id="3.23", method="recursion")
    rec.record("3.24", _polynomial_part(f[3]), fixture_id="3.24", method="recursion")
    rec.record("3.17.f4", _polynomial_part(f[3]), fixture_id="3.17.f4", method="recursion")
    for fid, val in (("3.25", g[2]), ("3.26", g[3])):
        den = rec.fixtures.get(f"{fid}.den")
        num = _against(val, den) if den is not None else None
        rec.record(f"{fid}.num", num, fixture_id=f"{fid}.num", method="recursion",
                   notes=[f"written over the denominator of {fid}"])
    rec.record("3.27", _polynomial_part(f[4]), fixture_id="3.27", method="recursion")
    rec.record("3.17.f5", _polynomial_part(f[4]), fixture_id="3.17.f5", method="recursion")
    return rec.finish()


def newton_relations(ps: PowerSums | None = None) -> tuple[Poly, Poly]:
    """Numerators of the two power-sum relations in three summands with the closed forms inserted."""
    ps = ps or power_sums()
    f1, f2, f3, f4, f5 = ps.f
    e13 = f1 ** 4 - f1 * f1 * f2 * 6 + f2 * f2 * 3 + f1 * f3 * 8 - f4 * 6
    e14 = f1 ** 5 - f1 ** 3 * f2 * 5 + f1 * f1 * f3 * 5 + f2 * f3 * 5 - f5 * 6
    return _polynomial_part(e13), _polynomial_part(e14)


@dataclass
class CascadeState:
    eqs: dict[str, Poly]
    report: StageReport


def _elim(rec: Recorder, sid: str, p: Poly, q: Poly, v: str, nonvanishing, fixture_id=None, power=1, note=""):
    r = eliminate(p, q, v, nonvanishing=nonvanishing, power=power)
    notes = list(r.notes) + ([note] if note else [])
    if r.content != 1:
        notes.append(f"integer content {r.content} removed")
    rec.record(sid, r.eliminated, fixture_id=fixture_id, method=r.method.value, removed=r.removed_factors,
               notes=notes)
    return r.eliminated


def _derive(rec: Recorder, sid: str, p: Poly, fixture_id=None, strip=()):
    d = derive_on_locus(p, SECTION3)
    removed = []
    if strip:
        d, removed = strip_factors(d, strip)
        d = d.primitive()
    rec.record(sid, d, fixture_id=fixture_id, method="derive_on_locus", removed=removed,
               notes=[f"weight {p.weight()} -> {d.weight()}" + (" after removing declared factors" if removed else "")])
    return d


def _blocks(rec: Recorder, poly: Poly, parts: dict[str, Poly], fixture_prefix: str, sid: str):
    """Record coefficient blocks and check they share one scalar with the fixture."""
    ratios = set()
    for name, block in parts.items():
        step = rec.record(f"{sid}.{name}", block, fixture_id=f"{fixture_prefix}.{name}", method="coeff_in")
        m = step.fixture_match
        if m.kind is MatchKind.EXACT:
            ratios.add((1, 1))
        elif m.kind is MatchKind.UP_TO_SCALAR:
            ratios.add(m.ratio)
        else:
            ratios.add(None)
    rec.check(f"{sid}.blocks", len(ratios) == 1 and None not in ratios,
              "coefficient blocks agree with the printed table under a single scalar")


def lemma34_cascade(fixtures: FixtureFile | None = None, include_case_iii: bool = True) -> CascadeState:
    rec = Recorder(Stage.SECTION3, fixtures)
    nv = SECTION3.nonvanishing
    eq: dict[str, Poly] = {}
    e13, e14 = newton_relations()
    eq["3.28"] = e13.primitive()
    rec.record("3.28", eq["3.28"], fixture_id="3.28", method="substitution")
    eq["3.29"] = e14.primitive()
    rec.record("3.29", eq["3.29"], fixture_id="3.29", method="substitution")
    eq["3.30"] = _derive(rec, "3.30", eq["3.28"], "3.30")
    eq["3.31"] = _elim(rec, "3.31", eq["3.29"], eq["3.30"], "T4", nv, "3.31")
    eq["3.32"] = _elim(rec, "3.32", eq["3.28"], eq["3.31"], "T3", nv, "3.32")
    eq["3.33"] = _derive(rec, "3.33", eq["3.32"], "3.33")
    eq["3.34"] = _elim(rec, "3.34", eq["3.28"], eq["3.33"], "T3", nv, "3.34")
    eq["3.35"] = _elim(rec, "3.35", eq["3.32"], eq["3.34"], "T2", nv, "3.35")
    e35 = eq["3.35"]
    ok = e35.degree("T1") == 1 and e35.degree("T") == 2
    a1 = e35.coeff_in("T1", 1)
    rest = e35.coeff_in("T1", 0)
    ok = ok and rest.coeff_in("T", 2) == -a1 and a1.degree("T") == 0
    rec.check("3.35.shape", ok, "(3.35) has the form a1*T1 - a1*T^2 + a2*T + a3")
    a2, a3 = rest.coeff_in("T", 1), rest.coeff_in("T", 0)
    eq["a1"], eq["a2"], eq["a3"] = a1, a2, a3
    _blocks(rec, e35, {"a1": a1, "a2": a2, "a3": a3}, "3.35", "3.35")

    # case (ii): a1 = a2 = 0
    e36, rem = strip_factors(a1, [LAM])
    e36 = e36.primitive()
    eq["3.36"] = e36
    rec.record("3.36", e36, fixture_id="3.36", method="a1 = 0", removed=rem)
    eq["3.37"] = a2.primitive()
    rec.record("3.37", eq["3.37"], fixture_id="3.37", method="a2 = 0")
    d36 = derive_on_locus(e36, SECTION3)
    eq["3.38"] = _elim(rec, "3.38", eq["3.37"], d36, "lam3", nv, "3.38",
                       note="lam3 eliminated between (3.37) and e1 of (3.36)")
    eq["3.39"] = _elim(rec, "3.39", e36, eq["3.38"], "lam2", nv, "3.39")
    eq["3.40"] = _derive(rec, "3.40", eq["3.39"], "3.40", strip=[LAM1])
    # the printed route: (3.40) gives lam2 and (3.39) gives lam1^2, substituted together into (3.36)
    v_lam2 = solve_linear(eq["3.40"], "lam2")
    v_sq = solve_linear(compress_power(eq["3.39"], "lam1", 2), "lam1")
    sub = FracPoly(compress_power(e36, "lam1", 2)).substitute("lam2", v_lam2).substitute("lam1", v_sq)
    cleared, rem = strip_factors(sub.num, nv)
    rec.record("3.ii", cleared, fixture_id="3.ii", method="substitution", removed=rem,
               notes=[f"common denominator {render(sub.den)} cleared; integer content {cleared.content()} kept"])
    exact = rec.report.steps[-1].fixture_match.kind is MatchKind.EXACT
    # second route: pairwise elimination, lam2 first and then lam1^2
    step1 = eliminate(e36, eq["3.40"], "lam2", nonvanishing=nv, solve_from=1)
    terminal = eliminate(step1.eliminated, eq["3.39"], "lam1", nonvanishing=nv, power=2)
    t = terminal.eliminated
    rec.record("3.ii.primitive", t, method=terminal.method.value,
               removed=step1.removed_factors + terminal.removed_factors, notes=list(terminal.notes))
    rec.check("3.ii.routes", t == cleared.primitive(), "both routes give the same primitive relation")
    rec.check("3.ii.contradiction", set(t.variables()) == {"c", "lam"} and t.degree("lam") > 0,
              "relation in c and lam alone forces lam constant")
    rec.check("3.ii.exact", exact, "the printed relation is reproduced exactly by the substitution route")

    if include_case_iii:
        nv3 = tuple(nv) + (a1,)
        eq["3.41"] = _derive(rec, "3.41", e35, "3.41")
        eq["3.42"] = _elim(rec, "3.42", eq["3.32"], eq["3.41"], "T2", nv, "3.42")
        eq["3.43"] = _elim(rec, "3.43", e35, eq["3.42"], "T1", nv3, "3.43",
                           note="a1 is nonzero in case (iii)")
        e43 = eq["3.43"]
        rec.check("3.43.shape", e43.degree("T") == 1 and "T1" not in e43.variables(),
                  "(3.43) is linear in T")
        b1, b2 = e43.coeff_in("T", 1), e43.coeff_in("T", 0)
        eq["b1"], eq["b2"] = b1, b2
        _blocks(rec, e43, {"b1": b1, "b2": b2}, "3.43", "3.43")
    return CascadeState(eq, rec.finish())


def run_lemma34(fixtures: FixtureFile | None = None) -> StageReport:
    return lemma34_cascade(fixtures).report


def run_identities(fixtures: FixtureFile | None = None) -> StageReport:
    """The two power-sum relations for three summands, and a four-summand control."""
    rec = Recorder(Stage.IDENTITIES, fixtures)
    table = VarTable([(f"x{i}", 1) for i in range(2, 6)])
    xs = [Poly.var(f"x{i}", table) for i in range(2, 6)]

    def sums(vs):
        return [None] + [sum((x ** k for x in vs), Poly.zero(table)) for k in range(1, 6)]

    def rel13(f):
        return f[1] ** 4 - f[1] ** 2 * f[2] * 6 + f[2] ** 2 * 3 + f[1] * f[3] * 8 - f[4] * 6

    def rel14(f):
        return f[1] ** 5 - f[1] ** 3 * f[2] * 5 + f[1] ** 2 * f[3] * 5 + f[2] * f[3] * 5 - f[5] * 6

    three = sums(xs[:3])
    four = sums(xs)
    r13, r14 = rel13(three), rel14(three)
    rec.check("3.13", r13.is_zero(), "expands to 0 in x2, x3, x4")
    rec.check("3.14", r14.is_zero(), "expands to 0 in x2, x3, x4")
    c13 = rel13(four)
    e4 = xs[0] * xs[1] * xs[2] * xs[3]
    rec.check("3.13.control", c13 == e4 * 24, "four summands give 24*x2*x3*x4*x5")
    rec.check("3.14.control", not rel14(four).is_zero(), "four summands give a nonzero expansion")
    return rec.finish()
