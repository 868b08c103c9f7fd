"""Case (iii) closure: remove the derivatives of lam from b1 = 0, b2 = 0, highest first.

The route is not printed in full and intermediate expressions grow fast, so
the stage works under a term budget and a time budget and records how far it
got. It is certified only when a nonzero polynomial in c and lam is reached.
"""

from __future__ import annotations

import time

from ..diffalg import SECTION3, derive_on_locus, strip_factors
from ..elim import eliminate
from ..exprio import FixtureFile
from ..poly import Poly
from .report import Recorder, Stage, StageReport, Verdict
from .section3 import lemma34_cascade

TARGET = frozenset(["c", "lam"])


def _retry_degenerate(a: Poly, b: Poly, v: str, nv):
    """One retry after dividing declared factors out of both inputs."""
    a2, _ = strip_factors(a, nv)
    b2, _ = strip_factors(b, nv)
    return eliminate(a2.primitive(), b2.primitive(), v, nv)


def run_caseiii_closure(
    fixtures: FixtureFile | None = None, max_terms: int = 4000, time_budget: float = 120.0
) -> StageReport:
    rec = Recorder(Stage.CASE_III_CLOSURE, fixtures, best_effort=True)
    nv = SECTION3.nonvanishing
    start = time.perf_counter()

    state = lemma34_cascade(fixtures)
    rec.check("closure.prerequisite", state.report.verdict is Verdict.CERTIFIED, "b1 and b2 come from a certified cascade")
    b1, b2 = state.eqs["b1"], state.eqs["b2"]

    def eliminate_step(sid, a, b, v):
        r = eliminate(a, b, v, nv)
        notes = list(r.notes)
        if r.eliminated.is_zero():
            notes.append("zero result; retried after removing declared factors")
            r = _retry_degenerate(a, b, v, nv)
        out = r.eliminated
        rec.record(sid, out, method=r.method.value, removed=r.removed_factors, check=not out.is_zero(),
                   notes=notes + [f"{len(out)} terms"])
        return out

    def over_budget(*polys):
        if time.perf_counter() - start > time_budget:
            return f"time budget of {time_budget:g} s used"
        big = max(len(p) for p in polys)
        if big > max_terms:
            return f"operand with {big} terms exceeds the budget of {max_terms}"
        return None

    # lam5 occurs linearly in b2 and in e1(b1)
    with rec.timed():
        d1 = derive_on_locus(b1, SECTION3)
    rec.record("closure.e1(b1)", d1, method="derive_on_locus", notes=[f"{len(d1)} terms"])
    with rec.timed():
        a, b = b1, eliminate_step("closure.lam5", b2, d1, "lam5")

    reached = False
    stop = None
    for k in (4, 3, 2, 1):
        v = f"lam{k}"
        stop = over_budget(a, b)
        if stop:
            break
        with rec.timed():
            r = eliminate_step(f"closure.{v}", a, b, v)
        if r.is_zero():
            stop = f"elimination of {v} degenerated"
            break
        if k == 1:
            reached = not r.is_zero() and set(r.variables()) <= TARGET
            a = r
            break
        # a second equation free of lam_k: differentiate and eliminate against the lower-degree input
        keep = a if a.degree(v) <= b.degree(v) else b
        with rec.timed():
            d = derive_on_locus(r, SECTION3)
        rec.record(f"closure.e1({v})", d, method="derive_on_locus", notes=[f"{len(d)} terms"])
        stop = over_budget(d, keep)
        if stop:
            break
        with rec.timed():
            r2 = eliminate_step(f"closure.{v}.second", d, keep, v)
        if r2.is_zero():
            stop = f"second elimination of {v} degenerated"
            break
        a, b = r, r2

    if reached:
        rec.check("closure.terminal", True, "nonzero polynomial in c and lam reached", derived=a)
    else:
        rec.report.steps[-1].notes.append(f"stopped: {stop}")
    return rec.finish(reached)
