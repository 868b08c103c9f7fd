"""Step records, stage reports and fixture comparison."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from ..diffalg import strip_factors
from ..exprio import FixtureFile, render
from ..poly import INHOMOGENEOUS, Poly


class MatchKind(str, Enum):
    EXACT = "Exact"
    UP_TO_SCALAR = "UpToScalar"
    MISMATCH = "Mismatch"
    NO_FIXTURE = "NoFixture"


class Verdict(str, Enum):
    CERTIFIED = "Certified"
    FAILED = "Failed"
    BEST_EFFORT = "BestEffort"


class Stage(str, Enum):
    IDENTITIES = "Identities"
    SECTION3 = "Section3"
    CASE_A = "CaseA"
    CASE_B = "CaseB"
    FRAME = "Frame"
    CASE_III_CLOSURE = "CaseIIIClosure"


@dataclass(frozen=True)
class FixtureMatch:
    """Outcome of comparing a derived polynomial with a fixture.

    ``ratio`` is (p, q) with q*derived = p*fixture after any factor removal.
    ``stripped`` lists (side, factor text, multiplicity) for factors divided
    out before the comparison succeeded.
    """

    kind: MatchKind
    ratio: tuple[int, int] | None = None
    diff: tuple[str, ...] = ()
    stripped: tuple[tuple[str, str, int], ...] = ()

    @property
    def ok(self) -> bool:
        return self.kind in (MatchKind.EXACT, MatchKind.UP_TO_SCALAR)

    def describe(self) -> str:
        if self.kind is MatchKind.UP_TO_SCALAR and self.ratio:
            p, q = self.ratio
            s = f"UpToScalar({p}/{q})" if q != 1 else f"UpToScalar({p})"
        else:
            s = self.kind.value
        if self.stripped:
            s += " after removing " + ", ".join(f"{side}:({f})^{k}" for side, f, k in self.stripped)
        return s


@dataclass
class StepRecord:
    id: str
    paper_eq: str = ""
    derived: Poly | None = None
    fixture_match: FixtureMatch = field(default_factory=lambda: FixtureMatch(MatchKind.NO_FIXTURE))
    method: str = ""
    removed_factors: tuple = ()
    weight: object = None
    elapsed: float = 0.0
    check: bool | None = None
    fixture_id: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        if self.check is False:
            return False
        if self.fixture_id is not None:
            return self.fixture_match.ok
        return self.fixture_match.kind is not MatchKind.MISMATCH

    def degree_summary(self) -> dict:
        p = self.derived
        if p is None or p.is_zero():
            return {}
        out = {"terms": len(p), "total": p.degree()}
        for v in p.variables():
            out[v] = p.degree(v)
        return out


@dataclass
class StageReport:
    stage: Stage
    steps: list[StepRecord] = field(default_factory=list)
    verdict: Verdict = Verdict.FAILED
    best_effort: bool = False
    elapsed: float = 0.0

    def step(self, sid: str) -> StepRecord:
        for s in self.steps:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def finalize(self, reached: bool = True) -> StageReport:
        """Set the verdict from the steps; best-effort stages that did not reach their goal get BestEffort."""
        if not all(s.ok for s in self.steps):
            self.verdict = Verdict.FAILED
        elif self.best_effort and not reached:
            self.verdict = Verdict.BEST_EFFORT
        else:
            self.verdict = Verdict.CERTIFIED
        return self

    @property
    def failures(self) -> list[StepRecord]:
        return [s for s in self.steps if not s.ok]


def _ratio(a: int, b: int) -> tuple[int, int]:
    f = Fraction(a, b)
    return f.numerator, f.denominator


def _diff(a: Poly, b: Poly, limit: int = 10) -> tuple[str, ...]:
    """First monomials (by descending order) where a and b differ."""
    ta, tb = a.terms_dict, b.terms_dict
    keys = sorted(set(ta) | set(tb), reverse=True)
    out = []
    names = a.table.names
    for k in keys:
        ca, cb = ta.get(k, 0), tb.get(k, 0)
        if ca != cb:
            exps = a.table.decode(k)
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e) or "1"
            out.append(f"{mono}: derived {ca}, fixture {cb}")
            if len(out) >= limit:
                break
    return tuple(out)


def match_polys(derived: Poly, fixture: Poly, factors: Sequence[Poly] = ()) -> FixtureMatch:
    """Compare two polynomials up to a nonzero integer scalar.

    When the primitive parts differ, powers of each of ``factors`` are
    divided out of both sides and the comparison is repeated; what was
    removed is part of the verdict.
    """
    if derived.is_zero() or fixture.is_zero():
        if derived.is_zero() and fixture.is_zero():
            return FixtureMatch(MatchKind.EXACT)
        return FixtureMatch(MatchKind.MISMATCH, diff=("one side is zero",))
    if derived == fixture:
        return FixtureMatch(MatchKind.EXACT)
    cd, pd = derived.content_primitive()
    cf, pf = fixture.content_primitive()
    if pd == pf:
        return FixtureMatch(MatchKind.UP_TO_SCALAR, _ratio(cd, cf))
    if pd == -pf:
        return FixtureMatch(MatchKind.UP_TO_SCALAR, _ratio(-cd, cf))
    if factors:
        sd, rd = strip_factors(derived, factors)
        sf, rf = strip_factors(fixture, factors)
        inner = match_polys(sd, sf)
        if inner.ok:
            stripped = tuple(("derived", render(f), k) for f, k in rd) + tuple(("fixture", render(f), k) for f, k in rf)
            return FixtureMatch(MatchKind.UP_TO_SCALAR, inner.ratio or (1, 1), stripped=stripped)
    return FixtureMatch(MatchKind.MISMATCH, diff=_diff(pd, pf))


def compare_fixture(step: StepRecord, fixtures: FixtureFile, factors: Sequence[Poly] = ()) -> FixtureMatch:
    fid = step.fixture_id
    if fid is None or step.derived is None or fid not in fixtures:
        return FixtureMatch(MatchKind.NO_FIXTURE)
    return match_polys(step.derived, fixtures[fid], factors)


class Recorder:
    """Builds a StageReport step by step, timing each step."""

    def __init__(self, stage: Stage, fixtures: FixtureFile | None, best_effort: bool = False):
        self.report = StageReport(stage, best_effort=best_effort)
        self.fixtures = fixtures if fixtures is not None else FixtureFile()
        self._t0 = time.perf_counter()
        self._mark = self._t0

    def _elapsed(self) -> float:
        now = time.perf_counter()
        d = now - self._mark
        self._mark = now
        return d

    @contextmanager
    def timed(self):
        """Reset the step clock so the next record measures only the enclosed work."""
        self._mark = time.perf_counter()
        yield

    def fixture(self, fid: str) -> Poly:
        return self.fixtures[fid]

    def record(
        self,
        sid: str,
        derived: Poly | None,
        *,
        fixture_id: str | None = None,
        paper_eq: str = "",
        method: str = "",
        removed: Iterable = (),
        factors: Sequence[Poly] = (),
        check: bool | None = None,
        notes: Iterable[str] = (),
    ) -> StepRecord:
        removed = tuple((render(f), k) if isinstance(f, Poly) else (f, k) for f, k in removed)
        weight = None
        if derived is not None:
            weight = INHOMOGENEOUS if derived.is_zero() else derived.weight()
        step = StepRecord(
            id=sid,
            paper_eq=paper_eq or (f"({fixture_id.split('.')[0]}.{fixture_id.split('.')[1]})" if fixture_id else ""),
            derived=derived,
            method=method,
            removed_factors=removed,
            weight=weight,
            check=check,
            fixture_id=fixture_id,
            notes=list(notes),
        )
        if fixture_id is not None:
            step.fixture_match = compare_fixture(step, self.fixtures, factors)
            if fixture_id not in self.fixtures:
                step.notes.append(f"fixture {fixture_id} not found")
        step.elapsed = self._elapsed()
        self.report.steps.append(step)
        return step

    def check(self, sid: str, ok: bool, note: str = "", derived: Poly | None = None) -> StepRecord:
        return self.record(sid, derived, check=bool(ok), notes=[note] if note else [])

    def finish(self, reached: bool = True) -> StageReport:
        self.report.elapsed = time.perf_counter() - self._t0
        return self.report.finalize(reached)
