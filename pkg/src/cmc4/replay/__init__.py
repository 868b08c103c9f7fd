"""Stages that rebuild each equation from its predecessors and compare it with the fixtures."""

from __future__ import annotations

from typing import Callable

from ..exprio import FixtureFile
from .case_a import run_caseA
from .case_b import run_caseB
from .closure import run_caseiii_closure
from .frame_stage import run_frame
from .report import (
    FixtureMatch,
    MatchKind,
    Recorder,
    Stage,
    StageReport,
    StepRecord,
    Verdict,
    compare_fixture,
    match_polys,
)
from .section3 import run_identities, run_lemma33, run_lemma34

STAGES: dict[str, Callable[..., StageReport]] = {
    "identities": run_identities,
    "lemma33": run_lemma33,
    "lemma34": run_lemma34,
    "caseA": run_caseA,
    "caseB": run_caseB,
    "frame": run_frame,
    "caseiii": run_caseiii_closure,
}

PREREQUISITES = {"lemma34": "lemma33", "caseiii": "lemma34"}


def run_stage(name: str, fixtures: FixtureFile | None = None, done: dict[str, StageReport] | None = None) -> StageReport:
    """Run one stage after its prerequisite; a prerequisite that is not certified fails the stage."""
    done = {} if done is None else done
    pre = PREREQUISITES.get(name)
    if pre is not None:
        if pre not in done:
            done[pre] = run_stage(pre, fixtures, done)
        if done[pre].verdict is not Verdict.CERTIFIED:
            rec = Recorder(_stage_of(name), fixtures)
            rec.check("prerequisite", False, f"{pre} is {done[pre].verdict.value}")
            return rec.finish()
    report = STAGES[name](fixtures)
    done[name] = report
    return report


def _stage_of(name: str) -> Stage:
    return {
        "identities": Stage.IDENTITIES,
        "lemma33": Stage.SECTION3,
        "lemma34": Stage.SECTION3,
        "caseA": Stage.CASE_A,
        "caseB": Stage.CASE_B,
        "frame": Stage.FRAME,
        "caseiii": Stage.CASE_III_CLOSURE,
    }[name]


__all__ = [
    "FixtureMatch",
    "MatchKind",
    "PREREQUISITES",
    "Recorder",
    "STAGES",
    "Stage",
    "StageReport",
    "StepRecord",
    "Verdict",
    "compare_fixture",
    "match_polys",
    "run_caseA",
    "run_caseB",
    "run_caseiii_closure",
    "run_frame",
    "run_identities",
    "run_lemma33",
    "run_lemma34",
    "run_stage",
]
