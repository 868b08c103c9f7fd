"""Command-line driver: ``cmc4 verify <stages> [--fixtures DIR] [--json] ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .exprio import load_fixture_dir, render, render_latex
from .poly import INHOMOGENEOUS
from .replay import PREREQUISITES, STAGES, StageReport, Verdict, run_stage

STAGE_NAMES = tuple(STAGES)
ORDER = {name: i for i, name in enumerate(STAGE_NAMES)}
LATEX_TERM_LIMIT = 2000


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    stages: tuple[str, ...]
    fixtures_dir: Path
    output: str = "text"
    latex_dir: Path | None = None
    parallelism: int = 1
    verbose: bool = False
    allow_best_effort: bool = False


def default_fixtures_dir() -> Path:
    env = os.environ.get("CMC4_FIXTURES")
    if env:
        return Path(env)
    local = Path("fixtures")
    if local.is_dir():
        return local
    return Path(__file__).resolve().parents[2] / "fixtures"


def _expand(stages) -> tuple[str, ...]:
    if "all" in stages:
        return STAGE_NAMES
    seen = dict.fromkeys(stages)
    return tuple(sorted(seen, key=ORDER.__getitem__))


def _groups(stages: tuple[str, ...]) -> list[tuple[str, ...]]:
    """Stages joined with their selected prerequisites, so each group runs in one worker."""
    groups: list[list[str]] = []
    where: dict[str, int] = {}
    for name in stages:
        pre = PREREQUISITES.get(name)
        while pre is not None and pre not in stages:
            pre = PREREQUISITES.get(pre)
        if pre is not None and pre in where:
            groups[where[pre]].append(name)
            where[name] = where[pre]
        else:
            where[name] = len(groups)
            groups.append([name])
    return [tuple(g) for g in groups]


def _run_group(fixtures_dir: str, names: tuple[str, ...]) -> list[tuple[str, StageReport]]:
    fixtures = load_fixture_dir(fixtures_dir)
    done: dict[str, StageReport] = {}
    return [(name, run_stage(name, fixtures, done)) for name in names]


def run(config: RunConfig) -> list[tuple[str, StageReport]]:
    groups = _groups(config.stages)
    fixtures_dir = str(config.fixtures_dir)
    results: dict[str, StageReport] = {}
    if config.parallelism > 1 and len(groups) > 1:
        with ProcessPoolExecutor(max_workers=min(config.parallelism, len(groups))) as pool:
            futures = [pool.submit(_run_group, fixtures_dir, g) for g in groups]
            for f in futures:
                results.update(f.result())
    else:
        for g in groups:
            results.update(_run_group(fixtures_dir, g))
    return [(name, results[name]) for name in config.stages]


def _weight(w):
    if w is None:
        return None
    if w is INHOMOGENEOUS:
        return "Inhomogeneous"
    return w


def _step_json(step, verbose: bool) -> dict:
    m = step.fixture_match
    out = {
        "id": step.id,
        "paper_eq": step.paper_eq,
        "match": m.kind.value,
        "method": step.method,
        "weight": _weight(step.weight),
        "degree_summary": step.degree_summary(),
        "elapsed_ms": round(step.elapsed * 1000, 3),
    }
    if m.ratio is not None:
        out["ratio"] = list(m.ratio)
    if m.stripped:
        out["stripped"] = [list(s) for s in m.stripped]
    if m.diff:
        out["diff"] = list(m.diff)
    if step.removed_factors:
        out["removed_factors"] = [list(r) for r in step.removed_factors]
    if step.check is not None:
        out["check"] = step.check
    if step.notes:
        out["notes"] = list(step.notes)
    out["ok"] = step.ok
    if verbose and step.derived is not None:
        out["derived"] = render(step.derived)
    return out


def emit_json(reports, verbose: bool = False) -> str:
    """Stable JSON for a list of (name, StageReport) pairs or bare reports."""
    items = []
    for item in reports:
        name, report = item if isinstance(item, tuple) else (None, item)
        entry = {"stage": report.stage.value}
        if name is not None:
            entry["name"] = name
        entry["verdict"] = report.verdict.value
        entry["steps"] = [_step_json(s, verbose) for s in report.steps]
        items.append(entry)
    return json.dumps(items, indent=2)


def emit_text(reports, verbose: bool = False) -> str:
    lines = []
    for name, report in reports:
        lines.append(f"{name}: {report.verdict.value} ({len(report.steps)} steps, {report.elapsed:.2f} s)")
        for s in report.steps:
            if verbose or not s.ok:
                flag = "ok  " if s.ok else "FAIL"
                extra = f" [{'; '.join(s.notes)}]" if s.notes else ""
                lines.append(f"  {flag} {s.id}: {s.fixture_match.describe()} {s.method}{extra}")
                if not s.ok:
                    lines.extend(f"       {d}" for d in s.fixture_match.diff)
                if verbose and s.derived is not None and len(s.derived) <= 50:
                    lines.append(f"       = {render(s.derived)}")
    return "\n".join(lines)


def write_latex(reports, directory: Path) -> list[Path]:
    """One file per derived equation, named after the step id."""
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for _, report in reports:
        for s in report.steps:
            if s.derived is None or s.fixture_id is None or len(s.derived) > LATEX_TERM_LIMIT:
                continue
            path = directory / f"{s.id}.tex"
            path.write_text(f"% {s.paper_eq} {s.fixture_match.describe()}\n{render_latex(s.derived)} = 0\n")
            written.append(path)
    return written


def _succeeded(report: StageReport, allow_best_effort: bool) -> bool:
    if report.verdict is Verdict.CERTIFIED:
        return True
    return allow_best_effort and report.verdict is Verdict.BEST_EFFORT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmc4", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run verification stages")
    v.add_argument("stages", nargs="+", choices=STAGE_NAMES + ("all",), metavar="STAGE",
                   help=f"one or more of: {', '.join(STAGE_NAMES)}, all")
    v.add_argument("--fixtures", type=Path, default=None, help="fixture directory (default: $CMC4_FIXTURES or ./fixtures)")
    v.add_argument("--json", action="store_true", help="emit a JSON report")
    v.add_argument("--latex-out", type=Path, default=None, help="write one .tex file per derived equation")
    v.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker processes")
    v.add_argument("--allow-best-effort", action="store_true", help="count BestEffort stages as success")
    v.add_argument("--verbose", action="store_true", help="include every step and the polynomials")
    return parser


def config_from_args(args) -> RunConfig:
    fixtures = args.fixtures if args.fixtures is not None else default_fixtures_dir()
    if not fixtures.is_dir():
        raise ConfigError(f"fixtures directory not found: {fixtures}")
    if args.threads < 1:
        raise ConfigError("--threads must be positive")
    return RunConfig(
        stages=_expand(args.stages),
        fixtures_dir=fixtures,
        output="json" if args.json else "text",
        latex_dir=args.latex_out,
        parallelism=args.threads,
        verbose=args.verbose,
        allow_best_effort=args.allow_best_effort,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = config_from_args(args)
    except ConfigError as exc:
        print(f"cmc4: {exc}", file=sys.stderr)
        return 2
    reports = run(config)
    if config.output == "json":
        print(emit_json(reports, config.verbose))
    else:
        print(emit_text(reports, config.verbose))
    if config.latex_dir is not None:
        write_latex(reports, config.latex_dir)
    return 0 if all(_succeeded(r, config.allow_best_effort) for _, r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
