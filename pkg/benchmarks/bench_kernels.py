"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--large] [--json]

Workloads come from the fixture corpus: a product and an exact quotient of
two large fixtures, and Sylvester determinants from the Case B and Case A
terminal eliminations (the latter only with --large).
"""

from __future__ import annotations

import argparse
import json
import statistics
import time
from pathlib import Path

from cmc4 import kernels
from cmc4.elim import compress_power, sylvester_matrix
from cmc4.exprio import load_fixture_dir
from cmc4.poly import REGISTRY, Poly

ROOT = Path(__file__).resolve().parents[1]


def _terms(p: Poly) -> dict:
    return dict(p.terms_dict)


def _matrix(rows) -> list:
    return [[_terms(e) for e in row] for row in rows]


def workloads(fixtures, large: bool):
    a, b = fixtures["4.56"], fixtures["4.57"]
    prod = a * b
    guard = REGISTRY.guard
    yield "mul 4.56*4.57", lambda k: k.mul(_terms(a), _terms(b))
    yield "divexact (4.56*4.57)/4.56", lambda k: k.divexact(_terms(prod), _terms(a), guard)
    syl = sylvester_matrix(a, b, "y3")
    yield "bareiss 15x15 (y3-resultant)", lambda k: k.bareiss(_matrix(syl), guard)
    if large:
        kap = Poly.var("kap")
        p = sum((fixtures[f"4.36.P{m}"] * kap ** m for m in range(0, 17, 2)), Poly.zero())
        q = sum((fixtures[f"4.37.Q{m}"] * kap ** m for m in range(0, 27, 2)), Poly.zero())
        syl2 = sylvester_matrix(compress_power(p, "kap", 2), compress_power(q, "kap", 2), "kap")
        yield "bareiss 21x21 (u-resultant)", lambda k: k.bareiss(_matrix(syl2), guard)


def time_call(fn, repeat: int) -> float:
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--large", action="store_true", help="include the 21x21 determinant")
    ap.add_argument("--fixtures", type=Path, default=ROOT / "fixtures")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    fixtures = load_fixture_dir(args.fixtures)
    backends = {name: kernels.load(name) for name in kernels.available()}
    rows = []
    for label, fn in workloads(fixtures, args.large):
        results = {name: fn(mod) for name, mod in backends.items()}
        agree = len({repr(sorted(r.items())) if isinstance(r, dict) else repr(r) for r in results.values()}) == 1
        times = {name: time_call(lambda m=mod: fn(m), args.repeat) for name, mod in backends.items()}
        row = {"workload": label, "agree": agree, **{f"{n}_s": round(t, 4) for n, t in times.items()}}
        if "cython" in times:
            row["speedup"] = round(times["python"] / times["cython"], 2)
        rows.append(row)

    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"backends: {', '.join(backends)}; median of {args.repeat}")
        for r in rows:
            cols = "  ".join(f"{k}={v}" for k, v in r.items() if k != "workload")
            print(f"{r['workload']:<32} {cols}")
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
