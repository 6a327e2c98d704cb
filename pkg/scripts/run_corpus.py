"""Solver vs. oracle over the test corpus, written as a CSV table.

    python3 scripts/run_corpus.py --out results.csv
    python3 scripts/run_corpus.py --vars 3 --count 50 --seed 7
"""
import argparse
import sys
import time

from bstsat.fulfill import solve
from bstsat.oracle import CorpusSpec, OracleBlowup, exhaustive_solve, random_corpus, structural_corpus, write_results_csv

MODES = ("ordinary", "finite")


def rows_for(corpus):
    for c in corpus:
        for mode in MODES:
            t0 = time.perf_counter()
            verdict = "SAT" if solve(c, mode) is not None else "UNSAT"
            ms = (time.perf_counter() - t0) * 1000
            try:
                expected = exhaustive_solve(c, mode=mode)
            except OracleBlowup:
                expected = "SKIPPED"
            yield {"formula": str(c), "verdict_solver": verdict, "verdict_oracle": expected,
                   "mode": mode, "time_ms": f"{ms:.3f}"}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="corpus_results.csv")
    ap.add_argument("--vars", type=int, default=2, help="2 = structural corpus, more = seeded random")
    ap.add_argument("--literals", type=int, default=3)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args(argv)
    spec = CorpusSpec(args.vars, args.literals, args.seed, args.count)
    corpus = structural_corpus(spec) if args.vars <= 2 else random_corpus(spec)
    rows = list(rows_for(corpus))
    write_results_csv(args.out, rows)
    bad = [r for r in rows if r["verdict_oracle"] not in ("SKIPPED", r["verdict_solver"])]
    skipped = sum(r["verdict_oracle"] == "SKIPPED" for r in rows)
    print(f"{len(corpus)} conjunctions, {len(rows)} rows, {skipped} oracle skips, {len(bad)} disagreements -> {args.out}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
