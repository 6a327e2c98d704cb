"""Command-line front end: ``bstsat solve [options] FORMULA``.

Exit status: 0 SAT, 1 UNSAT, 2 usage or parse error, 3 UNKNOWN (resource
limit), 4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from . import formula as fm
from .construct import ConstructionError, build_state, initialize, model_of, stabilize_fair
from .fulfill import Mode, decide
from .hfset import EMPTY
from .oracle import OracleBlowup, exhaustive_solve, sample_models
from .partition import evaluate
from .tgraph import node_key

EXIT_SAT, EXIT_UNSAT, EXIT_USAGE, EXIT_UNKNOWN, EXIT_INTERNAL = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    text: str
    mode: Mode = Mode.ORDINARY
    emit_model: bool = False
    emit_cert: str | None = None
    max_regions: int | None = None
    fair_rounds: int = 0
    oracle_check: bool = False
    seed: int = 0
    trace: bool = False

    def __post_init__(self):
        if self.fair_rounds < 0:
            raise ValueError("fair_rounds must be nonnegative")
        if self.max_regions is not None and self.max_regions < 0:
            raise ValueError("max_regions must be nonnegative")


class InvariantViolation(RuntimeError):
    pass


def _oracle_verdict(phi, mode: Mode) -> str:
    verdicts = [exhaustive_solve(fm.normalize(c), mode=mode.value) for c in fm.to_dnf(phi)]
    return "SAT" if "SAT" in verdicts else "UNSAT"


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        phi = fm.parse(cfg.text)
    except fm.ParseError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    t0 = time.perf_counter()
    verdict = decide(phi, cfg.mode, max_places=cfg.max_regions)
    ms = (time.perf_counter() - t0) * 1000
    places = verdict.certificate.places if verdict.certificate else 0
    print(
        f"verdict: {verdict.status} mode: {cfg.mode.value} regions: {verdict.region_sets} "
        f"places: {places} time_ms: {ms:.1f}",
        file=out,
    )
    for note in verdict.notes:
        print(f"note: {note}", file=err)
    try:
        if cfg.oracle_check and verdict.status != "UNKNOWN":
            _check_with_oracle(phi, cfg, verdict.status, out)
        if verdict.sat:
            cert = verdict.certificate
            cert.validate()
            if cfg.emit_cert:
                with open(cfg.emit_cert, "w") as fh:
                    fh.write(cert.dumps() + "\n")
            if cfg.mode == Mode.ORDINARY and cfg.fair_rounds:
                st = initialize(cert.graph)
                st, residual = stabilize_fair(cert.graph, st, cfg.fair_rounds)
                _emit_trace(cfg, st, err)
                print(
                    f"fair: rounds: {cfg.fair_rounds} explicit: {st.explicit_rounds} "
                    f"symbolic: {st.symbolic_rounds} residual: "
                    f"{sorted(node_key(n) for n in residual)}",
                    file=out,
                )
            if cfg.emit_model:
                _emit_model(phi, verdict, cfg, out, err)
    except (InvariantViolation, AssertionError, ConstructionError) as exc:
        print(f"internal error: {exc}", file=err)
        return EXIT_INTERNAL
    return {"SAT": EXIT_SAT, "UNSAT": EXIT_UNSAT}.get(verdict.status, EXIT_UNKNOWN)


def _emit_trace(cfg, st, err):
    if cfg.trace:
        for ev in st.trace:
            print(f"trace: {ev}", file=err)


def _check_with_oracle(phi, cfg, status, out):
    try:
        expected = _oracle_verdict(phi, cfg.mode)
    except OracleBlowup as exc:
        print(f"oracle: skipped ({exc})", file=out)
    else:
        print(f"oracle: {expected}", file=out)
        if expected != status:
            raise InvariantViolation(f"solver says {status}, oracle says {expected}")
    if status == "UNSAT" and cfg.mode == Mode.ORDINARY:
        M = sample_models(phi, trials=500, seed=cfg.seed)
        if M is not None:
            raise InvariantViolation("sampler found a model for an UNSAT verdict")


def _emit_model(phi, verdict, cfg, out, err):
    cert = verdict.certificate
    if cert.order is None:
        print("model: none (no ⊗-order; every model of this certificate is infinite)", file=out)
        return
    st = build_state(cert, record=cfg.trace)
    _emit_trace(cfg, st, err)
    M = model_of(cert, st)
    model = {v: M.get(v, EMPTY) for v in sorted(fm.vars_of(phi))}
    if not evaluate(model, phi):
        raise InvariantViolation("constructed model does not satisfy the formula")
    print("model: " + json.dumps({v: s.encoding for v, s in model.items()}, sort_keys=True), file=out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bstsat", description="Decide BST⊗ formulas.")
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="decide one formula")
    s.add_argument("formula", nargs="?", help="formula text, or '-' for stdin")
    s.add_argument("--file", help="read the formula from a file")
    s.add_argument("--finite", action="store_true", help="hereditarily finite satisfiability")
    s.add_argument("--model", action="store_true", help="print a verified finite model")
    s.add_argument("--cert", metavar="PATH", help="write the certificate as JSON")
    s.add_argument("--max-regions", type=int, metavar="K", help="cap on places per certificate")
    s.add_argument("--fair-rounds", type=int, default=0, metavar="N",
                   help="run N fair stabilization rounds on an ordinary certificate")
    s.add_argument("--oracle", action="store_true", help="cross-check with the brute-force oracle")
    s.add_argument("--seed", type=int, default=0, metavar="S", help="seed for the model sampler")
    s.add_argument("--trace", action="store_true", help="print construction events to stderr")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if (args.formula is None) == (args.file is None):
        ap.error("give exactly one of FORMULA or --file")
    if args.file is not None:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    elif args.formula == "-":
        text = sys.stdin.read()
    else:
        text = args.formula
    try:
        cfg = RunConfig(
            text=text,
            mode=Mode.FINITE if args.finite else Mode.ORDINARY,
            emit_model=args.model,
            emit_cert=args.cert,
            max_regions=args.max_regions,
            fair_rounds=args.fair_rounds,
            oracle_check=args.oracle,
            seed=args.seed,
            trace=args.trace,
        )
    except ValueError as exc:
        ap.error(str(exc))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
