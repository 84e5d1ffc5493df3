"""Command line: ``synth``, ``check`` and ``gen``.

Exit codes: 0 verified (or proof accepted), 2 unrealizable, 1 any error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .generators import FAMILIES, generate
from .logic import LogicError
from .problems import parse_problem, problem_to_text, witnesses_to_text
from .proof import ProofError, check_proof, proof_from_text, proof_to_dot, proof_to_text
from .sexpr import ParseError
from .solver import ResourceLimit
from .synthesis import HARD_CAP, SynthesisConfig, Unrealizable, expand_and_negate, synthesize

EXIT_OK, EXIT_ERROR, EXIT_UNREALIZABLE = 0, 1, 2


def _report(out, items: dict) -> None:
    for k, v in items.items():
        out.write(f"#report: {k}={v}\n")


def cmd_synth(args, out) -> int:
    problem = parse_problem(Path(args.file).read_text())
    cfg = SynthesisConfig(step_budget=args.step_budget, max_n=args.max_n,
                          simplify=not args.no_simplify)
    try:
        res = synthesize(problem, cfg)
    except Unrealizable as exc:
        out.write("UNREALIZABLE\n")
        out.write("counterexample: " + (" ".join(exc.counterexample) or "(any input)") + "\n")
        _report(out, {"verified": False, "realizable": False})
        return EXIT_UNREALIZABLE
    out.write(witnesses_to_text(problem, res.witnesses))
    for t in res.traces:
        r = t.report()
        out.write(f"pass {t.name}: {r['size_before']} -> {r['size_after']} nodes, "
                  f"handled {r['handled']}, {r['seconds']}s\n")
    out.write("VERIFIED\n" if res.verified else "NOT VERIFIED\n")
    _report(out, res.report)
    if args.dot:
        d = Path(args.dot)
        d.mkdir(parents=True, exist_ok=True)
        (d / "proof.dot").write_text(proof_to_dot(res.proof, res.partitions))
        (d / "local_first.dot").write_text(proof_to_dot(res.pruned, res.partitions))
        (d / "mux.dot").write_text(res.circuit.to_dot())
    if args.proof:
        Path(args.proof).write_text(proof_to_text(res.proof))
    return EXIT_OK if res.verified else EXIT_ERROR


def cmd_check(args, out) -> int:
    """The formula is a problem file; the proof must refute its partition clauses."""
    problem = parse_problem(Path(args.formula).read_text())
    ps = expand_and_negate(problem, not args.no_simplify, args.max_n)
    proof = proof_from_text(problem.store, Path(args.proof).read_text())
    rep = check_proof(proof, ps.all_clauses())
    out.write(str(rep) + "\n")
    _report(out, {"accepted": rep.ok, "nodes": len(proof)})
    return EXIT_OK if rep.ok else EXIT_ERROR


def cmd_gen(args, out) -> int:
    out.write(problem_to_text(generate(args.family, args.n)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multinterp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--max-n", type=int, default=HARD_CAP, help="control signal cap")
        sp.add_argument("--no-simplify", action="store_true",
                        help="keep formulas unsimplified during expansion and interpolation")

    s = sub.add_parser("synth", help="synthesize witnesses for a problem file")
    s.add_argument("file")
    s.add_argument("--dot", metavar="DIR", help="write proof and mux DOT files here")
    s.add_argument("--proof", metavar="FILE", help="write the solver proof here")
    s.add_argument("--step-budget", type=int, default=2_000_000)
    common(s)
    s.set_defaults(func=cmd_synth)

    c = sub.add_parser("check", help="check a proof against a problem's partitions")
    c.add_argument("proof")
    c.add_argument("formula")
    common(c)
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("gen", help="print a benchmark problem")
    g.add_argument("family", choices=sorted(FAMILIES))
    g.add_argument("n", type=int)
    g.add_argument("--seed", type=int, default=None, help="accepted for uniformity; families are deterministic")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ParseError, ProofError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
    except (LogicError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR
