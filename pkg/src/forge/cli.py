"""Command-line entry point: ``forge build | corrections | verify``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from forge import oracle
from forge.aux_ops import to_stabilizers
from forge.codes import CodeSpec
from forge.graph_state import export, to_graph
from forge.stabilizer import StabilizerTableau
from forge.tasks import CompositionPlan, CorrectionTable


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_build(args) -> int:
    if args.spec:
        t = to_stabilizers(CodeSpec.parse(args.spec).build())
    elif args.plan:
        t = CompositionPlan.from_json(Path(args.plan).read_text()).build()
    else:
        raise SystemExit("build needs a plan file or --spec")
    _write(args.out, t.to_json(indent=2) + "\n")
    if args.graph:
        _write(args.graph, export(to_graph(t), args.format))
    return 0


def cmd_corrections(args) -> int:
    t = StabilizerTableau.from_json(Path(args.tableau).read_text())
    table = CorrectionTable.for_tableau(t, max_inputs=args.max_inputs)
    sys.stdout.write(json.dumps(table.to_dict(), indent=2) + "\n")
    return 0


def cmd_verify(args) -> int:
    t = StabilizerTableau.from_json(Path(args.tableau).read_text())
    t.validate()
    print(f"tableau: {t.n} qubits, {len(t.generators)} independent commuting generators")
    if t.full_rank:
        g = to_graph(t)
        print(f"graph: {len(g.edges())} edges, local Cliffords reproduce the group")
    if t.n > oracle.MAX_QUBITS:
        print(f"dense check skipped (more than {oracle.MAX_QUBITS} qubits)")
        return 0
    if not t.full_rank:
        print("dense check skipped (tableau is not full rank)")
        return 0
    s = oracle.state_of(t)
    bad = [str(p) for p in t.generators if not oracle.expectation_ok(p, s)]
    if bad:
        print("dense check FAILED for " + ", ".join(bad))
        return 1
    print("dense check: every generator has eigenvalue +1")
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forge", description="Stabilizer descriptions of concatenated resource states.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a tableau from a plan file or a task spec")
    b.add_argument("plan", nargs="?", help="composition plan (JSON)")
    b.add_argument("--spec", help="single task, e.g. bitflip:3@2 or dejmps:alice@3")
    b.add_argument("--out", default="-", help="tableau JSON output (default stdout)")
    b.add_argument("--graph", help="also write the local-Clifford graph here")
    b.add_argument("--format", choices=("dot", "graphml", "json"), default="dot")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("corrections", help="output corrections for every read-in outcome pattern")
    c.add_argument("tableau")
    c.add_argument("--max-inputs", type=int, default=6,
                   help="enumerate all patterns up to this many inputs, single-qubit ones beyond")
    c.set_defaults(func=cmd_corrections)

    v = sub.add_parser("verify", help="check tableau invariants, graph conversion and the dense state")
    v.add_argument("tableau")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"forge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
