"""Command-line front end: ``pschema {ground,solve,cnf,translate,bench}``.

Exit statuses: 0 success (and count-only runs), 2 input or usage error,
3 core not exportable to CNF, 10 satisfiable, 20 unsatisfiable.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import bench, dimacs, translate
from .errors import Inconsistent, PSError
from .parser import parse_constants, parse_data
from .pipeline import core_of, make_pair, read_text
from .solver import Solver, SolverStats
from .theory import GroundTheory, dump_gnd, format_atom, load_gnd

EXIT_OK, EXIT_INPUT, EXIT_EXPORT, EXIT_SAT, EXIT_UNSAT = 0, 2, 3, 10, 20


def _check_paths(paths) -> None:
    for p in paths:
        if p is not None and not Path(p).is_file():
            raise PSError("E_IO", f"no such file: {p}")


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _core(args) -> GroundTheory:
    """The ground core named by --core, or built from -d/-p sources."""
    if getattr(args, "core", None):
        _check_paths([args.core])
        return load_gnd(read_text(args.core))
    if not args.program:
        raise PSError("E_USAGE", "need at least one -p program file (or --core)")
    _check_paths(args.data + args.program)
    pair = make_pair([(f, read_text(f)) for f in args.data],
                     [(f, read_text(f)) for f in args.program],
                     parse_constants(args.const))
    return core_of(pair)


def _show_filter(args):
    return set(args.show.split(",")) if args.show else None


def cmd_ground(args) -> int:
    try:
        core = _core(args)
    except Inconsistent:
        print("grounding proves the theory inconsistent", file=sys.stderr)
        return EXIT_UNSAT
    _write(args.output, dump_gnd(core))
    print(f"atoms: {len(core.atoms)} open: {len(core.unassigned())} rules: {core.num_rules} "
          f"size: {core.size()}", file=sys.stderr)
    return EXIT_OK


def cmd_solve(args) -> int:
    stats = SolverStats()
    count = 0
    try:
        core = _core(args)
    except Inconsistent:
        core = None
    if core is not None:
        solver = Solver(core)
        solver.stats = stats
        show = _show_filter(args)
        limit = None if args.models == 0 else args.models
        for m in solver.models(limit):
            count += 1
            if args.models != 0:
                print(" ".join(core.render(m, show)))
    if args.models == 0:
        print(count)
    if args.stats:
        for line in stats.lines():
            print(line, file=sys.stderr)
    if args.models == 0:
        return EXIT_OK
    return EXIT_SAT if count else EXIT_UNSAT


def cmd_cnf(args) -> int:
    target = args.dimacs or args.output
    if target is None:
        raise PSError("E_USAGE", "cnf needs --dimacs FILE (or -o FILE)")
    map_path = args.map or f"{target}.map"
    try:
        core = _core(args)
    except Inconsistent:
        _write(target, "c inconsistent at grounding\np cnf 0 1\n0\n")
        Path(map_path).write_text("", encoding="utf-8")
        return EXIT_UNSAT
    text, vm = dimacs.export_cnf(core)
    _write(target, text)
    Path(map_path).write_text(vm.dumps(core), encoding="utf-8")
    header = next(line for line in text.splitlines() if line.startswith("p cnf"))
    print(f"variables: {vm.num_vars} clauses: {header.split()[3]}", file=sys.stderr)
    return EXIT_OK


def cmd_translate(args) -> int:
    _check_paths([args.program] + args.data)
    program = translate.PureProgram(translate.parse_datalog(read_text(args.program), args.program))
    if args.emit_ps:
        _write(args.output, translate.format_ps(program))
        return EXIT_OK
    facts = set()
    for f in args.data:
        facts |= parse_data(read_text(f), f)
    data = [(a.pred, *(t.value for t in a.args)) for a in facts]
    show = args.show.split(",") if args.show else None
    count = 0
    for proj in translate.supported_models(data, program, show):
        count += 1
        if args.models == 0:
            continue
        print(" ".join(sorted(format_atom(a) for a in proj)))
        if args.models is not None and count >= args.models:
            break
    if args.models == 0:
        print(count)
        return EXIT_OK
    return EXIT_SAT if count else EXIT_UNSAT


def cmd_bench(args) -> int:
    results = []
    failed = False
    for n in args.n:
        for seed in range(args.seed, args.seed + args.instances):
            spec = bench.InstanceSpec(args.problem, n, args.m, args.k, seed, args.variant)
            inst = bench.generate_instance(spec)
            res = bench.run(inst, None if args.models == 0 else args.models)
            results.append(res)
            if args.check:
                rep = bench.check_correspondence(inst, res.models)
                for v in rep.violations:
                    print(f"{spec.label()}: {v}", file=sys.stderr)
                failed |= not rep.ok
    if args.output and args.output != "-":
        with open(args.output, "w", newline="", encoding="utf-8") as out:
            bench.write_csv(results, out)
    else:
        bench.write_csv(results, sys.stdout)
    return 1 if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pschema", description="Ground and solve PS/PS+ data-program pairs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def sources(p, core=True):
        p.add_argument("-d", "--data", action="append", default=[], metavar="FILE", help="data file (repeatable)")
        p.add_argument("-p", "--program", action="append", default=[], metavar="FILE", help="program file (repeatable)")
        p.add_argument("-c", "--const", action="append", default=[], metavar="NAME=VALUE", help="constant binding")
        if core:
            p.add_argument("--core", metavar="FILE", help="read a ground core instead of sources")

    p = sub.add_parser("ground", help="compute the ground core")
    sources(p, core=False)
    p.add_argument("-o", "--output", metavar="FILE", help="core file (default stdout)")
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("solve", help="enumerate models")
    sources(p)
    p.add_argument("--models", type=int, default=1, metavar="N", help="models to print; 0 counts all")
    p.add_argument("--show", metavar="P1,P2", help="only print these predicates")
    p.add_argument("--stats", action="store_true", help="search statistics on stderr")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("cnf", help="export a plain core to DIMACS")
    sources(p)
    p.add_argument("--dimacs", metavar="FILE", help="CNF output")
    p.add_argument("--map", metavar="FILE", help="variable map (default <cnf>.map)")
    p.add_argument("-o", "--output", metavar="FILE", help="same as --dimacs")
    p.set_defaults(func=cmd_cnf)

    p = sub.add_parser("translate", help="supported models of a pure DATALOG program")
    p.add_argument("program", metavar="PROGRAM.dlg")
    p.add_argument("-d", "--data", action="append", default=[], metavar="FILE")
    p.add_argument("--models", type=int, metavar="N", help="models to print (default all); 0 counts")
    p.add_argument("--show", metavar="P1,P2")
    p.add_argument("--emit-ps", action="store_true", help="print the PS rules instead of solving")
    p.add_argument("-o", "--output", metavar="FILE")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("bench", help="run generated instances and emit CSV")
    p.add_argument("problem", choices=bench.PROBLEMS)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=1, help="consecutive seeds per n")
    p.add_argument("--variant", choices=bench.VARIANTS, default="plain")
    p.add_argument("--models", type=int, default=0, metavar="N", help="model limit; 0 enumerates all")
    p.add_argument("--check", action="store_true", help="compare against the brute-force oracle")
    p.add_argument("-o", "--output", metavar="FILE")
    p.set_defaults(func=cmd_bench)
    return ap


EXPORT_CODES = {"E_CATOM_PRESENT", "E_HORN_PRESENT"}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_EXPORT if e.code in EXPORT_CODES else EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
