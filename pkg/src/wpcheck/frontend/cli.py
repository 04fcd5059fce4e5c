"""Command-line interface: ``wpcheck run|wp|check|simplify|example|corpus``.

Exit codes: 0 success or pass, 1 check failed, 2 usage, parse or type error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from ..carriers import Bounds, EnumerationError, enumerate_carrier
from ..checker import (
    CheckError, CheckReport, PostPair, check_equivalence, check_extension,
    check_monotonicity, check_necessity, check_sufficiency, simplifier_mismatches,
    weakenings,
)
from ..formula import FormulaError, formula_to_json, print_formula, simplify
from ..program import ProgramError, run, wp_formula
from ..rws import RwsInput
from ..values import EvalError, FnTable, Just, Left, Nat, Right, UNIT, TRUE, FALSE, NOTHING, render
from .compiler import CompiledUnit, compile_unit
from .sexpr import Atom as SAtom, FrontendError, SList, read_all
from .syntax import parse_unit, print_unit

EXAMPLES = {"paper-intro": "paper_intro.east"}
DEFAULT_SEED = 0

_ERRORS = (FrontendError, CheckError, EvalError, ProgramError, EnumerationError, FormulaError)


class UsageError(Exception):
    pass


def example_source(name: str) -> str:
    try:
        filename = EXAMPLES[name]
    except KeyError:
        raise UsageError(f"unknown example {name!r}; known: {', '.join(EXAMPLES)}") from None
    return resources.files("wpcheck").joinpath("data", filename).read_text(encoding="utf-8")


def load(path: str) -> CompiledUnit:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"file not found: {path}")
    return compile_unit(parse_unit(p.read_text(encoding="utf-8")))


def parse_literal(text: str, domains):
    """Table cell values: ``w0``, ``nothing``, ``just-w0``, ``left-s1``, ``unit``, ``3``."""
    consts = {"unit": UNIT, "true": TRUE, "false": FALSE, "nothing": NOTHING}
    if text in consts:
        return consts[text]
    if text.isdigit():
        return Nat(int(text))
    for prefix, ctor in (("just-", Just), ("left-", Left), ("right-", Right)):
        if text.startswith(prefix):
            return ctor(parse_literal(text[len(prefix):], domains))
    atom = domains.atom(text)
    if atom is None:
        raise UsageError(f"unknown value {text!r}")
    return atom


def parse_table(spec: str, compiled: CompiledUnit) -> tuple:
    """``g=s0:just-w0,s1:nothing`` → ``("g", FnTable)``."""
    name, eq, body = spec.partition("=")
    if not eq:
        raise UsageError(f"--param expects NAME=TABLE, got {spec!r}")
    types = compiled.param_types
    if name not in types:
        raise UsageError(f"unknown parameter {name!r}")
    ty, domains = types[name], compiled.domains
    entries = {}
    for cell in filter(None, body.split(",")):
        key, colon, val = cell.partition(":")
        if not colon:
            raise UsageError(f"table cell {cell!r} should be KEY:VALUE")
        entries[parse_literal(key, domains)] = parse_literal(val, domains)
    keys = list(enumerate_carrier(ty.dom, domains))
    missing = [render(k) for k in keys if k not in entries]
    if missing:
        raise UsageError(f"table for {name} misses {', '.join(missing)}")
    extra = [render(k) for k in entries if k not in keys]
    if extra:
        raise UsageError(f"table for {name} has keys outside its domain: {', '.join(extra)}")
    cod = set(enumerate_carrier(ty.cod, domains))
    bad = [render(v) for v in entries.values() if v not in cod]
    if bad:
        raise UsageError(f"table for {name} has values outside {ty.cod}: {', '.join(bad)}")
    return name, FnTable(ty.dom, ty.cod, tuple((k, entries[k]) for k in keys))


def parse_input(text: str, compiled: CompiledUnit) -> RwsInput:
    forms = read_all(text)
    if len(forms) != 1 or not isinstance(forms[0], SList) or len(forms[0].items) != 2 \
            or not all(isinstance(x, SAtom) for x in forms[0].items):
        raise UsageError(f"--input expects (ENV STATE), got {text!r}")
    env, state = (compiled.domains.atom(x.text) for x in forms[0].items)
    if env is None or env.sort != "Ev":
        raise UsageError(f"{forms[0].items[0].text!r} is not an Ev atom")
    if state is None or state.sort != "St":
        raise UsageError(f"{forms[0].items[1].text!r} is not a St atom")
    return RwsInput(env, state)


def _tables(args, compiled):
    return dict(parse_table(p, compiled) for p in args.param or [])


def _bounds(args):
    if args.max_list_len < 0:
        raise UsageError("--max-list-len must be non-negative")
    return Bounds(max_list_len=args.max_list_len)


def cmd_run(args, out):
    compiled = load(args.file)
    tables = _tables(args, compiled)
    unbound = [n for n in compiled.param_types if n not in tables]
    if unbound:
        raise UsageError(f"parameter(s) {', '.join(unbound)} need a --param table")
    prog = compiled.program(tables)
    inputs = [parse_input(args.input, compiled)] if args.input else compiled.theory.inputs(compiled.domains)
    for i in inputs:
        result = run(prog, compiled.theory, i)
        print(result if args.input else f"{i} ↦ {result}", file=out)
    return 0


def _obligation(compiled, args):
    spec = compiled.spec(args.spec)
    reserved = set(compiled.param_types) | {a for _, atoms in compiled.unit.domains for a in atoms}
    return wp_formula(compiled.program(), compiled.theory, spec, args.seed, reserved)


def cmd_wp(args, out):
    compiled = load(args.file)
    f = _obligation(compiled, args)
    if args.simplify:
        f = simplify(f)
    if args.format == "json":
        print(json.dumps(formula_to_json(f), indent=2, ensure_ascii=False), file=out)
    else:
        print(print_formula(f), file=out)
    return 0


def merge_reports(mode, reports) -> CheckReport:
    found, offset = [], 0
    for r in reports:
        for c in r.counterexamples:
            c.index += offset
            found.append(c)
        offset += r.inputs_checked
    return CheckReport(mode, sum(r.inputs_checked for r in reports),
                       sum(r.params_checked for r in reports), found,
                       sum(r.elapsed for r in reports), reports[0].theory if reports else None)


def cmd_check(args, out):
    compiled = load(args.file)
    spec = compiled.spec(args.spec)
    common = dict(domains=compiled.domains, params=_tables(args, compiled),
                  bounds=_bounds(args), jobs=args.jobs)
    subject, theory = compiled.subject(), compiled.theory
    if args.mode == "sufficiency":
        report = check_sufficiency(subject, theory, spec, **common)
    elif args.mode == "necessity":
        report = check_necessity(subject, theory, spec, **common)
    elif args.mode == "both":
        report = check_equivalence(subject, theory, spec, **common)
    elif args.mode == "extension":
        report = check_extension(subject, theory, spec, **common)
    else:
        pairs = [PostPair(spec, compiled.spec(args.weaker))] if args.weaker else weakenings(spec)
        report = merge_reports("monotonicity",
                               [check_monotonicity(subject, theory, p, **common) for p in pairs])
    timing = not args.no_timing
    if args.format == "json":
        print(report.dumps(timing), file=out)
    else:
        print(report.render(timing), file=out)
    return 0 if report.passed else 1


def cmd_simplify(args, out):
    compiled = load(args.file)
    f = _obligation(compiled, args)
    simple, count, bad = simplifier_mismatches(f, compiled.theory, compiled.domains,
                                               compiled.param_types)
    print(print_formula(simple), file=out)
    if bad:
        print(f"UNSOUND: simplified obligation differs at {len(bad)} of {count} bindings", file=out)
        return 1
    print(f"sound: agrees with the original obligation at all {count} bindings", file=out)
    return 0


def cmd_example(args, out):
    text = example_source(args.name)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return 0


def corpus_seed(flag):
    if flag is not None:
        return flag
    env = os.environ.get("WPCHECK_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"WPCHECK_SEED must be an integer, got {env!r}") from None


def cmd_corpus(args, out):
    from ..corpus import generate_units
    seed = corpus_seed(args.seed)
    units = generate_units(args.count, args.depth, seed)
    if not args.check:
        for n, unit in enumerate(units):
            print(f"; corpus seed {seed} program {n}", file=out)
            print(print_unit(unit), file=out)
        return 0
    failed = 0
    for n, unit in enumerate(units):
        compiled = compile_unit(unit)
        for name, spec in unit.specs:
            r = check_equivalence(compiled.subject(), compiled.theory, spec, compiled.domains)
            if not r.passed:
                failed += 1
                print(f"program {n} spec {name}: {len(r.counterexamples)} counterexample(s)", file=out)
    total = sum(len(u.specs) for u in units)
    print(f"seed {seed}: {len(units)} programs, {total} postconditions, {failed} failing", file=out)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wpcheck", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a program")
    p.add_argument("file")
    p.add_argument("--input", help='"(ENV STATE)"; every input when omitted')
    p.add_argument("--param", action="append", metavar="NAME=TABLE")
    p.set_defaults(fn=cmd_run)

    for name, fn, helptext in (("wp", cmd_wp, "print the weakest precondition of a spec"),
                               ("simplify", cmd_simplify, "simplify an obligation and verify it")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file")
        p.add_argument("--spec", required=True)
        p.add_argument("--seed", type=int, default=0, help="fresh-name counter seed")
        if name == "wp":
            p.add_argument("--simplify", action="store_true")
            p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(fn=fn)

    p = sub.add_parser("check", help="check wp against run exhaustively")
    p.add_argument("file")
    p.add_argument("--spec", required=True)
    p.add_argument("--mode", required=True,
                   choices=("sufficiency", "necessity", "both", "monotonicity", "extension"))
    p.add_argument("--weaker", help="spec to use as the weaker postcondition (monotonicity)")
    p.add_argument("--param", action="append", metavar="NAME=TABLE")
    p.add_argument("--max-list-len", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--no-timing", action="store_true", help="report elapsed time as 0")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("example", help="write a built-in source file")
    p.add_argument("name", choices=sorted(EXAMPLES))
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_example)

    p = sub.add_parser("corpus", help="print or check generated programs")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--seed", type=int, help="defaults to $WPCHECK_SEED, then 0")
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=cmd_corpus)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.fn(args, out)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except _ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
