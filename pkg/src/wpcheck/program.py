"""Effectful program ASTs, the effect-theory interface, ``run`` and ``wp``.

A program is ``Return``, ``Bind`` or ``Op``.  Continuations and
sub-program families are ordinary callables from values to programs, so
the same program can be entered with concrete values (when running it)
or with fresh symbols (when computing its weakest precondition).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .carriers import Type
from .formula import Formula, subst
from .values import SymbolicValueError, is_concrete, render


class ProgramError(Exception):
    pass


class UnsupportedCommand(ProgramError):
    pass


class MalformedTheory(ProgramError):
    pass


class Program:
    __slots__ = ()


@dataclass(frozen=True, eq=False)
class Return(Program):
    value: Any
    ty: Type


@dataclass(frozen=True, eq=False)
class Bind(Program):
    m: Program
    k: Callable[[Any], Program]
    ty: Type


@dataclass(frozen=True, eq=False)
class Op(Program):
    cmd: Any
    subs: Callable[[Any], Program]
    ty: Type


def no_subs(arg):
    raise ProgramError("command has no sub-programs")


def result_type(m: Program) -> Type:
    return m.ty


@dataclass(frozen=True)
class CommandDescriptor:
    name: str
    payload: tuple
    sub_args: str
    sub_ret: str


class Fresh:
    """Monotone name source: r, r1, r2, … and o', o'', … per kind."""

    def __init__(self, seed: int = 0, reserved: Iterable[str] = ()):
        self.seed = seed
        self.reserved = set(reserved)
        self.counts = Counter()

    def __call__(self, kind: str) -> str:
        while True:
            n = self.seed + self.counts[kind]
            self.counts[kind] += 1
            name = kind + "'" * (n + 1) if kind == "o" else (kind if n == 0 else f"{kind}{n}")
            if name not in self.reserved:
                return name


class EffectTheory:
    """Operational and predicate-transformer rules for a command set.

    Subclasses fill in ``descriptors`` plus one run rule and one wp rule
    per command class, and the return/bind rules.
    """

    name = "theory"

    def __init__(self):
        self.descriptors = dict(self.command_descriptors())
        self.run_rules = dict(self.command_run_rules())
        self.wp_rules = dict(self.command_wp_rules())
        missing = set(self.descriptors) ^ set(self.run_rules)
        missing |= set(self.descriptors) ^ set(self.wp_rules)
        if missing:
            names = ", ".join(sorted(c.__name__ for c in missing))
            raise MalformedTheory(f"{self.name}: commands without exactly one run and wp rule: {names}")

    def command_descriptors(self):
        return {}

    def command_run_rules(self):
        return {}

    def command_wp_rules(self):
        return {}

    def handles(self, cmd) -> bool:
        return type(cmd) in self.descriptors

    def is_branching(self, cmd) -> bool:
        return False

    def run_command(self, cmd, i, run_sub):
        try:
            rule = self.run_rules[type(cmd)]
        except KeyError:
            raise UnsupportedCommand(f"{self.name} cannot run {type(cmd).__name__}") from None
        return rule(cmd, i, run_sub)

    def wp_command(self, cmd, sub_wp, post, ctx, fresh):
        try:
            rule = self.wp_rules[type(cmd)]
        except KeyError:
            raise MalformedTheory(f"{self.name} has no wp rule for {type(cmd).__name__}") from None
        return rule(cmd, sub_wp, post, ctx, fresh)

    # subclasses provide the rest
    def run_return(self, value, i):
        raise NotImplementedError

    def run_bind(self, first, cont, i):
        raise NotImplementedError

    def wp_return(self, value, post, ctx):
        raise NotImplementedError

    def wp_bind(self, cont_wp, ctx, post, fresh, ty):
        raise NotImplementedError

    def inputs(self, domains):
        raise NotImplementedError

    def symbolic_input(self):
        raise NotImplementedError

    def input_binding(self, i) -> dict:
        raise NotImplementedError

    def output_binding(self, out) -> dict:
        raise NotImplementedError

    def outputs(self, result_ty, domains, bounds):
        raise NotImplementedError

    def input_vars(self) -> tuple:
        raise NotImplementedError

    def output_vars(self) -> tuple:
        raise NotImplementedError

    def spec_post(self, formula: Formula):
        """Turn a formula over the output variables into a postcondition."""
        return lambda out: subst(formula, self.output_binding(out))


def _concrete(v, what):
    if not is_concrete(v):
        raise SymbolicValueError(f"{what} is symbolic: {render(v)}")
    return v


def run(m: Program, theory: EffectTheory, i, trace: list | None = None):
    """Execute ``m`` on input ``i``; ``trace`` collects executed commands."""
    match m:
        case Return(value=v):
            return theory.run_return(_concrete(v, "returned value"), i)
        case Bind(m=first, k=k):
            return theory.run_bind(run(first, theory, i, trace),
                                   lambda x, j: run(k(x), theory, j, trace), i)
        case Op(cmd=cmd, subs=subs):
            if trace is not None:
                trace.append(cmd)
            return theory.run_command(cmd, i, lambda arg, j: run(subs(arg), theory, j, trace))
    raise ProgramError(f"not a program: {m!r}")


def wp(m: Program, theory: EffectTheory, post, ctx=None, fresh: Fresh | None = None) -> Formula:
    """Weakest precondition of ``post`` (a callable on outputs) at ``ctx``."""
    if ctx is None:
        ctx = theory.symbolic_input()
    if fresh is None:
        fresh = Fresh()
    match m:
        case Return(value=v):
            return theory.wp_return(v, post, ctx)
        case Bind(m=first, k=k):
            def cont_wp(x, q, ctx2):
                return wp(k(x), theory, q, ctx2, fresh)
            return wp(first, theory, theory.wp_bind(cont_wp, ctx, post, fresh, first.ty), ctx, fresh)
        case Op(cmd=cmd, subs=subs):
            def sub_wp(arg, q, ctx2):
                return wp(subs(arg), theory, q, ctx2, fresh)
            return theory.wp_command(cmd, sub_wp, post, ctx, fresh)
    raise ProgramError(f"not a program: {m!r}")


def wp_formula(m: Program, theory: EffectTheory, spec: Formula, seed: int = 0,
               reserved: Iterable[str] = ()) -> Formula:
    """``wp`` for a postcondition written as a formula over output variables."""
    fresh = Fresh(seed, set(reserved) | set(theory.input_vars()) | set(theory.output_vars()))
    return wp(m, theory, theory.spec_post(spec), theory.symbolic_input(), fresh)


def is_branch_free(m: Program, theory: EffectTheory, inputs) -> bool:
    """True iff no probed execution reaches a branching command."""
    for i in inputs:
        trace = []
        run(m, theory, i, trace)
        if any(theory.is_branching(c) for c in trace):
            return False
    return True
