"""Branching commands layered over any effect theory, and ``unextend``."""

from __future__ import annotations

from dataclasses import dataclass

from .carriers import DEFAULT_BOUNDS, Type
from .formula import And, Eq, ForallGuarded, Implies
from .program import (
    Bind, CommandDescriptor, EffectTheory, Op, Program, ProgramError, Return,
    run,
)
from .values import (
    FALSE, NOTHING, TRUE, Bool, Just, Left, Nothing, Right, Sym,
    SymbolicValueError, Value, is_concrete, render,
)


@dataclass(frozen=True)
class BCif:
    scrutinee: Value


@dataclass(frozen=True)
class BCeither:
    scrutinee: Value
    left_ty: Type
    right_ty: Type


@dataclass(frozen=True)
class BCmaybe:
    scrutinee: Value
    elem_ty: Type


BRANCH_COMMANDS = (BCif, BCeither, BCmaybe)

_CASES = {BCif: (Bool,), BCeither: (Left, Right), BCmaybe: (Just, Nothing)}


def select(cmd) -> Value:
    """The sub-program argument picked by a concrete scrutinee."""
    c = cmd.scrutinee
    if not is_concrete(c):
        raise SymbolicValueError(f"cannot branch on symbolic {render(c)}")
    if not isinstance(c, _CASES[type(cmd)]):
        raise ProgramError(f"{type(cmd).__name__} cannot branch on {render(c)}")
    return c


class ExtendedTheory(EffectTheory):
    """``base`` plus if/either/maybe; base commands keep their rules."""

    def __init__(self, base: EffectTheory):
        self.base = base
        self.name = f"branching({base.name})"
        super().__init__()

    def command_descriptors(self):
        return {
            **self.base.descriptors,
            BCif: CommandDescriptor("if", ("Bool",), "Bool", "A"),
            BCeither: CommandDescriptor("either", ("Either B C",), "Either B C", "A"),
            BCmaybe: CommandDescriptor("maybe", ("Maybe B",), "Maybe B", "A"),
        }

    def command_run_rules(self):
        own = {cls: self.run_branch for cls in BRANCH_COMMANDS}
        return {**self.base.run_rules, **own}

    def command_wp_rules(self):
        return {**self.base.wp_rules, BCif: self.wp_if, BCeither: self.wp_either,
                BCmaybe: self.wp_maybe}

    def is_branching(self, cmd):
        return isinstance(cmd, BRANCH_COMMANDS)

    def run_branch(self, cmd, i, run_sub):
        return run_sub(select(cmd), i)

    def wp_if(self, cmd, sub_wp, post, ctx, fresh):
        c = cmd.scrutinee
        return And((Implies(Eq(c, TRUE), sub_wp(TRUE, post, ctx)),
                    Implies(Eq(c, FALSE), sub_wp(FALSE, post, ctx))))

    def wp_either(self, cmd, sub_wp, post, ctx, fresh):
        c = cmd.scrutinee
        l = fresh("l")
        on_left = ForallGuarded(l, cmd.left_ty, Eq(c, Left(Sym(l))), sub_wp(Left(Sym(l)), post, ctx))
        r = fresh("r")
        on_right = ForallGuarded(r, cmd.right_ty, Eq(c, Right(Sym(r))), sub_wp(Right(Sym(r)), post, ctx))
        return And((on_left, on_right))

    def wp_maybe(self, cmd, sub_wp, post, ctx, fresh):
        c = cmd.scrutinee
        j = fresh("j")
        on_just = ForallGuarded(j, cmd.elem_ty, Eq(c, Just(Sym(j))), sub_wp(Just(Sym(j)), post, ctx))
        return And((on_just, Implies(Eq(c, NOTHING), sub_wp(NOTHING, post, ctx))))

    # everything else is the base theory's

    def run_return(self, value, i):
        return self.base.run_return(value, i)

    def run_bind(self, first, cont, i):
        return self.base.run_bind(first, cont, i)

    def wp_return(self, value, post, ctx):
        return self.base.wp_return(value, post, ctx)

    def wp_bind(self, cont_wp, ctx, post, fresh, ty):
        return self.base.wp_bind(cont_wp, ctx, post, fresh, ty)

    def inputs(self, domains):
        return self.base.inputs(domains)

    def symbolic_input(self):
        return self.base.symbolic_input()

    def input_binding(self, i):
        return self.base.input_binding(i)

    def output_binding(self, out):
        return self.base.output_binding(out)

    def outputs(self, result_ty, domains, bounds):
        return self.base.outputs(result_ty, domains, bounds)

    def input_vars(self):
        return self.base.input_vars()

    def output_vars(self):
        return self.base.output_vars()

    def input_types(self):
        return self.base.input_types()

    def output_types(self, result_ty):
        return self.base.output_types(result_ty)


def unextend(m: Program) -> Program:
    """Erase branch nodes, choosing each one's sub-program when it is reached."""
    match m:
        case Return():
            return m
        case Bind(m=first, k=k, ty=ty):
            return Bind(unextend(first), lambda x: unextend(k(x)), ty)
        case Op(cmd=cmd, subs=subs, ty=ty):
            if isinstance(cmd, BRANCH_COMMANDS):
                return unextend(subs(select(cmd)))
            return Op(cmd, lambda a: unextend(subs(a)), ty)
    raise ProgramError(f"not a program: {m!r}")


def run_extended(m: Program, theory: ExtendedTheory, i):
    return run(m, theory, i)


def run_unextended(m: Program, theory: ExtendedTheory, i):
    return run(unextend(m), theory.base, i)


def check_extension_agreement(m, theory, post, domains, params=None, bounds=DEFAULT_BOUNDS, **kw):
    """See :func:`wpcheck.checker.check_extension`."""
    from .checker import check_extension
    return check_extension(m, theory, post, domains, params=params, bounds=bounds, **kw)


# builders

def if_(c: Value, then: Program, other: Program, ty: Type) -> Program:
    return Op(BCif(c), lambda b: then if b == TRUE else other, ty)


def either_(e: Value, left_ty: Type, right_ty: Type, on_left, on_right, ty: Type) -> Program:
    return Op(BCeither(e, left_ty, right_ty),
              lambda v: on_left(v.value) if isinstance(v, Left) else on_right(v.value), ty)


def maybe_(mb: Value, elem_ty: Type, on_just, on_nothing: Program, ty: Type) -> Program:
    return Op(BCmaybe(mb, elem_ty),
              lambda v: on_just(v.value) if isinstance(v, Just) else on_nothing, ty)

