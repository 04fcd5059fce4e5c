"""The reader/writer/state effect theory and the built-in example program."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .carriers import (
    DEFAULT_BOUNDS, EV, MAYBE_WR, PAIR_UNIT_WF, ST, UNIT_T, WR, WR_LIST, Type,
    enumerate_carrier,
)
from .formula import Eq, Formula, ForallGuarded, subst
from .program import (
    Bind, CommandDescriptor, EffectTheory, Op, Program, ProgramError, Return,
    no_subs,
)
from .values import (
    NIL, UNIT, WF_SELF_APPEND, List, Pair, Sym, Value, WfConst,
    WriterTransformer, prim, render,
)

INPUT_VARS = ("pre-env", "pre-state")
OUTPUT_VARS = ("result", "post-state", "output")


@dataclass(frozen=True)
class RwsInput:
    env: Value
    state: Value

    def __str__(self):
        return f"({render(self.env)} , {render(self.state)})"


@dataclass(frozen=True)
class RwsOutput:
    result: Value
    state: Value
    output: Value

    def __str__(self):
        return f"({render(self.result)} , {render(self.state)} , {render(self.output)})"


@dataclass(frozen=True, eq=False)
class Gets:
    fn: Callable[[Value], Value]


@dataclass(frozen=True, eq=False)
class Puts:
    fn: Callable[[Value], Value]


@dataclass(frozen=True)
class Tell:
    items: Value


@dataclass(frozen=True)
class Ask:
    pass


@dataclass(frozen=True, eq=False)
class Local:
    fn: Callable[[Value], Value]


@dataclass(frozen=True)
class Pass:
    pass


def _append_output(outs, post):
    return lambda out: post(RwsOutput(out.result, out.state, prim("append", [outs, out.output])))


def rws_bind_post(outs: Value, post):
    """Postcondition ``post`` seen after ``outs`` has already been emitted.

    ``post`` is either a callable on outputs or a formula over the
    output variables; the result has the same kind.
    """
    if isinstance(post, Formula):
        return subst(post, {"output": prim("append", [outs, Sym("output")])})
    return _append_output(outs, post)


def rws_pass_post(post, fresh=None):
    """Postcondition for the body of ``pass``: rewrite the output by ``snd result``."""
    if isinstance(post, Formula):
        inner = lambda out: subst(post, {"result": out.result, "post-state": out.state,
                                         "output": out.output})
        name = fresh("o") if fresh else "o'"
        return _pass_formula(inner, RwsOutput(Sym("result"), Sym("post-state"), Sym("output")), name)
    return lambda out: _pass_formula(post, out, fresh("o"))


def _pass_formula(post, out, name):
    rewritten = prim("apply", [prim("snd", [out.result]), out.output])
    body = post(RwsOutput(prim("fst", [out.result]), out.state, Sym(name)))
    return ForallGuarded(name, WR_LIST, Eq(Sym(name), rewritten), body)


def _expect_list(v, what):
    if not isinstance(v, List):
        raise ProgramError(f"{what} must be a list of messages, got {render(v)}")
    return v


class RwsTheory(EffectTheory):
    name = "rws"

    def command_descriptors(self):
        return {
            Gets: CommandDescriptor("gets", ("St → A",), "Void", "Void"),
            Puts: CommandDescriptor("puts", ("St → St",), "Void", "Void"),
            Tell: CommandDescriptor("tell", ("List Wr",), "Void", "Void"),
            Ask: CommandDescriptor("ask", (), "Void", "Void"),
            Local: CommandDescriptor("local", ("Ev → Ev",), "Unit", "A"),
            Pass: CommandDescriptor("pass", (), "Unit", "A × WriterFn"),
        }

    def command_run_rules(self):
        return {Gets: self.run_gets, Puts: self.run_puts, Tell: self.run_tell,
                Ask: self.run_ask, Local: self.run_local, Pass: self.run_pass}

    def command_wp_rules(self):
        return {Gets: self.wp_gets, Puts: self.wp_puts, Tell: self.wp_tell,
                Ask: self.wp_ask, Local: self.wp_local, Pass: self.wp_pass}

    # operational rules

    def run_return(self, value, i):
        return RwsOutput(value, i.state, NIL)

    def run_bind(self, first, cont, i):
        second = cont(first.result, RwsInput(i.env, first.state))
        return RwsOutput(second.result, second.state,
                         prim("append", [first.output, second.output]))

    def run_gets(self, cmd, i, run_sub):
        return RwsOutput(cmd.fn(i.state), i.state, NIL)

    def run_puts(self, cmd, i, run_sub):
        return RwsOutput(UNIT, cmd.fn(i.state), NIL)

    def run_tell(self, cmd, i, run_sub):
        return RwsOutput(UNIT, i.state, _expect_list(cmd.items, "tell payload"))

    def run_ask(self, cmd, i, run_sub):
        return RwsOutput(i.env, i.state, NIL)

    def run_local(self, cmd, i, run_sub):
        return run_sub(UNIT, RwsInput(cmd.fn(i.env), i.state))

    def run_pass(self, cmd, i, run_sub):
        out = run_sub(UNIT, i)
        pair = out.result
        if not (isinstance(pair, Pair) and isinstance(pair.snd, WriterTransformer)):
            raise ProgramError(f"pass body must return a pair with a writer function, got {render(pair)}")
        return RwsOutput(pair.fst, out.state, prim("apply", [pair.snd, out.output]))

    # predicate transformer rules

    def wp_return(self, value, post, ctx):
        return post(RwsOutput(value, ctx.state, NIL))

    def wp_bind(self, cont_wp, ctx, post, fresh, ty):
        def bind_post(out):
            r = fresh("r")
            body = cont_wp(Sym(r), _append_output(out.output, post), RwsInput(ctx.env, out.state))
            return ForallGuarded(r, ty, Eq(Sym(r), out.result), body)
        return bind_post

    def wp_gets(self, cmd, sub_wp, post, ctx, fresh):
        return post(RwsOutput(cmd.fn(ctx.state), ctx.state, NIL))

    def wp_puts(self, cmd, sub_wp, post, ctx, fresh):
        return post(RwsOutput(UNIT, cmd.fn(ctx.state), NIL))

    def wp_tell(self, cmd, sub_wp, post, ctx, fresh):
        return post(RwsOutput(UNIT, ctx.state, cmd.items))

    def wp_ask(self, cmd, sub_wp, post, ctx, fresh):
        return post(RwsOutput(ctx.env, ctx.state, NIL))

    def wp_local(self, cmd, sub_wp, post, ctx, fresh):
        return sub_wp(UNIT, post, RwsInput(cmd.fn(ctx.env), ctx.state))

    def wp_pass(self, cmd, sub_wp, post, ctx, fresh):
        return sub_wp(UNIT, rws_pass_post(post, fresh), ctx)

    # inputs and outputs

    def inputs(self, domains):
        return [RwsInput(e, s) for e in domains.atoms("Ev") for s in domains.atoms("St")]

    def symbolic_input(self):
        return RwsInput(Sym("pre-env"), Sym("pre-state"))

    def input_binding(self, i):
        return {"pre-env": i.env, "pre-state": i.state}

    def output_binding(self, out):
        return {"result": out.result, "post-state": out.state, "output": out.output}

    def outputs(self, result_ty, domains, bounds=DEFAULT_BOUNDS):
        results = list(enumerate_carrier(result_ty, domains, bounds))
        states = list(enumerate_carrier(ST, domains, bounds))
        outs = list(enumerate_carrier(WR_LIST, domains, bounds))
        for x, s, o in itertools.product(results, states, outs):
            yield RwsOutput(x, s, o)

    def input_vars(self):
        return INPUT_VARS

    def output_vars(self):
        return OUTPUT_VARS

    def input_types(self):
        return {"pre-env": EV, "pre-state": ST}

    def output_types(self, result_ty: Type):
        return {"result": result_ty, "post-state": ST, "output": WR_LIST}


# builders

def ret(value: Value, ty: Type) -> Program:
    return Return(value, ty)


def bind(m: Program, k, ty: Type) -> Program:
    return Bind(m, k, ty)


def gets(fn, ty: Type) -> Program:
    return Op(Gets(fn), no_subs, ty)


def puts(fn) -> Program:
    return Op(Puts(fn), no_subs, UNIT_T)


def tell(items: Value) -> Program:
    return Op(Tell(items), no_subs, UNIT_T)


def ask() -> Program:
    return Op(Ask(), no_subs, EV)


def local(fn, m: Program) -> Program:
    return Op(Local(fn), lambda _: m, m.ty)


def pass_(m: Program, ty: Type) -> Program:
    """``ty`` is the result type after ``pass`` drops the writer function."""
    return Op(Pass(), lambda _: m, ty)


def build_paper_intro_prog(g: Value) -> Program:
    """``pass`` over: read ``g s``; on ``just w`` emit ``[w]`` then erase it,
    on ``nothing`` return the self-append transformer."""
    from .branching import maybe_

    def on_result(m):
        just = lambda w: bind(tell(List((w,))), lambda _: ret(Pair(UNIT, WfConst(NIL)), PAIR_UNIT_WF),
                              PAIR_UNIT_WF)
        nothing = ret(Pair(UNIT, WF_SELF_APPEND), PAIR_UNIT_WF)
        return maybe_(m, WR, just, nothing, PAIR_UNIT_WF)

    inner = bind(gets(lambda s: prim("apply", [g, s]), MAYBE_WR), on_result, PAIR_UNIT_WF)
    return pass_(inner, UNIT_T)
