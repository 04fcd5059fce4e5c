"""Compile typed surface units into programs over the branching RWS theory."""

from __future__ import annotations

from dataclasses import dataclass

from ..branching import BCeither, BCif, BCmaybe, ExtendedTheory
from ..carriers import Domains
from ..checker import Subject
from ..program import Bind, Op, Program, Return, no_subs
from ..rws import Ask, Gets, Local, Pass, Puts, RwsTheory, Tell
from ..values import TRUE, Just, Lambda, Left, Sym, eval_expr
from .sexpr import FrontendError
from .syntax import (
    PAsk, PBind, PEither, PGets, PIf, PLocal, PMaybe, PPass, PPuts, PReturn,
    PTell, SourceUnit,
)
from .typing import TypedUnit, check_unit

THEORY = ExtendedTheory(RwsTheory())

# Carriers a unit leaves undeclared get one atom each.
DEFAULT_ATOMS = {"St": ("s0",), "Ev": ("e0",), "Wr": ("w0",)}


def unit_domains(unit: SourceUnit) -> Domains:
    declared = dict(unit.domains)
    return Domains.of(**{sort: declared.get(sort, atoms) for sort, atoms in DEFAULT_ATOMS.items()})


def _lam(f, env):
    return Lambda(f.param, f.body, env)


class _Compiler:
    def __init__(self, typed: TypedUnit):
        self.typed = typed

    def expr(self, e, env, node):
        try:
            return eval_expr(e, env)
        except Exception as exc:
            loc = node.loc or (None, None)
            raise FrontendError(str(exc), *loc) from None

    def program(self, p, env) -> Program:
        ty = self.typed.type_of(p)
        match p:
            case PReturn(e):
                return Return(self.expr(e, env, p), ty)
            case PBind(m, v, k):
                return Bind(self.program(m, env), lambda x: self.program(k, {**env, v: x}), ty)
            case PGets(f):
                return Op(Gets(_lam(f, env)), no_subs, ty)
            case PPuts(f):
                return Op(Puts(_lam(f, env)), no_subs, ty)
            case PTell(e):
                return Op(Tell(self.expr(e, env, p)), no_subs, ty)
            case PAsk():
                return Op(Ask(), no_subs, ty)
            case PLocal(f, m):
                return Op(Local(_lam(f, env)), lambda _: self.program(m, env), ty)
            case PPass(m):
                return Op(Pass(), lambda _: self.program(m, env), ty)
            case PIf(c, a, b):
                return Op(BCif(self.expr(c, env, p)),
                          lambda v: self.program(a if v == TRUE else b, env), ty)
            case PMaybe(e, j, a, b):
                elem = self.typed.scrutinee_type(p).elem
                return Op(BCmaybe(self.expr(e, env, p), elem),
                          lambda v: self.program(a, {**env, j: v.value}) if isinstance(v, Just)
                          else self.program(b, env), ty)
            case PEither(e, lv, a, rv, b):
                st = self.typed.scrutinee_type(p)
                return Op(BCeither(self.expr(e, env, p), st.left, st.right),
                          lambda v: self.program(a, {**env, lv: v.value}) if isinstance(v, Left)
                          else self.program(b, {**env, rv: v.value}), ty)
        raise FrontendError(f"not a program node: {p!r}")


@dataclass
class CompiledUnit:
    unit: SourceUnit
    typed: TypedUnit
    domains: Domains
    theory: ExtendedTheory = THEORY

    @property
    def result_ty(self):
        return self.typed.result_ty

    @property
    def param_types(self) -> dict:
        return dict(self.unit.params)

    def program(self, tables: dict | None = None) -> Program:
        """The program with parameters bound to ``tables``; missing ones stay symbolic."""
        tables = tables or {}
        env = {n: tables.get(n, Sym(n)) for n in self.param_types}
        return _Compiler(self.typed).program(self.unit.program, env)

    def subject(self) -> Subject:
        return Subject(self.program, self.param_types, self.result_ty)

    def spec(self, name):
        return self.unit.spec(name)


def compile_unit(unit: SourceUnit) -> CompiledUnit:
    return CompiledUnit(unit, check_unit(unit), unit_domains(unit))


def compile_program(unit: SourceUnit, params: dict | None = None) -> Program:
    return compile_unit(unit).program(params)
