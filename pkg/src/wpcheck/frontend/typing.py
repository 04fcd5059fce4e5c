"""Type inference for surface programs and specs (first-order unification).

Type variables left unconstrained after inference default to ``Unit``.
"""

from __future__ import annotations

from ..carriers import (
    BOOL_T, EV, NAT_T, ST, UNIT_T, WR_LIST, WRITER_FN_T, CarrierT, EitherT, FnT,
    ListT, MaybeT, PairT, TVar, Type, WriterFnT, render_type,
)
from ..formula import And, Bottom, Eq, Formula, ForallGuarded, ForallPlain, Implies, Top
from ..values import (
    Atom, Bool, Call, Just, Left, Lit, List, Nat, Neutral, Nothing, Pair, Right,
    Sym, Unit, Var, WfAppend, WfCompose, WfConst, WfId, WfPrepend, WfSelfAppend,
)
from .sexpr import FrontendError, flat
from .syntax import (
    PAsk, PBind, PEither, PGets, PIf, PLocal, PMaybe, PPass, PPuts, PReturn,
    PTell, SourceUnit, expr_sexpr, formula_sexpr, program_sexpr, value_sexpr,
)


class TypeCheckError(FrontendError):
    pass


class Inference:
    def __init__(self):
        self.sub = {}
        self.count = 0
        self.node_types = {}
        self.scrutinee_types = {}

    def fresh(self) -> TVar:
        self.count += 1
        return TVar(self.count)

    def find(self, t):
        while isinstance(t, TVar) and t.id in self.sub:
            t = self.sub[t.id]
        return t

    def zonk(self, t, default=UNIT_T):
        t = self.find(t)
        match t:
            case TVar():
                return default if default is not None else t
            case ListT(e):
                return ListT(self.zonk(e, default))
            case MaybeT(e):
                return MaybeT(self.zonk(e, default))
            case PairT(a, b):
                return PairT(self.zonk(a, default), self.zonk(b, default))
            case EitherT(a, b):
                return EitherT(self.zonk(a, default), self.zonk(b, default))
            case FnT(a, b):
                return FnT(self.zonk(a, default), self.zonk(b, default))
        return t

    def _occurs(self, v, t):
        t = self.find(t)
        if t == v:
            return True
        return any(self._occurs(v, c) for c in _children(t))

    def unify(self, a, b, where, loc=None):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if isinstance(b, TVar) and not isinstance(a, TVar):
            a, b = b, a
        if isinstance(a, TVar):
            if self._occurs(a, b):
                raise self._error(f"infinite type in {where}", loc)
            self.sub[a.id] = b
            return
        if type(a) is type(b) and not isinstance(a, CarrierT):
            for x, y in zip(_children(a), _children(b)):
                self.unify(x, y, where, loc)
            return
        shown = lambda t: render_type(self.zonk(t, None))
        raise self._error(f"type mismatch in {where}: {shown(a)} versus {shown(b)}", loc)

    def _error(self, msg, loc):
        return TypeCheckError(msg, *(loc or (None, None)))

    # expressions and spec terms

    def call(self, head, args, where, loc):
        u = lambda a, b: self.unify(a, b, where, loc)
        match head, args:
            case "list", _:
                elem = self.fresh()
                for a in args:
                    u(a, elem)
                return ListT(elem)
            case "pair", (a, b):
                return PairT(a, b)
            case "just", (a,):
                return MaybeT(a)
            case "left", (a,):
                return EitherT(a, self.fresh())
            case "right", (b,):
                return EitherT(self.fresh(), b)
            case ("fst" | "snd"), (p,):
                x, y = self.fresh(), self.fresh()
                u(p, PairT(x, y))
                return x if head == "fst" else y
            case "append", (a, b):
                elem = ListT(self.fresh())
                u(a, elem)
                u(b, elem)
                return elem
            case "length", (a,):
                u(a, ListT(self.fresh()))
                return NAT_T
            case "apply", (f, x):
                if isinstance(self.find(f), WriterFnT):
                    u(x, WR_LIST)
                    return WR_LIST
                res = self.fresh()
                u(f, FnT(x, res))
                return res
            case "eq", (a, b):
                u(a, b)
                return BOOL_T
            case "if", (c, a, b):
                u(c, BOOL_T)
                u(a, b)
                return a
            case ("wf-const" | "wf-prepend" | "wf-append"), (a,):
                u(a, WR_LIST)
                return WRITER_FN_T
            case "wf-compose", (f, g):
                u(f, WRITER_FN_T)
                u(g, WRITER_FN_T)
                return WRITER_FN_T
        raise self._error(f"cannot type {head} with {len(args)} argument(s)", loc)

    def expr(self, e, env, loc=None):
        match e:
            case Lit(v):
                return self.value(v, env, loc)
            case Var(name):
                if name not in env:
                    raise self._error(f"unbound variable {name!r}", loc)
                return env[name]
            case Call(head, args):
                types = [self.expr(a, env, loc) for a in args]
                return self.call(head, types, flat(expr_sexpr(e)), loc)
        raise self._error(f"not an expression: {e!r}", loc)

    def value(self, v, env, loc=None):
        match v:
            case Unit():
                return UNIT_T
            case Bool():
                return BOOL_T
            case Nat():
                return NAT_T
            case Atom(sort, _):
                return CarrierT(sort)
            case Nothing():
                return MaybeT(self.fresh())
            case WfId() | WfSelfAppend():
                return WRITER_FN_T
            case Sym(name):
                if name not in env:
                    raise self._error(f"unbound variable {name!r}", loc)
                return env[name]
        where = flat(value_sexpr(v))
        match v:
            case List(items):
                return self.call("list", [self.value(x, env, loc) for x in items], where, loc)
            case Pair(a, b):
                return PairT(self.value(a, env, loc), self.value(b, env, loc))
            case Just(x):
                return MaybeT(self.value(x, env, loc))
            case Left(x):
                return EitherT(self.value(x, env, loc), self.fresh())
            case Right(x):
                return EitherT(self.fresh(), self.value(x, env, loc))
            case WfConst(x) | WfPrepend(x) | WfAppend(x):
                self.unify(self.value(x, env, loc), WR_LIST, where, loc)
                return WRITER_FN_T
            case WfCompose(f, g):
                return self.call("wf-compose", [self.value(f, env, loc), self.value(g, env, loc)],
                                 where, loc)
            case Neutral(head, args):
                return self.call(head, [self.value(a, env, loc) for a in args], where, loc)
        raise self._error(f"cannot type {v!r}", loc)

    # programs

    def lam(self, f, dom, env, loc):
        return self.expr(f.body, {**env, f.param: dom}, loc)

    def program(self, p, env) -> Type:
        t = self._program(p, env)
        self.node_types[id(p)] = t
        return t

    def _program(self, p, env):
        loc = p.loc
        where = lambda: flat(program_sexpr(p))[:60]
        match p:
            case PReturn(e):
                return self.expr(e, env, loc)
            case PBind(m, v, k):
                return self.program(k, {**env, v: self.program(m, env)})
            case PGets(f):
                return self.lam(f, ST, env, loc)
            case PPuts(f):
                self.unify(self.lam(f, ST, env, loc), ST, where(), loc)
                return UNIT_T
            case PTell(e):
                self.unify(self.expr(e, env, loc), WR_LIST, where(), loc)
                return UNIT_T
            case PAsk():
                return EV
            case PLocal(f, m):
                self.unify(self.lam(f, EV, env, loc), EV, where(), loc)
                return self.program(m, env)
            case PPass(m):
                res = self.fresh()
                self.unify(self.program(m, env), PairT(res, WRITER_FN_T), where(), loc)
                return res
            case PIf(c, a, b):
                self.unify(self.expr(c, env, loc), BOOL_T, where(), loc)
                t = self.program(a, env)
                self.unify(t, self.program(b, env), where(), loc)
                return t
            case PMaybe(e, j, a, b):
                elem = self.fresh()
                self.scrutinee_types[id(p)] = MaybeT(elem)
                self.unify(self.expr(e, env, loc), MaybeT(elem), where(), loc)
                t = self.program(a, {**env, j: elem})
                self.unify(t, self.program(b, env), where(), loc)
                return t
            case PEither(e, lv, a, rv, b):
                lt, rt = self.fresh(), self.fresh()
                self.scrutinee_types[id(p)] = EitherT(lt, rt)
                self.unify(self.expr(e, env, loc), EitherT(lt, rt), where(), loc)
                t = self.program(a, {**env, lv: lt})
                self.unify(t, self.program(b, {**env, rv: rt}), where(), loc)
                return t
        raise self._error(f"not a program node: {p!r}", loc)

    def formula(self, f: Formula, env):
        match f:
            case Top() | Bottom():
                return
            case Eq(a, b):
                self.unify(self.value(a, env), self.value(b, env), _show(f))
            case And(parts):
                for x in parts:
                    self.formula(x, env)
            case Implies(h, body):
                self.formula(h, env)
                self.formula(body, env)
            case ForallGuarded(x, ty, g, body):
                inner = {**env, x: ty}
                self.formula(g, inner)
                self.formula(body, inner)
            case ForallPlain(x, ty, body):
                self.formula(body, {**env, x: ty})


def _show(f):
    return flat(formula_sexpr(f))


def _children(t):
    match t:
        case ListT(e) | MaybeT(e):
            return (e,)
        case PairT(a, b) | EitherT(a, b) | FnT(a, b):
            return (a, b)
    return ()


class TypedUnit:
    """Inference results for a unit: node types keyed by node identity."""

    def __init__(self, unit: SourceUnit, inf: Inference, result_ty: Type):
        self.unit = unit
        self.inf = inf
        self.result_ty = result_ty

    def type_of(self, node) -> Type:
        return self.inf.zonk(self.inf.node_types[id(node)])

    def scrutinee_type(self, node) -> Type:
        return self.inf.zonk(self.inf.scrutinee_types[id(node)])


def check_unit(unit: SourceUnit) -> TypedUnit:
    if unit.program is None:
        raise TypeCheckError("unit has no program")
    inf = Inference()
    params = dict(unit.params)
    result = inf.program(unit.program, params)
    out_env = {**params, "pre-env": EV, "pre-state": ST, "result": result,
               "post-state": ST, "output": WR_LIST}
    for name, f in unit.specs:
        try:
            inf.formula(f, out_env)
        except TypeCheckError as e:
            raise TypeCheckError(f"spec {name}: {e.message}") from None
    return TypedUnit(unit, inf, inf.zonk(result))
