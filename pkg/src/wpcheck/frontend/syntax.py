"""Surface syntax: declarations, programs and specs, with parse and print.

Grammar sketch::

    (domain St (s0 s1))          (param g (fn St (maybe Wr)))
    (program P)                  (spec Name F)

A unit may also be a single bare program form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..carriers import (
    BOOL_T, CARRIER_SORTS, NAT_T, UNIT_T, WRITER_FN_T, CarrierT, EitherT, FnT,
    ListT, MaybeT, PairT, Type,
)
from ..formula import (
    TOP, BOTTOM, And, Bottom, Eq, Formula, FormulaError, ForallGuarded,
    ForallPlain, Implies, Top,
)
from ..values import (
    FALSE, NOTHING, PRIMS, TRUE, UNIT, WF_ID, WF_SELF_APPEND, Atom as AtomV,
    Bool, Call, Just, Left, Lit, List, Nat, NAT_MAX, Neutral, Nothing, Pair,
    Right, Sym, Unit, Var, WfAppend, WfCompose, WfConst, WfId, WfPrepend,
    WfSelfAppend,
)
from .sexpr import Atom, FrontendError, SList, flat, pretty, read_all

DISTINGUISHED = ("pre-env", "pre-state", "result", "post-state", "output")
KEYWORDS = {"unit", "true", "false", "nothing", "top", "bottom", "_", "lambda", "list",
            "wf-id", "wf-self-append"} | set(PRIMS)
CONSTRUCTORS = {"pair": Pair, "just": Just, "left": Left, "right": Right}
WF_UNARY = {"wf-const": WfConst, "wf-prepend": WfPrepend, "wf-append": WfAppend}


# program nodes

@dataclass(frozen=True)
class Lam:
    param: str
    body: object


def _loc():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class PReturn:
    expr: object
    loc: tuple = _loc()


@dataclass(frozen=True)
class PBind:
    m: object
    var: str
    k: object
    loc: tuple = _loc()


@dataclass(frozen=True)
class PGets:
    fn: Lam
    loc: tuple = _loc()


@dataclass(frozen=True)
class PPuts:
    fn: Lam
    loc: tuple = _loc()


@dataclass(frozen=True)
class PTell:
    expr: object
    loc: tuple = _loc()


@dataclass(frozen=True)
class PAsk:
    loc: tuple = _loc()


@dataclass(frozen=True)
class PLocal:
    fn: Lam
    m: object
    loc: tuple = _loc()


@dataclass(frozen=True)
class PPass:
    m: object
    loc: tuple = _loc()


@dataclass(frozen=True)
class PIf:
    cond: object
    then: object
    other: object
    loc: tuple = _loc()


@dataclass(frozen=True)
class PMaybe:
    scrutinee: object
    var: str
    on_just: object
    on_nothing: object
    loc: tuple = _loc()


@dataclass(frozen=True)
class PEither:
    scrutinee: object
    left_var: str
    on_left: object
    right_var: str
    on_right: object
    loc: tuple = _loc()


BRANCH_NODES = (PIf, PMaybe, PEither)


@dataclass(frozen=True)
class SourceUnit:
    domains: tuple = ()
    params: tuple = ()
    program: object = None
    specs: tuple = ()

    def spec(self, name) -> Formula:
        for n, f in self.specs:
            if n == name:
                return f
        known = ", ".join(n for n, _ in self.specs) or "none"
        raise FrontendError(f"no spec named {name!r} (known: {known})")

    def atoms(self) -> dict:
        return {a: sort for sort, atoms in self.domains for a in atoms}


def has_branch(p) -> bool:
    match p:
        case PIf() | PMaybe() | PEither():
            return True
        case PBind(m=m, k=k):
            return has_branch(m) or has_branch(k)
        case PLocal(m=m) | PPass(m=m):
            return has_branch(m)
    return False


# parsing

def _err(msg, x):
    return FrontendError(msg, x.line, x.col)


def _name(x, what="name"):
    if not isinstance(x, Atom) or x.text[0] in "0123456789":
        raise _err(f"expected a {what}, got {flat(x)}", x)
    return x.text


def _form(x, head, arity):
    if len(x.items) - 1 != arity:
        raise _err(f"{head} takes {arity} argument(s), got {len(x.items) - 1}", x)
    return x.items[1:]


class _Parser:
    def __init__(self, atoms: dict, params: dict):
        self.atoms = atoms
        self.params = params

    def binder(self, x, what="binder"):
        name = _name(x, what)
        if name in KEYWORDS or (name in self.atoms) or name in DISTINGUISHED or name in self.params:
            raise _err(f"{name!r} cannot be used as a {what}", x)
        return name

    # types

    def type(self, x) -> Type:
        if isinstance(x, Atom):
            simple = {"Unit": UNIT_T, "Bool": BOOL_T, "Nat": NAT_T, "wf": WRITER_FN_T}
            if x.text in simple:
                return simple[x.text]
            if x.text in CARRIER_SORTS:
                if x.text not in set(self.atoms.values()):
                    raise _err(f"carrier {x.text} is not declared", x)
                return CarrierT(x.text)
            raise _err(f"unknown type {x.text!r}", x)
        if not x.items or not isinstance(x.items[0], Atom):
            raise _err(f"malformed type {flat(x)}", x)
        head = x.items[0].text
        unary = {"maybe": MaybeT, "list": ListT}
        binary = {"either": EitherT, "pair": PairT, "fn": FnT}
        if head in unary:
            (a,) = _form(x, head, 1)
            return unary[head](self.type(a))
        if head in binary:
            a, b = _form(x, head, 2)
            return binary[head](self.type(a), self.type(b))
        raise _err(f"unknown type constructor {head!r}", x)

    # expressions

    def expr(self, x):
        if isinstance(x, Atom):
            t = x.text
            if t.isdigit():
                if int(t) > NAT_MAX:
                    raise _err(f"natural {t} exceeds {NAT_MAX}", x)
                return Lit(Nat(int(t)))
            consts = {"unit": UNIT, "true": TRUE, "false": FALSE, "nothing": NOTHING}
            if t in consts:
                return Lit(consts[t])
            if t in self.atoms:
                return Lit(AtomV(self.atoms[t], t))
            if t in KEYWORDS:
                raise _err(f"{t!r} is not an expression", x)
            return Var(t)
        if not x.items or not isinstance(x.items[0], Atom):
            raise _err(f"malformed expression {flat(x)}", x)
        head = x.items[0].text
        if head == "wf-id":
            _form(x, head, 0)
            return Lit(WF_ID)
        if head == "wf-self-append":
            _form(x, head, 0)
            return Lit(WF_SELF_APPEND)
        if head == "list":
            return Call("list", tuple(self.expr(a) for a in x.items[1:]))
        if head in PRIMS:
            args = _form(x, head, PRIMS[head][0])
            return Call(head, tuple(self.expr(a) for a in args))
        raise _err(f"unknown form {head!r}", x)

    def lam(self, x) -> Lam:
        if not (isinstance(x, SList) and len(x.items) == 3 and isinstance(x.items[0], Atom)
                and x.items[0].text == "lambda" and isinstance(x.items[1], SList)
                and len(x.items[1].items) == 1):
            raise _err(f"expected (lambda (x) e), got {flat(x)}", x)
        p = x.items[1].items[0]
        return Lam(self.binder(p) if flat(p) != "_" else "_", self.expr(x.items[2]))

    def bound(self, x):
        """A ``(x)`` binder list; ``_`` discards."""
        if not (isinstance(x, SList) and len(x.items) == 1):
            raise _err(f"expected a binder list (x), got {flat(x)}", x)
        return self.binder(x.items[0]) if flat(x.items[0]) != "_" else "_"

    def program(self, x):
        if not isinstance(x, SList) or not x.items or not isinstance(x.items[0], Atom):
            raise _err(f"expected a program form, got {flat(x)}", x)
        head, loc = x.items[0].text, (x.line, x.col)
        match head:
            case "return":
                (e,) = _form(x, head, 1)
                return PReturn(self.expr(e), loc)
            case "bind":
                m, v, k = _form(x, head, 3)
                return PBind(self.program(m), self.bound(v), self.program(k), loc)
            case "gets":
                (f,) = _form(x, head, 1)
                return PGets(self.lam(f), loc)
            case "puts":
                (f,) = _form(x, head, 1)
                return PPuts(self.lam(f), loc)
            case "tell":
                (e,) = _form(x, head, 1)
                return PTell(self.expr(e), loc)
            case "ask":
                _form(x, head, 0)
                return PAsk(loc)
            case "local":
                f, m = _form(x, head, 2)
                return PLocal(self.lam(f), self.program(m), loc)
            case "pass":
                (m,) = _form(x, head, 1)
                return PPass(self.program(m), loc)
            case "if":
                c, a, b = _form(x, head, 3)
                return PIf(self.expr(c), self.program(a), self.program(b), loc)
            case "maybe":
                e, j, n = _form(x, head, 3)
                var, body = self.case(j)
                return PMaybe(self.expr(e), var, body, self.program(n), loc)
            case "either":
                e, l, r = _form(x, head, 3)
                lv, lb = self.case(l)
                rv, rb = self.case(r)
                return PEither(self.expr(e), lv, lb, rv, rb, loc)
        raise _err(f"unknown form {head!r}", x)

    def case(self, x):
        if not (isinstance(x, SList) and len(x.items) == 2):
            raise _err(f"expected a case (x m), got {flat(x)}", x)
        var = self.binder(x.items[0]) if flat(x.items[0]) != "_" else "_"
        return var, self.program(x.items[1])

    # specs

    def term(self, x, scope):
        if isinstance(x, Atom):
            t = x.text
            if t.isdigit():
                return Nat(int(t))
            consts = {"unit": UNIT, "true": TRUE, "false": FALSE, "nothing": NOTHING}
            if t in consts:
                return consts[t]
            if t in self.atoms:
                return AtomV(self.atoms[t], t)
            if t in scope or t in DISTINGUISHED or t in self.params:
                return Sym(t)
            raise _err(f"unknown variable {t!r}", x)
        if not x.items or not isinstance(x.items[0], Atom):
            raise _err(f"malformed term {flat(x)}", x)
        head = x.items[0].text
        args = [self.term(a, scope) for a in x.items[1:]]
        if head in ("wf-id", "wf-self-append"):
            _form(x, head, 0)
            return WF_ID if head == "wf-id" else WF_SELF_APPEND
        if head == "list":
            return List(tuple(args))
        if head in CONSTRUCTORS:
            _form(x, head, 2 if head == "pair" else 1)
            return CONSTRUCTORS[head](*args)
        if head in WF_UNARY:
            _form(x, head, 1)
            return WF_UNARY[head](*args)
        if head == "wf-compose":
            _form(x, head, 2)
            return WfCompose(*args)
        if head in PRIMS:
            _form(x, head, PRIMS[head][0])
            return Neutral(head, tuple(args))
        raise _err(f"unknown form {head!r}", x)

    def atom_eq(self, x, scope):
        if not (isinstance(x, SList) and x.items and flat(x.items[0]) == "eq"):
            raise _err(f"expected (eq a b), got {flat(x)}", x)
        a, b = _form(x, "eq", 2)
        return Eq(self.term(a, scope), self.term(b, scope))

    def formula(self, x, scope=frozenset()) -> Formula:
        if isinstance(x, Atom):
            if x.text == "top":
                return TOP
            if x.text == "bottom":
                return BOTTOM
            raise _err(f"expected a formula, got {x.text}", x)
        if not x.items or not isinstance(x.items[0], Atom):
            raise _err(f"malformed formula {flat(x)}", x)
        head = x.items[0].text
        match head:
            case "and":
                parts = tuple(self.formula(p, scope) for p in x.items[1:])
                return And(parts) if parts else TOP
            case "implies":
                h, b = _form(x, head, 2)
                return Implies(self.atom_eq(h, scope), self.formula(b, scope))
            case "eq":
                return self.atom_eq(x, scope)
            case "forall":
                if len(x.items) not in (3, 4):
                    raise _err("forall takes a binder, an optional guard and a body", x)
                b = x.items[1]
                if not (isinstance(b, SList) and len(b.items) == 2):
                    raise _err(f"expected a binder (x T), got {flat(b)}", b)
                var, ty = self.binder(b.items[0], "bound variable"), self.type(b.items[1])
                inner = scope | {var}
                body = self.formula(x.items[-1], inner)
                if len(x.items) == 3:
                    return ForallPlain(var, ty, body)
                try:
                    return ForallGuarded(var, ty, self.atom_eq(x.items[2], inner), body)
                except FormulaError as e:
                    raise _err(str(e), x.items[2]) from None
        raise _err(f"unknown form {head!r}", x)


def parse_unit(text: str) -> SourceUnit:
    forms = read_all(text)
    domains, params, programs, specs = [], [], [], []
    atoms = {}
    decls = [f for f in forms if isinstance(f, SList) and f.items and isinstance(f.items[0], Atom)
             and f.items[0].text in ("domain", "param")]
    for f in decls:
        if f.items[0].text != "domain":
            continue
        sort_x, atoms_x = _form(f, "domain", 2)
        sort = _name(sort_x, "carrier name")
        if sort not in CARRIER_SORTS:
            raise _err(f"unknown carrier {sort!r}; expected one of {', '.join(CARRIER_SORTS)}", sort_x)
        if sort in dict(domains):
            raise _err(f"carrier {sort} declared twice", f)
        if not isinstance(atoms_x, SList) or not atoms_x.items:
            raise _err(f"carrier {sort} needs a non-empty atom list", atoms_x)
        names = []
        for a in atoms_x.items:
            n = _name(a, "atom")
            if n in atoms or n in KEYWORDS or n in DISTINGUISHED:
                raise _err(f"atom {n!r} is reserved or declared twice", a)
            atoms[n] = sort
            names.append(n)
        domains.append((sort, tuple(names)))
    parser = _Parser(atoms, {})
    for f in decls:
        if f.items[0].text != "param":
            continue
        name_x, ty_x = _form(f, "param", 2)
        name = parser.binder(name_x, "parameter name")
        ty = parser.type(ty_x)
        if not isinstance(ty, FnT):
            raise _err(f"parameter {name} must have a function type", ty_x)
        params.append((name, ty))
        parser.params[name] = ty
    for f in forms:
        if any(f is d for d in decls):
            continue
        head = flat(f.items[0]) if isinstance(f, SList) and f.items else None
        if head == "program":
            (body,) = _form(f, "program", 1)
            programs.append(parser.program(body))
        elif head == "spec":
            name_x, body = _form(f, "spec", 2)
            name = _name(name_x, "spec name")
            if name in dict(specs):
                raise _err(f"spec {name} declared twice", name_x)
            specs.append((name, parser.formula(body)))
        else:
            programs.append(parser.program(f))
    if len(programs) > 1:
        raise FrontendError("more than one program in unit")
    return SourceUnit(tuple(domains), tuple(params), programs[0] if programs else None, tuple(specs))


# printing

def _a(text):
    return Atom(text)


def _l(*items):
    return SList(tuple(_a(i) if isinstance(i, str) else i for i in items))


def type_sexpr(t: Type):
    match t:
        case CarrierT(name):
            return _a(name)
        case MaybeT(e):
            return _l("maybe", type_sexpr(e))
        case ListT(e):
            return _l("list", type_sexpr(e))
        case EitherT(a, b):
            return _l("either", type_sexpr(a), type_sexpr(b))
        case PairT(a, b):
            return _l("pair", type_sexpr(a), type_sexpr(b))
        case FnT(a, b):
            return _l("fn", type_sexpr(a), type_sexpr(b))
    names = {UNIT_T: "Unit", BOOL_T: "Bool", NAT_T: "Nat", WRITER_FN_T: "wf"}
    if t in names:
        return _a(names[t])
    raise FrontendError(f"type {t} has no surface syntax")


def value_sexpr(v):
    """Surface form of a literal or a spec term."""
    match v:
        case Unit():
            return _a("unit")
        case Bool(b):
            return _a("true" if b else "false")
        case Nat(n):
            return _a(str(n))
        case AtomV(_, name) | Sym(name):
            return _a(name)
        case Nothing():
            return _a("nothing")
        case List(items):
            return _l("list", *[value_sexpr(x) for x in items])
        case Pair(a, b):
            return _l("pair", value_sexpr(a), value_sexpr(b))
        case Just(x):
            return _l("just", value_sexpr(x))
        case Left(x):
            return _l("left", value_sexpr(x))
        case Right(x):
            return _l("right", value_sexpr(x))
        case WfId():
            return _l("wf-id")
        case WfSelfAppend():
            return _l("wf-self-append")
        case WfConst(x):
            return _l("wf-const", value_sexpr(x))
        case WfPrepend(x):
            return _l("wf-prepend", value_sexpr(x))
        case WfAppend(x):
            return _l("wf-append", value_sexpr(x))
        case WfCompose(f, g):
            return _l("wf-compose", value_sexpr(f), value_sexpr(g))
        case Neutral(head, args):
            return _l(head, *[value_sexpr(a) for a in args])
    raise FrontendError(f"value {v!r} has no surface syntax")


def expr_sexpr(e):
    match e:
        case Lit(v):
            return value_sexpr(v)
        case Var(name):
            return _a(name)
        case Call(head, args):
            return _l(head, *[expr_sexpr(a) for a in args])
    raise FrontendError(f"not an expression: {e!r}")


def _lam(f: Lam):
    return _l("lambda", _l(f.param), expr_sexpr(f.body))


def program_sexpr(p):
    match p:
        case PReturn(e):
            return _l("return", expr_sexpr(e))
        case PBind(m, v, k):
            return _l("bind", program_sexpr(m), _l(v), program_sexpr(k))
        case PGets(f):
            return _l("gets", _lam(f))
        case PPuts(f):
            return _l("puts", _lam(f))
        case PTell(e):
            return _l("tell", expr_sexpr(e))
        case PAsk():
            return _l("ask")
        case PLocal(f, m):
            return _l("local", _lam(f), program_sexpr(m))
        case PPass(m):
            return _l("pass", program_sexpr(m))
        case PIf(c, a, b):
            return _l("if", expr_sexpr(c), program_sexpr(a), program_sexpr(b))
        case PMaybe(e, j, a, b):
            return _l("maybe", expr_sexpr(e), _l(j, program_sexpr(a)), program_sexpr(b))
        case PEither(e, lv, a, rv, b):
            return _l("either", expr_sexpr(e), _l(lv, program_sexpr(a)), _l(rv, program_sexpr(b)))
    raise FrontendError(f"not a program node: {p!r}")


def formula_sexpr(f: Formula):
    match f:
        case Top():
            return _a("top")
        case Bottom():
            return _a("bottom")
        case Eq(a, b):
            return _l("eq", value_sexpr(a), value_sexpr(b))
        case And(()):
            return _a("top")
        case And(parts):
            return _l("and", *[formula_sexpr(p) for p in parts])
        case Implies(h, b):
            return _l("implies", formula_sexpr(h), formula_sexpr(b))
        case ForallPlain(x, ty, b):
            return _l("forall", _l(x, type_sexpr(ty)), formula_sexpr(b))
        case ForallGuarded(x, ty, g, b):
            return _l("forall", _l(x, type_sexpr(ty)), formula_sexpr(g), formula_sexpr(b))
    raise FrontendError(f"not a formula: {f!r}")


def print_program(p) -> str:
    return pretty(program_sexpr(p))


def print_unit(unit: SourceUnit) -> str:
    """Canonical text; ``parse_unit(print_unit(u)) == u``."""
    out = []
    for sort, atoms in unit.domains:
        out.append(pretty(_l("domain", sort, _l(*atoms))))
    for name, ty in unit.params:
        out.append(pretty(_l("param", name, type_sexpr(ty))))
    if unit.program is not None:
        out.append(pretty(_l("program", program_sexpr(unit.program))))
    for name, f in unit.specs:
        out.append(pretty(_l("spec", name, formula_sexpr(f))))
    return "\n".join(out) + "\n"
