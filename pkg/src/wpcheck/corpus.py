"""Seeded random surface programs and postconditions.

Programs are generated type-directed, so every one compiles.  Depth 1
means a single command or ``return``; each extra level allows one more
layer of bind, local, pass or branching.
"""

from __future__ import annotations

import random

from .carriers import (
    BOOL_T, EV, NAT_T, ST, UNIT_T, WR, WR_LIST, WRITER_FN_T, CarrierT, EitherT,
    ListT, MaybeT, PairT, Type,
)
from .formula import And, Eq, ForallGuarded, ForallPlain, Implies
from .values import (
    FALSE, NOTHING, TRUE, UNIT, WF_ID, WF_SELF_APPEND, Atom, Call, Just, Left,
    Lit, List, Nat, Neutral, Right, Sym, Var,
)
from .frontend.syntax import (
    Lam, PAsk, PBind, PEither, PGets, PIf, PLocal, PMaybe, PPass, PPuts, PReturn,
    PTell, SourceUnit,
)

CORPUS_DOMAINS = (("St", ("s0", "s1")), ("Ev", ("e0", "e1")), ("Wr", ("w0", "w1")))
MAYBE_WR = MaybeT(WR)
EITHER_WR_ST = EitherT(WR, ST)
RESULT_TYPES = (UNIT_T, BOOL_T, ST, EV, WR, MAYBE_WR, WR_LIST, EITHER_WR_ST, NAT_T)
BIND_TYPES = (UNIT_T, BOOL_T, ST, EV, WR, MAYBE_WR, WR_LIST, EITHER_WR_ST)


class _Gen:
    def __init__(self, rng: random.Random, domains=CORPUS_DOMAINS):
        self.rng = rng
        self.atoms = {sort: atoms for sort, atoms in domains}
        self.names = 0

    def fresh(self, prefix):
        self.names += 1
        return f"{prefix}{self.names}"

    def atom(self, sort):
        return Atom(sort, self.rng.choice(self.atoms[sort]))

    # expressions

    def expr(self, ty: Type, scope, d=2):
        rng = self.rng
        here = [Var(n) for n, t in scope if t == ty]
        if here and rng.random() < 0.5:
            return rng.choice(here)
        if d > 0 and rng.random() < 0.15:
            return Call("if", (self.expr(BOOL_T, scope, d - 1), self.expr(ty, scope, d - 1),
                               self.expr(ty, scope, d - 1)))
        match ty:
            case _ if ty == UNIT_T:
                return Lit(UNIT)
            case _ if ty == BOOL_T:
                if d > 0 and rng.random() < 0.6:
                    sort = rng.choice((ST, EV, WR))
                    return Call("eq", (self.expr(sort, scope, d - 1), self.expr(sort, scope, d - 1)))
                return Lit(rng.choice((TRUE, FALSE)))
            case CarrierT(sort):
                return Lit(self.atom(sort))
            case _ if ty == NAT_T:
                if d > 0 and rng.random() < 0.6:
                    return Call("length", (self.expr(WR_LIST, scope, d - 1),))
                return Lit(Nat(rng.randint(0, 2)))
            case MaybeT(e):
                if rng.random() < 0.35:
                    return Lit(NOTHING)
                return Call("just", (self.expr(e, scope, d - 1),))
            case ListT(e):
                if d > 0 and rng.random() < 0.25:
                    return Call("append", (self.expr(ty, scope, d - 1), self.expr(ty, scope, d - 1)))
                return Call("list", tuple(self.expr(e, scope, 0) for _ in range(rng.randint(0, 2))))
            case EitherT(a, b):
                if rng.random() < 0.5:
                    return Call("left", (self.expr(a, scope, d - 1),))
                return Call("right", (self.expr(b, scope, d - 1),))
            case PairT(a, b):
                return Call("pair", (self.expr(a, scope, d - 1), self.expr(b, scope, d - 1)))
            case _ if ty == WRITER_FN_T:
                k = rng.randrange(6 if d > 0 else 5)
                if k == 0:
                    return Lit(WF_ID)
                if k == 1:
                    return Lit(WF_SELF_APPEND)
                if k == 5:
                    return Call("wf-compose", (self.expr(ty, scope, d - 1), self.expr(ty, scope, d - 1)))
                head = ("wf-const", "wf-prepend", "wf-append")[k - 2]
                return Call(head, (self.expr(WR_LIST, scope, 0),))
        raise ValueError(f"no generator for {ty}")

    # programs

    def program(self, ty: Type, d: int, scope):
        rng = self.rng
        kinds = ["return", "gets"]
        if ty == UNIT_T:
            kinds += ["puts", "tell", "tell"]
        if ty == EV:
            kinds.append("ask")
        if d > 1:
            kinds += ["bind"] * 4 + ["local", "pass", "pass", "if", "maybe", "maybe", "either"]
        kind = rng.choice(kinds)
        match kind:
            case "return":
                return PReturn(self.expr(ty, scope))
            case "gets":
                return PGets(Lam("s", self.expr(ty, scope + [("s", ST)])))
            case "puts":
                return PPuts(Lam("s", self.expr(ST, scope + [("s", ST)])))
            case "tell":
                return PTell(self.expr(WR_LIST, scope))
            case "ask":
                return PAsk()
            case "bind":
                u = rng.choice(BIND_TYPES)
                x = self.fresh("x")
                m = self.program(u, d - 1, scope)
                return PBind(m, x, self.program(ty, d - 1, scope + [(x, u)]))
            case "local":
                return PLocal(Lam("v", self.expr(EV, scope + [("v", EV)])), self.program(ty, d - 1, scope))
            case "pass":
                return PPass(self.program(PairT(ty, WRITER_FN_T), d - 1, scope))
            case "if":
                return PIf(self.expr(BOOL_T, scope), self.program(ty, d - 1, scope),
                           self.program(ty, d - 1, scope))
            case "maybe":
                j = self.fresh("j")
                return PMaybe(self.expr(MAYBE_WR, scope), j, self.program(ty, d - 1, scope + [(j, WR)]),
                              self.program(ty, d - 1, scope))
            case "either":
                l, r = self.fresh("l"), self.fresh("r")
                return PEither(self.expr(EITHER_WR_ST, scope), l, self.program(ty, d - 1, scope + [(l, WR)]),
                               r, self.program(ty, d - 1, scope + [(r, ST)]))

    # postconditions

    def literal(self, ty):
        rng = self.rng
        match ty:
            case _ if ty == UNIT_T:
                return UNIT
            case _ if ty == BOOL_T:
                return rng.choice((TRUE, FALSE))
            case CarrierT(sort):
                return self.atom(sort)
            case _ if ty == NAT_T:
                return Nat(rng.randint(0, 2))
            case MaybeT(e):
                return NOTHING if rng.random() < 0.4 else Just(self.literal(e))
            case ListT(e):
                return List(tuple(self.literal(e) for _ in range(rng.randint(0, 2))))
            case EitherT(a, b):
                return Left(self.literal(a)) if rng.random() < 0.5 else Right(self.literal(b))
        raise ValueError(f"no literal for {ty}")

    def post_atom(self, result_ty):
        rng = self.rng
        k = rng.randrange(9)
        if k == 0:
            return Eq(Sym("post-state"), Sym("pre-state"))
        if k == 1:
            return Eq(Sym("post-state"), self.atom("St"))
        if k == 2:
            return Eq(Nat(rng.randint(0, 2)), Neutral("length", (Sym("output"),)))
        if k == 3:
            return Eq(Sym("output"), self.literal(WR_LIST))
        if k == 4 and isinstance(result_ty, MaybeT):
            j = "j"
            return ForallGuarded(j, result_ty.elem, Eq(Sym("result"), Just(Sym(j))),
                                 Eq(Sym(j), self.literal(result_ty.elem)))
        if k == 5:
            return ForallPlain("x", ST, Implies(Eq(Sym("x"), Sym("post-state")),
                                                 Eq(Sym("x"), self.atom("St"))))
        if k == 6:
            return Implies(Eq(Sym("pre-state"), self.atom("St")), self.post_atom(result_ty))
        if k == 7:
            return Eq(Sym("pre-env"), self.atom("Ev"))
        return Eq(Sym("result"), self.literal(result_ty))

    def post(self, result_ty):
        if self.rng.random() < 0.4:
            return And((self.post_atom(result_ty), self.post_atom(result_ty)))
        return self.post_atom(result_ty)


def generate_units(count: int, depth: int, seed: int, posts: int = 3) -> list:
    """``count`` units, each a closed program with ``posts`` named postconditions."""
    rng = random.Random(seed)
    units = []
    for _ in range(count):
        gen = _Gen(rng)
        ty = rng.choice(RESULT_TYPES)
        prog = gen.program(ty, rng.randint(1, depth), [])
        specs = tuple((f"P{k}", gen.post(ty)) for k in range(posts))
        units.append(SourceUnit(CORPUS_DOMAINS, (), prog, specs))
    return units


def generate_program_corpus(depth: int, seed: int, count: int = 100):
    """Yield compiled programs; see :func:`generate_units`."""
    from .frontend.compiler import compile_unit
    for unit in generate_units(count, depth, seed, posts=0):
        yield compile_unit(unit).program()
