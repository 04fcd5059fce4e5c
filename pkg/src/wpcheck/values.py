"""Runtime values, surface expressions and their evaluation.

Values are immutable.  ``Sym`` and ``Neutral`` only show up while
obligations are generated symbolically; concrete execution never
produces them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

NAT_MAX = 64


class EvalError(Exception):
    pass


class UnboundVariable(EvalError):
    pass


class TypeMismatch(EvalError):
    pass


class SymbolicValueError(EvalError):
    """A symbolic value reached a place that needs a concrete one."""


class Value:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Unit(Value):
    pass


@dataclass(frozen=True, slots=True)
class Bool(Value):
    value: bool


@dataclass(frozen=True, slots=True)
class Nat(Value):
    value: int

    def __post_init__(self):
        if not 0 <= self.value <= NAT_MAX:
            raise EvalError(f"natural {self.value} outside 0..{NAT_MAX}")


@dataclass(frozen=True, slots=True)
class Atom(Value):
    """A member of a declared carrier (St, Ev or Wr)."""

    sort: str
    name: str


@dataclass(frozen=True, slots=True)
class List(Value):
    items: tuple = ()


@dataclass(frozen=True, slots=True)
class Pair(Value):
    fst: Value
    snd: Value


@dataclass(frozen=True, slots=True)
class Left(Value):
    value: Value


@dataclass(frozen=True, slots=True)
class Right(Value):
    value: Value


@dataclass(frozen=True, slots=True)
class Just(Value):
    value: Value


@dataclass(frozen=True, slots=True)
class Nothing(Value):
    pass


@dataclass(frozen=True, slots=True)
class Sym(Value):
    name: str


@dataclass(frozen=True, slots=True)
class Neutral(Value):
    """A stuck application such as ``g s`` or ``length o``."""

    head: str
    args: tuple


@dataclass(frozen=True)
class FnTable(Value):
    """Finite total function, stored as ordered ``(key, value)`` entries."""

    dom: Any
    cod: Any
    entries: tuple
    _lookup: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_lookup", dict(self.entries))

    def __call__(self, key):
        try:
            return self._lookup[key]
        except KeyError:
            raise TypeMismatch(f"{render(key)} is outside the table domain") from None


# Writer transformers: a closed grammar of List Wr -> List Wr functions.

class WriterTransformer(Value):
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class WfId(WriterTransformer):
    pass


@dataclass(frozen=True, slots=True)
class WfConst(WriterTransformer):
    items: Value


@dataclass(frozen=True, slots=True)
class WfSelfAppend(WriterTransformer):
    pass


@dataclass(frozen=True, slots=True)
class WfPrepend(WriterTransformer):
    items: Value


@dataclass(frozen=True, slots=True)
class WfAppend(WriterTransformer):
    items: Value


@dataclass(frozen=True, slots=True)
class WfCompose(WriterTransformer):
    first: WriterTransformer
    second: WriterTransformer


UNIT = Unit()
TRUE = Bool(True)
FALSE = Bool(False)
NOTHING = Nothing()
NIL = List(())
WF_ID = WfId()
WF_SELF_APPEND = WfSelfAppend()


def is_concrete(v: Value) -> bool:
    match v:
        case Sym() | Neutral():
            return False
        case List(items):
            return all(is_concrete(x) for x in items)
        case Pair(a, b):
            return is_concrete(a) and is_concrete(b)
        case Left(x) | Right(x) | Just(x):
            return is_concrete(x)
        case WfConst(x) | WfPrepend(x) | WfAppend(x):
            return is_concrete(x)
        case WfCompose(f, g):
            return is_concrete(f) and is_concrete(g)
    return True


def free_syms(v: Value, acc: set | None = None) -> set:
    """Names of every ``Sym`` occurring in ``v``."""
    if acc is None:
        acc = set()
    match v:
        case Sym(name):
            acc.add(name)
        case Neutral(_, args):
            for a in args:
                free_syms(a, acc)
        case List(items):
            for x in items:
                free_syms(x, acc)
        case Pair(a, b) | WfCompose(a, b):
            free_syms(a, acc)
            free_syms(b, acc)
        case Left(x) | Right(x) | Just(x) | WfConst(x) | WfPrepend(x) | WfAppend(x):
            free_syms(x, acc)
    return acc


def map_children(v: Value, fn) -> Value:
    """Rebuild ``v`` with ``fn`` applied to each immediate sub-value."""
    match v:
        case Neutral(head, args):
            return Neutral(head, tuple(fn(a) for a in args))
        case List(items):
            return List(tuple(fn(x) for x in items))
        case Pair(a, b):
            return Pair(fn(a), fn(b))
        case Left(x):
            return Left(fn(x))
        case Right(x):
            return Right(fn(x))
        case Just(x):
            return Just(fn(x))
        case WfConst(x):
            return WfConst(fn(x))
        case WfPrepend(x):
            return WfPrepend(fn(x))
        case WfAppend(x):
            return WfAppend(fn(x))
        case WfCompose(f, g):
            return WfCompose(fn(f), fn(g))
    return v


def substitute(v: Value, mapping: Mapping[str, Value]) -> Value:
    """Replace ``Sym`` leaves by ``mapping``; no reduction happens."""
    if not mapping:
        return v
    if isinstance(v, Sym):
        return mapping.get(v.name, v)
    return map_children(v, lambda c: substitute(c, mapping))


def _symbolic(v):
    return isinstance(v, (Sym, Neutral))


def _append(a, b):
    if isinstance(a, List) and isinstance(b, List):
        return List(a.items + b.items)
    if _symbolic(a) and isinstance(b, (List, Sym, Neutral)) or _symbolic(b) and isinstance(a, List):
        return Neutral("append", (a, b))
    raise TypeMismatch(f"append expects lists, got {render(a)} and {render(b)}")


def apply_writer_fn(wf: WriterTransformer, xs: Value) -> Value:
    """Denotation of a writer transformer.

    ``xs`` may be symbolic; the result is then as reduced as the grammar
    allows (``WfConst`` ignores its input entirely).
    """
    match wf:
        case WfId():
            return xs
        case WfConst(items):
            return items
        case WfSelfAppend():
            return _append(xs, xs)
        case WfPrepend(items):
            return _append(items, xs)
        case WfAppend(items):
            return _append(xs, items)
        case WfCompose(first, second):
            return apply_writer_fn(first, apply_writer_fn(second, xs))
    raise TypeMismatch(f"not a writer transformer: {render(wf)}")


def _apply(f, x):
    if isinstance(f, FnTable):
        return f(x) if is_concrete(x) else Neutral("apply", (f, x))
    if isinstance(f, WriterTransformer):
        if is_concrete(f):
            return apply_writer_fn(f, x)
        return Neutral("apply", (f, x))
    if _symbolic(f):
        return Neutral("apply", (f, x))
    raise TypeMismatch(f"cannot apply {render(f)}")


def _proj(head, p):
    if isinstance(p, Pair):
        return p.fst if head == "fst" else p.snd
    if _symbolic(p):
        return Neutral(head, (p,))
    raise TypeMismatch(f"{head} of non-pair {render(p)}")


def _length(xs):
    if isinstance(xs, List):
        return Nat(len(xs.items))
    if _symbolic(xs):
        return Neutral("length", (xs,))
    raise TypeMismatch(f"length of non-list {render(xs)}")


def _eq(a, b):
    if is_concrete(a) and is_concrete(b):
        return Bool(a == b)
    return Neutral("eq", (a, b))


def _if(c, a, b):
    if isinstance(c, Bool):
        return a if c.value else b
    if _symbolic(c):
        return Neutral("if", (c, a, b))
    raise TypeMismatch(f"if on non-boolean {render(c)}")


def _wf_items(x):
    if not isinstance(x, (List, Sym, Neutral)):
        raise TypeMismatch(f"writer transformer expects a list, got {render(x)}")
    return x


def _compose(f, g):
    for h in (f, g):
        if not isinstance(h, WriterTransformer):
            raise TypeMismatch(f"wf-compose expects writer transformers, got {render(h)}")
    return WfCompose(f, g)


PRIMS = {
    "pair": (2, Pair),
    "just": (1, Just),
    "left": (1, Left),
    "right": (1, Right),
    "fst": (1, lambda p: _proj("fst", p)),
    "snd": (1, lambda p: _proj("snd", p)),
    "append": (2, _append),
    "length": (1, _length),
    "apply": (2, _apply),
    "eq": (2, _eq),
    "if": (3, _if),
    "wf-const": (1, lambda x: WfConst(_wf_items(x))),
    "wf-prepend": (1, lambda x: WfPrepend(_wf_items(x))),
    "wf-append": (1, lambda x: WfAppend(_wf_items(x))),
    "wf-compose": (2, _compose),
}


def prim(head: str, args) -> Value:
    """Apply an expression head to already-evaluated arguments."""
    if head == "list":
        return List(tuple(args))
    try:
        arity, fn = PRIMS[head]
    except KeyError:
        raise EvalError(f"unknown operation {head!r}") from None
    if len(args) != arity:
        raise EvalError(f"{head} takes {arity} argument(s), got {len(args)}")
    return fn(*args)


# Surface expressions.

@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Lit:
    value: Value


@dataclass(frozen=True, slots=True)
class Call:
    head: str
    args: tuple


def eval_expr(expr, env: Mapping[str, Value]) -> Value:
    match expr:
        case Lit(v):
            return v
        case Var(name):
            try:
                return env[name]
            except KeyError:
                raise UnboundVariable(f"unbound variable {name!r}") from None
        case Call(head, args):
            return prim(head, [eval_expr(a, env) for a in args])
    raise EvalError(f"not an expression: {expr!r}")


@dataclass(frozen=True)
class Lambda:
    """A one-argument surface lambda closed over ``env``."""

    param: str
    body: Any
    env: Mapping[str, Value] = field(default_factory=dict, compare=False)

    def __call__(self, v: Value) -> Value:
        return eval_expr(self.body, {**self.env, self.param: v})


def resolve(v: Value, binding: Mapping[str, Value]) -> Value:
    """Evaluate a term to a concrete value under ``binding``.

    Stuck applications are re-run with their arguments resolved; anything
    still symbolic afterwards is an error.
    """
    match v:
        case Sym(name):
            try:
                return binding[name]
            except KeyError:
                raise UnboundVariable(f"unbound variable {name!r}") from None
        case Neutral(head, args):
            out = prim(head, [resolve(a, binding) for a in args])
            if not is_concrete(out):
                raise SymbolicValueError(f"cannot resolve {render(v)}")
            return out
        case Unit() | Bool() | Nat() | Atom() | Nothing() | FnTable() | WfId() | WfSelfAppend():
            return v
    return map_children(v, lambda c: resolve(c, binding))


def is_compound(v: Value) -> bool:
    """Whether ``render(v)`` needs parentheses when used as an argument."""
    match v:
        case Just() | Left() | Right() | WfConst() | WfPrepend() | WfAppend() | WfCompose():
            return True
        case Neutral():
            return True
    return False


def _arg(v):
    text = render(v)
    return f"({text})" if is_compound(v) else text


def render(v: Value) -> str:
    match v:
        case Unit():
            return "unit"
        case Bool(b):
            return "true" if b else "false"
        case Nat(n):
            return str(n)
        case Atom(_, name) | Sym(name):
            return name
        case List(items):
            return "[" + ", ".join(render(x) for x in items) + "]"
        case Pair(a, b):
            return f"({render(a)} , {render(b)})"
        case Left(x):
            return f"left {_arg(x)}"
        case Right(x):
            return f"right {_arg(x)}"
        case Just(x):
            return f"just {_arg(x)}"
        case Nothing():
            return "nothing"
        case WfId():
            return "wf-id"
        case WfSelfAppend():
            return "wf-self-append"
        case WfConst(x):
            return f"wf-const {_arg(x)}"
        case WfPrepend(x):
            return f"wf-prepend {_arg(x)}"
        case WfAppend(x):
            return f"wf-append {_arg(x)}"
        case WfCompose(f, g):
            return f"wf-compose {_arg(f)} {_arg(g)}"
        case FnTable(entries=entries):
            return "{" + ", ".join(f"{render(k)} ↦ {render(x)}" for k, x in entries) + "}"
        case Neutral("append", (a, b)):
            # application binds tighter than ++, which associates to the right
            left = f"({render(a)})" if isinstance(a, Neutral) and a.head == "append" else render(a)
            return f"{left} ++ {render(b)}"
        case Neutral("apply", (f, x)):
            head = render(f) if isinstance(f, Sym) else _arg(f)
            return f"{head} {_arg(x)}"
        case Neutral(head, args):
            return " ".join([head] + [_arg(a) for a in args])
    raise TypeError(f"not a value: {v!r}")
