"""First-order obligation formulas with guarded quantifiers.

Terms inside formulas are plain :mod:`wpcheck.values` values: ``Sym``
leaves act as variables and ``Neutral`` nodes as stuck applications.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .carriers import (
    DEFAULT_BOUNDS, Bounds, Domains, FnT, ListT, Type,
    contains_writer_fn, enumerate_carrier, render_type,
)
from .values import (
    Atom, Bool, FnTable, Just, Left, List, Nat, Neutral, Nothing, Pair, Right,
    Sym, Unit, Value, WfAppend, WfCompose, WfConst, WfId, WfPrepend,
    WfSelfAppend, free_syms, is_concrete, map_children, render, resolve,
    substitute,
)


class FormulaError(Exception):
    pass


class Formula:
    __slots__ = ()

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Eq(Formula):
    lhs: Value
    rhs: Value


@dataclass(frozen=True, slots=True)
class And(Formula):
    parts: tuple


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    hyp: Eq
    body: Formula


def _occurrences(v, name):
    found = []

    def visit(c):
        if isinstance(c, Sym):
            if c.name == name:
                found.append(c)
        else:
            map_children(c, visit)
        return c

    visit(v)
    return len(found)


@dataclass(frozen=True, slots=True)
class ForallGuarded(Formula):
    """``(var : ty) → guard → body`` where ``guard`` pins ``var`` down.

    The bound variable occurs exactly once in the guard, on one side,
    possibly under constructors (``r ≡ just j``).
    """

    var: str
    ty: Type
    guard: Eq
    body: Formula

    def __post_init__(self):
        left = _occurrences(self.guard.lhs, self.var)
        right = _occurrences(self.guard.rhs, self.var)
        if sorted((left, right)) != [0, 1]:
            raise FormulaError(f"guard {print_formula(self.guard)} must mention {self.var} exactly once")

    @property
    def pattern(self):
        return self.guard.lhs if self.var in free_syms(self.guard.lhs) else self.guard.rhs

    @property
    def scrutinee(self):
        return self.guard.rhs if self.var in free_syms(self.guard.lhs) else self.guard.lhs


@dataclass(frozen=True, slots=True)
class ForallPlain(Formula):
    var: str
    ty: Type
    body: Formula


TOP = Top()
BOTTOM = Bottom()


def conj(*parts: Formula) -> Formula:
    if not parts:
        return TOP
    if len(parts) == 1:
        return parts[0]
    return And(tuple(parts))


def free_vars(f: Formula) -> set:
    match f:
        case Top() | Bottom():
            return set()
        case Eq(a, b):
            return free_syms(a) | free_syms(b)
        case And(parts):
            out = set()
            for p in parts:
                out |= free_vars(p)
            return out
        case Implies(h, body):
            return free_vars(h) | free_vars(body)
        case ForallGuarded(x, _, g, body):
            return (free_vars(g) | free_vars(body)) - {x}
        case ForallPlain(x, _, body):
            return free_vars(body) - {x}
    raise FormulaError(f"not a formula: {f!r}")


def _variant(name, avoid):
    candidate = name + "'"
    while candidate in avoid:
        candidate += "'"
    return candidate


def subst(f: Formula, mapping: Mapping[str, Value]) -> Formula:
    """Capture-avoiding simultaneous substitution of terms for variables."""
    if not mapping:
        return f
    match f:
        case Top() | Bottom():
            return f
        case Eq(a, b):
            return Eq(substitute(a, mapping), substitute(b, mapping))
        case And(parts):
            return And(tuple(subst(p, mapping) for p in parts))
        case Implies(h, body):
            return Implies(subst(h, mapping), subst(body, mapping))
        case ForallGuarded(x, ty, g, body):
            x, inner, parts = _enter_binder(f, x, (g, body), mapping)
            if inner is None:
                return f
            return ForallGuarded(x, ty, subst(parts[0], inner), subst(parts[1], inner))
        case ForallPlain(x, ty, body):
            x, inner, parts = _enter_binder(f, x, (body,), mapping)
            if inner is None:
                return f
            return ForallPlain(x, ty, subst(parts[0], inner))
    raise FormulaError(f"not a formula: {f!r}")


def _enter_binder(f, x, parts, mapping):
    fv = free_vars(f)
    inner = {k: v for k, v in mapping.items() if k != x and k in fv}
    if not inner:
        return x, None, parts
    incoming = set()
    for v in inner.values():
        incoming |= free_syms(v)
    if x in incoming:
        avoid = incoming | fv | set(inner)
        for p in parts:
            avoid |= free_vars(p)
        y = _variant(x, avoid)
        parts = tuple(subst(p, {x: Sym(y)}) for p in parts)
        x = y
    return x, inner, parts


# Evaluation.

def match_pattern(pattern: Value, value: Value, var: str, binding: Mapping[str, Value]):
    """Match ``value`` against ``pattern``; return what ``var`` binds to, or ``_NO_MATCH``."""
    if isinstance(pattern, Sym) and pattern.name == var:
        return value
    if var not in free_syms(pattern):
        return value if resolve(pattern, binding) == value else _NO_MATCH
    if isinstance(pattern, Neutral):
        raise FormulaError(f"cannot match against stuck term {render(pattern)}")
    if type(pattern) is not type(value):
        return _NO_MATCH
    match pattern:
        case Just(p) | Left(p) | Right(p) | WfConst(p) | WfPrepend(p) | WfAppend(p):
            return match_pattern(p, _child(value), var, binding)
        case Pair(a, b) | WfCompose(a, b):
            sub = (value.fst, value.snd) if isinstance(value, Pair) else (value.first, value.second)
            return _match_many((a, b), sub, var, binding)
        case List(items):
            if len(items) != len(value.items):
                return _NO_MATCH
            return _match_many(items, value.items, var, binding)
    raise FormulaError(f"cannot match against pattern {render(pattern)}")


class _NoMatch:
    def __repr__(self):
        return "<no match>"


_NO_MATCH = _NoMatch()


def _child(v):
    return v.items if isinstance(v, (WfConst, WfPrepend, WfAppend)) else v.value


def _match_many(pats, vals, var, binding):
    found = None
    for p, v in zip(pats, vals):
        got = match_pattern(p, v, var, binding)
        if got is _NO_MATCH:
            return _NO_MATCH
        if var in free_syms(p):
            found = got
    return found


def eval_formula(f: Formula, binding: Mapping[str, Value], domains: Domains | None = None,
                 bounds: Bounds = DEFAULT_BOUNDS) -> bool:
    """Decide ``f`` under ``binding``; quantifiers range over finite carriers."""
    match f:
        case Top():
            return True
        case Bottom():
            return False
        case Eq(a, b):
            return resolve(a, binding) == resolve(b, binding)
        case And(parts):
            return all(eval_formula(p, binding, domains, bounds) for p in parts)
        case Implies(h, body):
            return not eval_formula(h, binding, domains, bounds) or eval_formula(body, binding, domains, bounds)
        case ForallGuarded(x, _, _, body):
            pattern, other = f.pattern, f.scrutinee
            got = match_pattern(pattern, resolve(other, binding), x, binding)
            if got is _NO_MATCH:
                return True
            return eval_formula(body, {**binding, x: got}, domains, bounds)
        case ForallPlain(x, ty, body):
            if isinstance(ty, FnT) or contains_writer_fn(ty):
                raise FormulaError(f"cannot quantify over {render_type(ty)}")
            if domains is None:
                raise FormulaError("quantifier needs carrier declarations")
            return all(eval_formula(body, {**binding, x: v}, domains, bounds)
                       for v in enumerate_carrier(ty, domains, bounds))
    raise FormulaError(f"not a formula: {f!r}")


# Simplification.

def simplify_term(v: Value) -> Value:
    v = map_children(v, simplify_term)
    match v:
        case Neutral("append", (List(()), b)):
            return b
        case Neutral("append", (a, List(()))):
            return a
        case Neutral("append", (List(xs), List(ys))):
            return List(xs + ys)
        case Neutral("length", (List(xs),)):
            return Nat(len(xs))
    return v


def _literal_ctor(v):
    return is_concrete(v) and not isinstance(v, FnTable)


def _simp(f: Formula) -> Formula:
    match f:
        case Top() | Bottom():
            return f
        case Eq(a, b):
            return Eq(simplify_term(a), simplify_term(b))
        case And(parts):
            flat = []
            for p in parts:
                p = _simp(p)
                if isinstance(p, And):
                    flat.extend(p.parts)
                elif not isinstance(p, Top):
                    flat.append(p)
            return conj(*flat)
        case Implies(h, body):
            h, body = _simp(h), _simp(body)
            if isinstance(body, Top):
                return TOP
            if is_concrete(h.lhs) and is_concrete(h.rhs):
                return body if h.lhs == h.rhs else TOP
            return Implies(h, body)
        case ForallGuarded(x, ty, g, body):
            g, body = _simp(g), _simp(body)
            if isinstance(body, Top):
                return TOP
            node = ForallGuarded(x, ty, g, body)
            # list-typed binders alias emitted output and are kept on purpose
            if not isinstance(ty, ListT) and _literal_ctor(node.scrutinee):
                got = match_pattern(node.pattern, node.scrutinee, x, {})
                if got is _NO_MATCH:
                    return TOP
                return subst(body, {x: got})
            return node
        case ForallPlain(x, ty, body):
            body = _simp(body)
            return TOP if isinstance(body, Top) else ForallPlain(x, ty, body)
    raise FormulaError(f"not a formula: {f!r}")


def simplify(f: Formula) -> Formula:
    """Rewrite to an evaluation-equivalent, smaller formula (to a fixpoint)."""
    while True:
        g = _simp(f)
        if g == f:
            return g
        f = g


# Alpha-equivalence.

def _canonical(f: Formula, counter: list) -> Formula:
    match f:
        case And(()):
            return TOP
        case And((p,)):
            return _canonical(p, counter)
        case And(parts):
            return And(tuple(_canonical(p, counter) for p in parts))
        case Implies(h, body):
            return Implies(h, _canonical(body, counter))
        case ForallGuarded(x, ty, g, body):
            name = f"%{counter[0]}"
            counter[0] += 1
            ren = {x: Sym(name)}
            return ForallGuarded(name, ty, subst(g, ren), _canonical(subst(body, ren), counter))
        case ForallPlain(x, ty, body):
            name = f"%{counter[0]}"
            counter[0] += 1
            return ForallPlain(name, ty, _canonical(subst(body, {x: Sym(name)}), counter))
    return f


def alpha_eq(f1: Formula, f2: Formula) -> bool:
    """Equality up to consistent renaming of bound variables."""
    return _canonical(f1, [0]) == _canonical(f2, [0])


# Printing.

WIDTH = 78


def _flat(f: Formula) -> str:
    match f:
        case Top():
            return "⊤"
        case Bottom():
            return "⊥"
        case Eq(a, b):
            return f"{render(a)} ≡ {render(b)}"
        case And(()):
            return "⊤"
        case And((p,)):
            return _flat(p)
        case And(parts):
            return " × ".join(f"({_flat(p)})" for p in parts)
        case Implies(h, body):
            return f"{_flat(h)} → {_flat(body)}"
        case ForallGuarded(x, ty, g, body):
            return f"({x} : {render_type(ty)}) → {_flat(g)} → {_flat(body)}"
        case ForallPlain(x, ty, body):
            return f"∀ ({x} : {render_type(ty)}) → {_flat(body)}"
    raise FormulaError(f"not a formula: {f!r}")


def _header(f):
    match f:
        case Implies(h, body):
            return f"{_flat(h)} →", body
        case ForallGuarded(x, ty, g, body):
            return f"({x} : {render_type(ty)}) → {_flat(g)} →", body
        case ForallPlain(x, ty, body):
            return f"∀ ({x} : {render_type(ty)}) →", body
    return None, None


def _layout(f: Formula, col: int) -> str:
    text = _flat(f)
    if col + len(text) <= WIDTH:
        return text
    head, body = _header(f)
    if head is not None:
        pad = col + 2
        return f"{head}\n{' ' * pad}{_layout(body, pad)}"
    if isinstance(f, And) and len(f.parts) > 1:
        out = f"({_layout(f.parts[0], col + 1)})"
        for p in f.parts[1:]:
            out += f"\n{' ' * col}× ({_layout(p, col + 3)})"
        return out
    if isinstance(f, And) and f.parts:
        return _layout(f.parts[0], col)
    return text


def print_formula(f: Formula) -> str:
    """Arrow-style rendering: ``(r : Maybe Wr) → r ≡ g s → …``."""
    return _layout(f, 0)


# JSON.

def term_to_json(v: Value):
    match v:
        case Unit():
            return {"tag": "unit"}
        case Bool(b):
            return {"tag": "bool", "value": b}
        case Nat(n):
            return {"tag": "nat", "value": n}
        case Atom(sort, name):
            return {"tag": "atom", "sort": sort, "name": name}
        case Sym(name):
            return {"tag": "var", "name": name}
        case List(items):
            return {"tag": "list", "items": [term_to_json(x) for x in items]}
        case Pair(a, b):
            return {"tag": "pair", "fst": term_to_json(a), "snd": term_to_json(b)}
        case Left(x) | Right(x) | Just(x):
            return {"tag": type(v).__name__.lower(), "value": term_to_json(x)}
        case Nothing():
            return {"tag": "nothing"}
        case WfId() | WfSelfAppend():
            return {"tag": render(v)}
        case WfConst(x) | WfPrepend(x) | WfAppend(x):
            return {"tag": render(v).split()[0], "items": term_to_json(x)}
        case WfCompose(a, b):
            return {"tag": "wf-compose", "first": term_to_json(a), "second": term_to_json(b)}
        case FnTable(entries=entries):
            return {"tag": "table", "entries": [[term_to_json(k), term_to_json(x)] for k, x in entries]}
        case Neutral(head, args):
            return {"tag": "app", "head": head, "args": [term_to_json(a) for a in args]}
    raise TypeError(f"not a value: {v!r}")


def formula_to_json(f: Formula):
    match f:
        case Top():
            return {"tag": "top"}
        case Bottom():
            return {"tag": "bottom"}
        case Eq(a, b):
            return {"tag": "eq", "lhs": term_to_json(a), "rhs": term_to_json(b)}
        case And(parts):
            return {"tag": "and", "parts": [formula_to_json(p) for p in parts]}
        case Implies(h, body):
            return {"tag": "implies", "hyp": formula_to_json(h), "body": formula_to_json(body)}
        case ForallGuarded(x, ty, g, body):
            return {"tag": "forall-guarded", "var": x, "type": render_type(ty),
                    "guard": formula_to_json(g), "body": formula_to_json(body)}
        case ForallPlain(x, ty, body):
            return {"tag": "forall", "var": x, "type": render_type(ty), "body": formula_to_json(body)}
    raise FormulaError(f"not a formula: {f!r}")
