"""Parser for the arrow-style obligation text produced by ``print_formula``.

    (r : Maybe Wr) → r ≡ g pre-state → (… ) × (…)

Conjuncts are always parenthesized by the printer, arrows extend as far
right as possible, ``++`` is right associative and application binds
tighter than ``++``.
"""

from __future__ import annotations

import re

from ..carriers import (
    BOOL_T, NAT_T, UNIT_T, WRITER_FN_T, CarrierT, Domains, EitherT, FnT, ListT,
    MaybeT, PairT,
)
from ..formula import TOP, BOTTOM, And, Eq, FormulaError, ForallGuarded, ForallPlain, Implies
from ..values import (
    FALSE, NOTHING, TRUE, UNIT, WF_ID, WF_SELF_APPEND, Just, Left, List,
    Nat, Neutral, Pair, Right, Sym, WfCompose, WfAppend, WfConst, WfPrepend,
)
from .sexpr import FrontendError

_TOKEN = re.compile(r"\s+|\+\+|[()\[\]{},:≡→×∀⊤⊥↦]|[A-Za-z_][\w'\-]*|\d+")

_CONSTS = {"unit": UNIT, "true": TRUE, "false": FALSE, "nothing": NOTHING,
           "wf-id": WF_ID, "wf-self-append": WF_SELF_APPEND}
_UNARY = {"just": Just, "left": Left, "right": Right, "wf-const": WfConst,
          "wf-prepend": WfPrepend, "wf-append": WfAppend}
_NEUTRAL = {"fst": 1, "snd": 1, "length": 1, "eq": 2, "if": 3}
_TYPES = {"Unit": UNIT_T, "Bool": BOOL_T, "Nat": NAT_T, "WriterFn": WRITER_FN_T}
_STARTS_ATOMIC = re.compile(r"[A-Za-z_\d\[(]")


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FrontendError(f"unexpected character {text[pos]!r} at offset {pos}")
        if not m.group().isspace():
            out.append(m.group())
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, domains):
        self.toks = _tokenize(text)
        self.pos = 0
        self.domains = domains

    def peek(self, k=0):
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise FrontendError(f"expected {expected or 'more input'}, got {tok or 'end of input'}")
        self.pos += 1
        return tok

    # formulas

    def formula(self):
        tok = self.peek()
        if tok == "∀":
            self.take()
            var, ty = self.binder()
            self.take("→")
            return ForallPlain(var, ty, self.formula())
        if tok == "(" and self.peek(2) == ":":
            var, ty = self.binder()
            self.take("→")
            guard = self.equation()
            self.take("→")
            try:
                return ForallGuarded(var, ty, guard, self.formula())
            except FormulaError as e:
                raise FrontendError(str(e)) from None
        first = self.primary()
        if isinstance(first, Eq) and self.peek() == "→":
            self.take()
            return Implies(first, self.formula())
        parts = [first]
        while self.peek() == "×":
            self.take()
            parts.append(self.primary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def primary(self):
        tok = self.peek()
        if tok == "⊤":
            self.take()
            return TOP
        if tok == "⊥":
            self.take()
            return BOTTOM
        if tok == "(":
            saved = self.pos
            try:
                return self.equation()
            except FrontendError:
                self.pos = saved
            self.take("(")
            inner = self.formula()
            self.take(")")
            return inner
        return self.equation()

    def equation(self):
        lhs = self.term()
        self.take("≡")
        return Eq(lhs, self.term())

    def binder(self):
        self.take("(")
        var = self.take()
        self.take(":")
        ty = self.type()
        self.take(")")
        return var, ty

    # types

    def type(self):
        left = self.type_product()
        if self.peek() == "→":
            self.take()
            return FnT(left, self.type())
        return left

    def type_product(self):
        left = self.type_app()
        if self.peek() == "×":
            self.take()
            return PairT(left, self.type_product())
        return left

    def type_app(self):
        tok = self.peek()
        if tok in ("Maybe", "List"):
            self.take()
            arg = self.type_atomic()
            return MaybeT(arg) if tok == "Maybe" else ListT(arg)
        if tok == "Either":
            self.take()
            return EitherT(self.type_atomic(), self.type_atomic())
        return self.type_atomic()

    def type_atomic(self):
        tok = self.take()
        if tok == "(":
            t = self.type()
            self.take(")")
            return t
        if tok in _TYPES:
            return _TYPES[tok]
        if tok in ("St", "Ev", "Wr"):
            return CarrierT(tok)
        raise FrontendError(f"unknown type {tok!r}")

    # terms

    def term(self):
        left = self.application()
        if self.peek() == "++":
            self.take()
            return Neutral("append", (left, self.term()))
        return left

    def _more_args(self):
        tok = self.peek()
        return tok is not None and _STARTS_ATOMIC.match(tok) is not None and tok not in _UNARY \
            and tok not in _NEUTRAL and tok != "wf-compose"

    def application(self):
        tok = self.peek()
        if tok in _UNARY:
            self.take()
            return _UNARY[tok](self.atomic())
        if tok == "wf-compose":
            self.take()
            return WfCompose(self.atomic(), self.atomic())
        if tok in _NEUTRAL:
            self.take()
            return Neutral(tok, tuple(self.atomic() for _ in range(_NEUTRAL[tok])))
        head = self.atomic()
        while self._more_args():
            head = Neutral("apply", (head, self.atomic()))
        return head

    def atomic(self):
        tok = self.take()
        if tok == "(":
            first = self.term()
            if self.peek() == ",":
                self.take()
                second = self.term()
                self.take(")")
                return Pair(first, second)
            self.take(")")
            return first
        if tok == "[":
            items = []
            if self.peek() != "]":
                items.append(self.term())
                while self.peek() == ",":
                    self.take()
                    items.append(self.term())
            self.take("]")
            return List(tuple(items))
        if tok.isdigit():
            return Nat(int(tok))
        if tok in _CONSTS:
            return _CONSTS[tok]
        if tok in _UNARY or tok in _NEUTRAL or tok == "wf-compose":
            raise FrontendError(f"{tok} needs parentheses in argument position")
        if not re.match(r"[A-Za-z_]", tok):
            raise FrontendError(f"unexpected {tok!r}")
        atom = self.domains.atom(tok) if self.domains else None
        return atom if atom is not None else Sym(tok)


def parse_spec(text: str, domains: Domains | None = None):
    """Read a formula in the printer's notation; ``domains`` tells atoms from variables."""
    p = _Parser(text, domains)
    f = p.formula()
    if p.peek() is not None:
        raise FrontendError(f"unexpected {p.peek()!r} after formula")
    return f
