"""Type descriptors, finite carriers and exhaustive enumeration.

Enumeration order is fixed so that counterexamples are reproducible:
atoms in declaration order, ``false`` before ``true``, ``nothing`` before
``just``, ``left`` before ``right``, lists by length then
lexicographically, pairs with the first component varying slowest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .values import (
    FALSE, NOTHING, TRUE, UNIT, WF_ID, WF_SELF_APPEND,
    NAT_MAX, Atom, FnTable, Just, Left, List, Nat, Pair, Right,
    WfAppend, WfCompose, WfConst, WfPrepend,
)

CARRIER_SORTS = ("St", "Ev", "Wr")


class EnumerationError(Exception):
    pass


class Type:
    __slots__ = ()

    def __str__(self):
        return render_type(self)


@dataclass(frozen=True, slots=True)
class UnitT(Type):
    pass


@dataclass(frozen=True, slots=True)
class BoolT(Type):
    pass


@dataclass(frozen=True, slots=True)
class NatT(Type):
    pass


@dataclass(frozen=True, slots=True)
class CarrierT(Type):
    name: str


@dataclass(frozen=True, slots=True)
class ListT(Type):
    elem: Type


@dataclass(frozen=True, slots=True)
class PairT(Type):
    fst: Type
    snd: Type


@dataclass(frozen=True, slots=True)
class EitherT(Type):
    left: Type
    right: Type


@dataclass(frozen=True, slots=True)
class MaybeT(Type):
    elem: Type


@dataclass(frozen=True, slots=True)
class WriterFnT(Type):
    pass


@dataclass(frozen=True, slots=True)
class FnT(Type):
    dom: Type
    cod: Type


@dataclass(frozen=True, slots=True)
class TVar(Type):
    """Unification variable; only lives inside the type checker."""

    id: int


UNIT_T = UnitT()
BOOL_T = BoolT()
NAT_T = NatT()
WRITER_FN_T = WriterFnT()
ST = CarrierT("St")
EV = CarrierT("Ev")
WR = CarrierT("Wr")
WR_LIST = ListT(WR)
MAYBE_WR = MaybeT(WR)
PAIR_UNIT_WF = PairT(UNIT_T, WRITER_FN_T)


def render_type(t: Type) -> str:
    match t:
        case UnitT():
            return "Unit"
        case BoolT():
            return "Bool"
        case NatT():
            return "Nat"
        case WriterFnT():
            return "WriterFn"
        case CarrierT(name):
            return name
        case ListT(e):
            return f"List {_type_arg(e)}"
        case MaybeT(e):
            return f"Maybe {_type_arg(e)}"
        case EitherT(a, b):
            return f"Either {_type_arg(a)} {_type_arg(b)}"
        case PairT(a, b):
            left = f"({render_type(a)})" if isinstance(a, (PairT, FnT)) else render_type(a)
            right = f"({render_type(b)})" if isinstance(b, FnT) else render_type(b)
            return f"{left} × {right}"
        case FnT(a, b):
            left = f"({render_type(a)})" if isinstance(a, FnT) else render_type(a)
            return f"{left} → {render_type(b)}"
        case TVar(i):
            return f"?{i}"
    raise TypeError(f"not a type: {t!r}")


def _type_arg(t):
    text = render_type(t)
    return f"({text})" if isinstance(t, (ListT, MaybeT, EitherT, PairT, FnT)) else text


@dataclass(frozen=True)
class CarrierDecl:
    name: str
    atoms: tuple

    def __post_init__(self):
        if self.name not in CARRIER_SORTS:
            raise ValueError(f"unknown carrier {self.name!r}; expected one of {CARRIER_SORTS}")
        if not self.atoms:
            raise ValueError(f"carrier {self.name} is empty")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError(f"carrier {self.name} has duplicate atoms")

    def values(self):
        return tuple(Atom(self.name, a) for a in self.atoms)


@dataclass(frozen=True)
class Domains:
    carriers: dict = field(default_factory=dict)

    @classmethod
    def of(cls, **atoms):
        """``Domains.of(St=["s0", "s1"], Ev=["e0"], Wr=["w0"])``"""
        return cls({name: CarrierDecl(name, tuple(a)) for name, a in atoms.items()})

    def atoms(self, name):
        try:
            return self.carriers[name].values()
        except KeyError:
            raise EnumerationError(f"carrier {name} is not declared") from None

    def atom(self, name: str):
        """Look up an atom by its bare name, or ``None``."""
        for decl in self.carriers.values():
            if name in decl.atoms:
                return Atom(decl.name, name)
        return None


@dataclass(frozen=True)
class Bounds:
    max_list_len: int = 4
    max_nat: int = NAT_MAX
    wf_nesting: int = 0


DEFAULT_BOUNDS = Bounds()


def _lists(elems, max_len):
    for n in range(max_len + 1):
        for combo in itertools.product(elems, repeat=n):
            yield List(tuple(combo))


def _writer_fns(domains, bounds, nesting):
    lists = list(_lists(domains.atoms("Wr"), bounds.max_list_len))
    yield WF_ID
    yield WF_SELF_APPEND
    for ctor in (WfConst, WfPrepend, WfAppend):
        for xs in lists:
            yield ctor(xs)
    if nesting > 0:
        inner = list(_writer_fns(domains, bounds, nesting - 1))
        for f, g in itertools.product(inner, repeat=2):
            yield WfCompose(f, g)


def enumerate_carrier(t: Type, domains: Domains, bounds: Bounds = DEFAULT_BOUNDS) -> Iterator:
    """Every value of ``t`` within ``bounds``, each exactly once."""
    match t:
        case UnitT():
            yield UNIT
        case BoolT():
            yield FALSE
            yield TRUE
        case NatT():
            for n in range(bounds.max_nat + 1):
                yield Nat(n)
        case CarrierT(name):
            yield from domains.atoms(name)
        case ListT(e):
            yield from _lists(list(enumerate_carrier(e, domains, bounds)), bounds.max_list_len)
        case MaybeT(e):
            yield NOTHING
            for v in enumerate_carrier(e, domains, bounds):
                yield Just(v)
        case EitherT(a, b):
            for v in enumerate_carrier(a, domains, bounds):
                yield Left(v)
            for v in enumerate_carrier(b, domains, bounds):
                yield Right(v)
        case PairT(a, b):
            snds = list(enumerate_carrier(b, domains, bounds))
            for x in enumerate_carrier(a, domains, bounds):
                for y in snds:
                    yield Pair(x, y)
        case WriterFnT():
            yield from _writer_fns(domains, bounds, bounds.wf_nesting)
        case FnT(dom, cod):
            yield from enumerate_fn_tables(dom, cod, domains, bounds)
        case _:
            raise EnumerationError(f"type {t} is not enumerable")


def carrier_size(t: Type, domains: Domains, bounds: Bounds = DEFAULT_BOUNDS) -> int:
    """Closed-form cardinality matching :func:`enumerate_carrier`."""
    match t:
        case UnitT():
            return 1
        case BoolT():
            return 2
        case NatT():
            return bounds.max_nat + 1
        case CarrierT(name):
            return len(domains.atoms(name))
        case ListT(e):
            k = carrier_size(e, domains, bounds)
            return sum(k ** n for n in range(bounds.max_list_len + 1))
        case MaybeT(e):
            return 1 + carrier_size(e, domains, bounds)
        case EitherT(a, b):
            return carrier_size(a, domains, bounds) + carrier_size(b, domains, bounds)
        case PairT(a, b):
            return carrier_size(a, domains, bounds) * carrier_size(b, domains, bounds)
        case WriterFnT():
            n = 2 + 3 * carrier_size(WR_LIST, domains, bounds)
            for _ in range(bounds.wf_nesting):
                n = 2 + 3 * carrier_size(WR_LIST, domains, bounds) + n * n
            return n
        case FnT(dom, cod):
            return carrier_size(cod, domains, bounds) ** carrier_size(dom, domains, bounds)
    raise EnumerationError(f"type {t} is not enumerable")


def enumerate_fn_tables(dom: Type, cod: Type, domains: Domains,
                        bounds: Bounds = DEFAULT_BOUNDS) -> Iterator[FnTable]:
    if isinstance(dom, (FnT, WriterFnT)) or isinstance(cod, FnT):
        raise EnumerationError(f"cannot tabulate {render_type(FnT(dom, cod))}")
    keys = list(enumerate_carrier(dom, domains, bounds))
    outs = list(enumerate_carrier(cod, domains, bounds))
    for choice in itertools.product(outs, repeat=len(keys)):
        yield FnTable(dom, cod, tuple(zip(keys, choice)))


def contains_writer_fn(t: Type) -> bool:
    match t:
        case WriterFnT():
            return True
        case ListT(e) | MaybeT(e):
            return contains_writer_fn(e)
        case PairT(a, b) | EitherT(a, b) | FnT(a, b):
            return contains_writer_fn(a) or contains_writer_fn(b)
    return False
