import itertools

import pytest
from hypothesis import given, strategies as st

from wpcheck.carriers import (
    BOOL_T, MAYBE_WR, ST, WR, WR_LIST, Bounds, EitherT, EnumerationError, FnT, ListT,
    PairT, WRITER_FN_T, carrier_size, enumerate_carrier, enumerate_fn_tables,
)
from wpcheck.values import (
    FALSE, NIL, NOTHING, TRUE, WF_ID, WF_SELF_APPEND, Atom, Call, Just, List,
    Lit, Nat, Neutral, Sym, SymbolicValueError, TypeMismatch, UnboundVariable, Var,
    WfAppend, WfCompose, WfConst, WfPrepend, apply_writer_fn, eval_expr, is_concrete,
    prim, resolve,
)

from conftest import small_domains

w0, w1 = Atom("Wr", "w0"), Atom("Wr", "w1")
s0, s1 = Atom("St", "s0"), Atom("St", "s1")


def L(*xs):
    return List(tuple(xs))


def test_length_and_append():
    assert eval_expr(Call("length", (Lit(L(w0, w0)),)), {}) == Nat(2)
    assert eval_expr(Call("append", (Lit(L(w0)), Lit(L(w1)))), {}) == L(w0, w1)


def test_apply_symbolic_parameter_is_neutral():
    got = eval_expr(Call("apply", (Var("g"), Var("s"))), {"g": Sym("g"), "s": s0})
    assert got == Neutral("apply", (Sym("g"), s0))


def test_eval_errors():
    with pytest.raises(UnboundVariable):
        eval_expr(Var("x"), {})
    with pytest.raises(TypeMismatch):
        prim("length", [s0])
    with pytest.raises(SymbolicValueError):
        resolve(Neutral("apply", (Sym("g"), Sym("s"))), {"s": s0, "g": Sym("g")})


@pytest.mark.parametrize("wf, xs, expected", [
    (WF_SELF_APPEND, L(w0), L(w0, w0)),
    (WfConst(NIL), L(w0, w1), NIL),
    (WF_ID, NIL, NIL),
    (WfPrepend(L(w1)), L(w0), L(w1, w0)),
    (WfAppend(L(w1)), L(w0), L(w0, w1)),
    (WfCompose(WfAppend(L(w1)), WF_SELF_APPEND), L(w0), L(w0, w0, w1)),
])
def test_apply_writer_fn(wf, xs, expected):
    assert apply_writer_fn(wf, xs) == expected


doms = small_domains(wr=("w0", "w1"))
wf_values = list(enumerate_carrier(WRITER_FN_T, doms, Bounds(max_list_len=2, wf_nesting=1)))
lists = list(enumerate_carrier(WR_LIST, doms, Bounds(max_list_len=3)))


@given(st.sampled_from(wf_values), st.sampled_from(lists))
def test_compose_with_id_is_neutral(f, xs):
    assert apply_writer_fn(WfCompose(f, WF_ID), xs) == apply_writer_fn(f, xs)
    assert apply_writer_fn(WfCompose(WF_ID, f), xs) == apply_writer_fn(f, xs)


def test_enumerate_examples():
    one = small_domains(wr=("w0",))
    assert list(enumerate_carrier(MAYBE_WR, one)) == [NOTHING, Just(w0)]
    assert list(enumerate_carrier(BOOL_T, one)) == [FALSE, TRUE]
    assert list(enumerate_carrier(WR_LIST, one, Bounds(max_list_len=2))) == [NIL, L(w0), L(w0, w0)]


@pytest.mark.parametrize("ty", [
    MAYBE_WR, WR_LIST, PairT(ST, MAYBE_WR), EitherT(WR, ST), ListT(BOOL_T),
    PairT(BOOL_T, EitherT(ST, MAYBE_WR)), WRITER_FN_T,
])
def test_enumeration_distinct_and_sized(ty):
    d, b = small_domains(wr=("w0", "w1")), Bounds(max_list_len=2)
    vals = list(enumerate_carrier(ty, d, b))
    assert len(vals) == len(set(vals)) == carrier_size(ty, d, b)


def test_enumeration_is_deterministic():
    d = small_domains(wr=("w0", "w1"))
    assert list(enumerate_carrier(WR_LIST, d)) == list(enumerate_carrier(WR_LIST, d))


def _brute_force_tables(keys, outs):
    # independent oracle: every assignment built by recursion, not product
    if not keys:
        return [{}]
    rest = _brute_force_tables(keys[1:], outs)
    return [{keys[0]: o, **r} for o in outs for r in rest]


@pytest.mark.parametrize("st_atoms, wr_atoms, count", [
    (("s0", "s1"), ("w0",), 4),
    (("s0", "s1", "s2"), ("w0", "w1", "w2"), 64),
])
def test_fn_table_counts(st_atoms, wr_atoms, count):
    d = small_domains(st=st_atoms, wr=wr_atoms)
    tables = list(enumerate_fn_tables(ST, MAYBE_WR, d))
    keys = list(enumerate_carrier(ST, d))
    oracle = _brute_force_tables(keys, list(enumerate_carrier(MAYBE_WR, d)))
    assert len(tables) == len(oracle) == count
    assert {tuple(t.entries) for t in tables} == {tuple((k, o[k]) for k in keys) for o in oracle}


def test_fn_table_bool():
    assert len(list(enumerate_fn_tables(ST, BOOL_T, small_domains(st=("s0",))))) == 2


def test_non_enumerable():
    with pytest.raises(EnumerationError):
        list(enumerate_fn_tables(FnT(ST, ST), ST, small_domains()))
    with pytest.raises(EnumerationError):
        list(enumerate_carrier(WR, small_domains().__class__()))


def test_concrete_evaluation_is_concrete_and_deterministic():
    env = {"x": L(w0), "y": s1}
    exprs = [Call("append", (Var("x"), Var("x"))), Call("eq", (Var("y"), Lit(s0))),
             Call("if", (Call("eq", (Var("y"), Lit(s1))), Lit(Just(w0)), Lit(NOTHING))),
             Call("fst", (Call("pair", (Var("y"), Var("x"))),))]
    for e, _ in itertools.product(exprs, range(2)):
        v = eval_expr(e, env)
        assert is_concrete(v)
        assert v == eval_expr(e, env)
