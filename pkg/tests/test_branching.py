import itertools

import pytest

from wpcheck.branching import (
    BCif, ExtendedTheory, check_extension_agreement, either_, if_, maybe_, run_extended,
    run_unextended, select, unextend,
)
from wpcheck.carriers import MAYBE_WR, ST, UNIT_T, WR, enumerate_fn_tables
from wpcheck.formula import And, Eq, ForallGuarded, Implies, eval_formula
from wpcheck.program import Return, run, wp_formula
from wpcheck.rws import RwsInput, RwsTheory, bind, build_paper_intro_prog, gets, ret, tell
from wpcheck.values import (
    FALSE, NOTHING, TRUE, UNIT, Atom, Just, Left, List, Nat, Neutral, Right, Sym,
    SymbolicValueError,
)

from conftest import small_domains

RWS = RwsTheory()
EXT = ExtendedTheory(RWS)
D = small_domains()
s0, s1 = Atom("St", "s0"), Atom("St", "s1")
w0 = Atom("Wr", "w0")
e0 = Atom("Ev", "e0")
RES = Sym("result")
NO_OUTPUT = Eq(Nat(0), Neutral("length", (Sym("output"),)))


def emit(w):
    return tell(List((w,)))


def binding(i):
    return {"pre-env": i.env, "pre-state": i.state}


def test_descriptors_merge_base():
    assert set(RWS.descriptors) < set(EXT.descriptors)
    assert all(EXT.run_rules[c] == RWS.run_rules[c] for c in RWS.descriptors)


def test_unextend_return_is_identity():
    m = Return(UNIT, UNIT_T)
    assert unextend(m) is m


def test_unextend_if_selects_branch():
    m = if_(TRUE, emit(w0), ret(UNIT, UNIT_T), UNIT_T)
    i = RwsInput(e0, s0)
    assert run(unextend(m), RWS, i) == run(emit(w0), RWS, i)
    assert run(unextend(if_(FALSE, emit(w0), ret(UNIT, UNIT_T), UNIT_T)), RWS, i).output == List(())


def test_unextend_is_lazy_and_fails_on_symbolic_scrutinee():
    m = bind(gets(lambda s: Sym("c"), ST), lambda c: if_(c, emit(w0), ret(UNIT, UNIT_T), UNIT_T),
             UNIT_T)
    erased = unextend(m)
    with pytest.raises(SymbolicValueError):
        run(erased, RWS, RwsInput(e0, s0))
    with pytest.raises(SymbolicValueError):
        select(BCif(Sym("c")))


def test_run_branch_selection():
    i = RwsInput(e0, s0)
    m = maybe_(Just(w0), WR, lambda w: emit(w), ret(UNIT, UNIT_T), UNIT_T)
    assert run(m, EXT, i).output == List((w0,))
    e = either_(Left(s1), ST, WR, lambda s: ret(s, ST), lambda w: ret(s0, ST), ST)
    assert run(e, EXT, i).result == s1
    assert run(either_(Right(w0), ST, WR, lambda s: ret(s, ST), lambda w: ret(s0, ST), ST), EXT,
               i).result == s0


def test_paper_intro_unextend_agrees():
    for g in enumerate_fn_tables(ST, MAYBE_WR, D):
        prog = build_paper_intro_prog(g)
        for i in EXT.inputs(D):
            assert run_extended(prog, EXT, i) == run_unextended(prog, EXT, i)


def test_wp_if_with_literal_scrutinee():
    m = if_(TRUE, ret(s1, ST), ret(s0, ST), ST)
    f = wp_formula(m, EXT, Eq(RES, s1))
    assert isinstance(f, And) and all(isinstance(p, Implies) for p in f.parts)
    for i in EXT.inputs(D):
        assert eval_formula(f, binding(i), D)
    assert not eval_formula(wp_formula(m, EXT, Eq(RES, s0)), binding(RwsInput(e0, s0)), D)


def test_wp_maybe_top_shape():
    prog = build_paper_intro_prog(Sym("g"))
    f = wp_formula(prog, EXT, NO_OUTPUT, reserved={"g"})
    assert isinstance(f, ForallGuarded) and f.ty == MAYBE_WR
    assert f.guard == Eq(Sym("r"), Neutral("apply", (Sym("g"), Sym("pre-state"))))
    just, nothing = f.body.parts
    assert isinstance(just, ForallGuarded) and just.guard == Eq(Sym("r"), Just(Sym("j")))
    assert nothing.hyp == Eq(Sym("r"), NOTHING)


def test_wp_either_concrete_left():
    m = either_(Left(s1), ST, WR, lambda s: ret(s, ST), lambda w: ret(s0, ST), ST)
    for target, expected in ((s1, True), (s0, False)):
        f = wp_formula(m, EXT, Eq(RES, target))
        assert eval_formula(f, binding(RwsInput(e0, s0)), D) is expected


def test_check_extension_paper_intro(intro_small):
    c = intro_small
    r = check_extension_agreement(c.subject(), c.theory, c.spec("ProgPost"), c.domains)
    assert r.passed and r.inputs_checked == 8 and r.params_checked == 4


def test_check_extension_branch_free():
    m = bind(emit(w0), lambda _: ret(UNIT, UNIT_T), UNIT_T)
    assert check_extension_agreement(m, EXT, NO_OUTPUT, D).passed


def test_embedding_neutrality():
    progs = [emit(w0), bind(gets(lambda s: s, ST), lambda s: ret(s, ST), ST)]
    posts = [NO_OUTPUT, Eq(RES, s0), Eq(Sym("post-state"), Sym("pre-state"))]
    for m, p, i in itertools.product(progs, posts, EXT.inputs(D)):
        assert run(m, EXT, i) == run(m, RWS, i)
        a = eval_formula(wp_formula(m, EXT, p), binding(i), D)
        assert a == eval_formula(wp_formula(m, RWS, p), binding(i), D)
