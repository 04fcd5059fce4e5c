import pytest

from wpcheck.branching import ExtendedTheory, maybe_
from wpcheck.carriers import MAYBE_WR, PAIR_UNIT_WF, ST, UNIT_T, WR, PairT, WRITER_FN_T
from wpcheck.formula import (
    TOP, Eq, ForallGuarded, eval_formula, free_vars, simplify, subst,
)
from wpcheck.program import (
    CommandDescriptor, EffectTheory, Fresh, MalformedTheory, ProgramError, is_branch_free,
    run, wp_formula,
)
from wpcheck.rws import (
    RwsInput, RwsOutput, RwsTheory, Tell, ask, bind, build_paper_intro_prog, gets, local,
    pass_, puts, ret, rws_bind_post, rws_pass_post, tell,
)
from wpcheck.values import (
    NIL, NOTHING, UNIT, WF_ID, WF_SELF_APPEND, Atom, FnTable, Just, List, Nat, Neutral,
    Pair, Sym, WfConst, prim,
)

from conftest import small_domains

RWS = RwsTheory()
EXT = ExtendedTheory(RWS)
s0, s1 = Atom("St", "s0"), Atom("St", "s1")
e0, e1 = Atom("Ev", "e0"), Atom("Ev", "e1")
w0, w1 = Atom("Wr", "w0"), Atom("Wr", "w1")
I0 = RwsInput(e0, s0)
NO_OUTPUT = Eq(Nat(0), Neutral("length", (Sym("output"),)))
OUT, RES, POST_ST = Sym("output"), Sym("result"), Sym("post-state")


def L(*xs):
    return List(tuple(xs))


def table(**entries):
    return FnTable(ST, MAYBE_WR, tuple((Atom("St", k), v) for k, v in entries.items()))


def holds(f, i, out=None, params=None):
    b = {"pre-env": i.env, "pre-state": i.state, **(params or {})}
    if out is not None:
        b.update(result=out.result, **{"post-state": out.state, "output": out.output})
    return eval_formula(f, b, small_domains(ev=("e0", "e1"), wr=("w0", "w1")))


def test_run_return():
    assert run(ret(UNIT, UNIT_T), RWS, I0) == RwsOutput(UNIT, s0, NIL)


def test_run_bind_concatenates_output():
    m = bind(tell(L(w0)), lambda _: tell(L(w0)), UNIT_T)
    assert run(m, RWS, I0) == RwsOutput(UNIT, s0, L(w0, w0))


def test_run_commands():
    assert run(tell(L(w0)), RWS, I0) == RwsOutput(UNIT, s0, L(w0))
    assert run(puts(lambda s: s1), RWS, I0) == RwsOutput(UNIT, s1, NIL)
    assert run(ask(), RWS, I0) == RwsOutput(e0, s0, NIL)
    assert run(local(lambda e: e1, ask()), RWS, I0) == RwsOutput(e1, s0, NIL)
    assert run(gets(lambda s: s, ST), RWS, RwsInput(e0, s1)) == RwsOutput(s1, s1, NIL)


def test_run_pass():
    x = Atom("St", "s1")
    assert run(pass_(ret(Pair(x, WF_SELF_APPEND), PairT(ST, WRITER_FN_T)), ST), RWS, I0) == \
        RwsOutput(x, s0, NIL)
    erase = bind(tell(L(w0)), lambda _: ret(Pair(UNIT, WfConst(NIL)), PAIR_UNIT_WF), PAIR_UNIT_WF)
    assert run(pass_(erase, UNIT_T), RWS, I0) == RwsOutput(UNIT, s0, NIL)
    double = bind(tell(L(w0)), lambda _: ret(Pair(UNIT, WF_SELF_APPEND), PAIR_UNIT_WF),
                  PAIR_UNIT_WF)
    assert run(pass_(double, UNIT_T), RWS, I0) == RwsOutput(UNIT, s0, L(w0, w0))


def test_run_pass_rejects_bad_body():
    with pytest.raises(ProgramError):
        run(pass_(ret(UNIT, UNIT_T), UNIT_T), RWS, I0)


@pytest.mark.parametrize("g", [table(s0=Just(w0), s1=NOTHING), table(s0=NOTHING, s1=NOTHING)])
def test_run_paper_intro(g):
    prog = build_paper_intro_prog(g)
    assert run(prog, EXT, I0) == RwsOutput(UNIT, s0, NIL)
    assert run(prog, EXT, RwsInput(e0, s1)) == RwsOutput(UNIT, s1, NIL)


def test_wp_return_substitutes_outputs():
    spec = Eq(RES, POST_ST)
    got = wp_formula(ret(s1, ST), RWS, spec)
    assert got == subst(spec, {"result": s1, "post-state": Sym("pre-state"), "output": NIL})


def test_wp_gets():
    got = wp_formula(gets(lambda s: prim("apply", [Sym("g"), s]), MAYBE_WR), RWS,
                     Eq(RES, Just(w0)), reserved={"g"})
    assert got == Eq(Neutral("apply", (Sym("g"), Sym("pre-state"))), Just(w0))
    assert wp_formula(gets(lambda s: s, ST), RWS, Eq(POST_ST, s0)) == Eq(Sym("pre-state"), s0)


def test_wp_bind_aliases_result():
    m = bind(gets(lambda s: s, ST), lambda x: ret(x, ST), ST)
    f = wp_formula(m, RWS, Eq(RES, s0))
    assert isinstance(f, ForallGuarded) and f.var == "r" and f.guard == Eq(Sym("r"), Sym("pre-state"))
    assert holds(f, I0) and not holds(f, RwsInput(e0, s1))


def test_wp_pass_guards_rewritten_output():
    body = ret(Pair(UNIT, WfConst(NIL)), PAIR_UNIT_WF)
    f = wp_formula(pass_(body, UNIT_T), RWS, NO_OUTPUT)
    assert isinstance(f, ForallGuarded) and f.var == "o'"
    assert simplify(f.guard) == Eq(Sym("o'"), NIL)
    assert f.body == Eq(Nat(0), Neutral("length", (Sym("o'"),)))


def test_wp_tell_is_false():
    f = wp_formula(tell(L(w0)), RWS, NO_OUTPUT)
    assert not holds(f, I0)


def test_wp_puts_ask_local():
    assert wp_formula(puts(lambda s: s1), RWS, Eq(POST_ST, s1)) == Eq(s1, s1)
    assert wp_formula(ask(), RWS, Eq(RES, e0)) == Eq(Sym("pre-env"), e0)
    assert wp_formula(local(lambda e: e1, ask()), RWS, Eq(RES, e1)) == Eq(e1, e1)


def test_bind_post():
    f = rws_bind_post(L(w0), NO_OUTPUT)
    assert not holds(f, I0, RwsOutput(UNIT, s0, L(w1)))
    g = rws_bind_post(L(w0), Eq(OUT, L(w0)))
    assert holds(g, I0, RwsOutput(UNIT, s0, NIL))
    for out in (NIL, L(w0), L(w1, w0)):
        o = RwsOutput(UNIT, s0, out)
        assert holds(rws_bind_post(NIL, NO_OUTPUT), I0, o) == holds(NO_OUTPUT, I0, o)


@pytest.mark.parametrize("wf, out, seen", [
    (WfConst(NIL), L(w0), NIL),
    (WF_ID, NIL, NIL),
    (WF_SELF_APPEND, L(w0), L(w0, w0)),
])
def test_pass_post(wf, out, seen):
    post = RWS.spec_post(Eq(OUT, seen))
    f = rws_pass_post(post, Fresh())(RwsOutput(Pair(UNIT, wf), s0, out))
    assert holds(f, I0)
    other = RWS.spec_post(Eq(OUT, L(w1)))
    assert not holds(rws_pass_post(other, Fresh())(RwsOutput(Pair(UNIT, wf), s0, out)), I0)


def test_wp_free_variables_are_inputs():
    g = Sym("g")
    f = wp_formula(build_paper_intro_prog(g), EXT, NO_OUTPUT, reserved={"g"})
    assert free_vars(f) <= {"g", "pre-env", "pre-state"}


def test_wp_deterministic():
    a = wp_formula(build_paper_intro_prog(Sym("g")), EXT, NO_OUTPUT, reserved={"g"})
    b = wp_formula(build_paper_intro_prog(Sym("g")), EXT, NO_OUTPUT, reserved={"g"})
    assert a == b


def test_fresh_names():
    f = Fresh(reserved={"r1"})
    assert [f("r"), f("r"), f("r"), f("o"), f("o")] == ["r", "r2", "r3", "o'", "o''"]


def test_is_branch_free():
    ins = RWS.inputs(small_domains())
    assert is_branch_free(ret(UNIT, UNIT_T), EXT, ins)
    assert is_branch_free(bind(tell(L(w0)), lambda _: ret(UNIT, UNIT_T), UNIT_T), EXT, ins)
    g = table(s0=Just(w0), s1=NOTHING)
    assert not is_branch_free(build_paper_intro_prog(g), EXT, ins)


def test_output_concatenation_law():
    d = small_domains(ev=("e0", "e1"), wr=("w0", "w1"))
    firsts = [tell(L(w0)), puts(lambda s: s1), gets(lambda s: s, ST), ask()]
    conts = [lambda x: tell(L(w1)), lambda x: ret(x, ST), lambda x: bind(puts(lambda s: s0),
             lambda _: tell(L(w0, w1)), UNIT_T)]
    for m1 in firsts:
        for k in conts:
            for i in RWS.inputs(d):
                whole = run(bind(m1, k, UNIT_T), RWS, i)
                a = run(m1, RWS, i)
                b = run(k(a.result), RWS, RwsInput(i.env, a.state))
                assert whole.output == prim("append", [a.output, b.output])


def test_malformed_theory():
    class Broken(EffectTheory):
        def command_descriptors(self):
            return {Tell: CommandDescriptor("tell", ("List Wr",), "Void", "Void")}

        def command_run_rules(self):
            return {Tell: lambda *a: None}

    with pytest.raises(MalformedTheory):
        Broken()


def test_maybe_with_concrete_scrutinee_selects_branch():
    m = maybe_(Just(w1), WR, lambda w: ret(w, WR), ret(w0, WR), WR)
    assert run(m, EXT, I0).result == w1
    f = wp_formula(m, EXT, Eq(RES, w1))
    assert holds(f, I0)
    assert wp_formula(ret(UNIT, UNIT_T), RWS, TOP) == TOP
