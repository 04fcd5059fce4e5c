import json

import pytest

from wpcheck.carriers import Bounds, ST, UNIT_T
from wpcheck.checker import (
    NotOrdered, PostPair, check_equivalence, check_monotonicity, check_necessity,
    check_sufficiency, entailment_witness, entails, param_space, simplifier_mismatches,
    weakenings,
)
from wpcheck.corpus import generate_program_corpus, generate_units
from wpcheck.fixtures import fixtures, run_fixture
from wpcheck.formula import TOP, And, Eq
from wpcheck.frontend.compiler import compile_unit
from wpcheck.program import wp_formula
from wpcheck.rws import RwsOutput, RwsTheory, ret, tell
from wpcheck.branching import ExtendedTheory
from wpcheck.values import NIL, UNIT, Atom, List, Nat, Neutral, Sym

from conftest import small_domains

RWS = RwsTheory()
EXT = ExtendedTheory(RWS)
D = small_domains()
s0, s1 = Atom("St", "s0"), Atom("St", "s1")
w0 = Atom("Wr", "w0")
NO_OUTPUT = Eq(Nat(0), Neutral("length", (Sym("output"),)))
AT_S0 = Eq(Sym("post-state"), s0)


def test_entails_examples():
    assert entails(And((NO_OUTPUT, AT_S0)), NO_OUTPUT, RWS, UNIT_T, D)
    assert entails(NO_OUTPUT, NO_OUTPUT, RWS, UNIT_T, D)
    w = entailment_witness(NO_OUTPUT, AT_S0, RWS, UNIT_T, D)
    assert w == {"result": UNIT, "post-state": s1, "output": NIL}


def test_sufficiency_paper_intro(intro_small):
    r = check_sufficiency(intro_small.subject(), intro_small.theory, intro_small.spec("ProgPost"), intro_small.domains)
    assert r.passed and r.inputs_checked == 8 and r.params_checked == 4


def test_necessity_examples(intro_small):
    assert check_necessity(intro_small.subject(), intro_small.theory, intro_small.spec("ProgPost"), intro_small.domains).passed
    assert check_necessity(tell(List((w0,))), RWS, NO_OUTPUT, D).passed
    assert check_necessity(ret(UNIT, UNIT_T), RWS, TOP, D).passed
    assert check_sufficiency(ret(UNIT, UNIT_T), RWS, TOP, D).passed


def test_monotonicity_examples(intro_small):
    prog_post = intro_small.spec("ProgPost")
    stronger = And((prog_post, Eq(Sym("result"), UNIT)))
    assert check_monotonicity(intro_small.subject(), intro_small.theory, PostPair(stronger, prog_post),
                              intro_small.domains).passed
    assert check_monotonicity(intro_small.subject(), intro_small.theory, PostPair(prog_post, prog_post),
                              intro_small.domains).passed
    with pytest.raises(NotOrdered, match="pair not ⊆ₒ-ordered"):
        check_monotonicity(intro_small.subject(), intro_small.theory, PostPair(NO_OUTPUT, AT_S0), intro_small.domains)


def test_weakenings():
    p = And((NO_OUTPUT, AT_S0, TOP))
    assert [w.weaker for w in weakenings(p)] == [And((AT_S0, TOP)), And((NO_OUTPUT, TOP)),
                                                 And((NO_OUTPUT, AT_S0))]
    assert weakenings(NO_OUTPUT) == [PostPair(NO_OUTPUT, NO_OUTPUT)]


def test_param_space_counts(intro_small):
    assert len(param_space(intro_small.param_types, intro_small.domains)) == 4
    big = small_domains(st=("s0", "s1", "s2"), wr=("w0", "w1", "w2"))
    assert len(param_space(intro_small.param_types, big)) == 64


def test_fixed_params_narrow_space(intro_small):
    table = param_space(intro_small.param_types, intro_small.domains)[2]
    r = check_equivalence(intro_small.subject(), intro_small.theory, intro_small.spec("ProgPost"), intro_small.domains,
                          params=table)
    assert r.params_checked == 1 and r.inputs_checked == 2


@pytest.mark.parametrize("fx", fixtures(), ids=lambda f: f.name)
def test_fixtures_fail(fx):
    r = run_fixture(fx)
    assert r.verdict == "fail" and r.counterexamples


def test_fixture_witnesses_pass_under_correct_theory():
    from wpcheck.checker import check_extension
    from wpcheck.frontend.syntax import parse_unit
    for fx in fixtures():
        c = compile_unit(parse_unit(fx.source))
        assert check_extension(c.subject(), c.theory, c.spec(fx.spec), c.domains).passed


def test_jobs_give_identical_reports():
    from wpcheck.fixtures import SwappedIfTheory
    from wpcheck.frontend.syntax import parse_unit
    src = """(domain St (s0 s1 s2)) (domain Ev (e0 e1)) (domain Wr (w0 w1))
(param h (fn St Bool))
(program (bind (gets (lambda (s) (apply h s))) (b) (if b (tell (list w0)) (return unit))))
(spec Silent (eq 0 (length output)))"""
    c = compile_unit(parse_unit(src))
    bad = SwappedIfTheory(RWS)
    a = check_sufficiency(c.subject(), bad, c.spec("Silent"), c.domains, jobs=1)
    b = check_sufficiency(c.subject(), bad, c.spec("Silent"), c.domains, jobs=4)
    assert a.counterexamples and a.inputs_checked == 8 * 6
    assert a.dumps(timing=False) == b.dumps(timing=False)
    assert [x.index for x in b.counterexamples] == sorted(x.index for x in b.counterexamples)


def test_report_json_fields(intro_small):
    r = check_equivalence(intro_small.subject(), intro_small.theory, intro_small.spec("ProgPost"), intro_small.domains)
    assert list(json.loads(r.dumps())) == ["mode", "verdict", "inputs_checked", "params_checked",
                                           "counterexamples", "elapsed_ms"]
    assert r.to_json(timing=False)["elapsed_ms"] == 0


def test_report_verdict_matches_counterexamples():
    r = check_sufficiency(ret(s1, ST), RWS, Eq(Sym("result"), s0), D)
    assert r.passed
    fx = run_fixture(fixtures()[0])
    assert (fx.verdict == "fail") == bool(fx.counterexamples)
    assert "input (e0 , s0)" in fx.render()


def test_simplifier_mismatches_empty(intro_small):
    f = wp_formula(intro_small.program(), intro_small.theory, intro_small.spec("ProgPost"), 0, {"g"})
    simple, count, bad = simplifier_mismatches(f, intro_small.theory, intro_small.domains, intro_small.param_types)
    assert count == 8 and not bad


def test_corpus_is_deterministic():
    from wpcheck.frontend.syntax import print_unit
    a = [print_unit(u) for u in generate_units(30, 3, 7)]
    b = [print_unit(u) for u in generate_units(30, 3, 7)]
    assert a == b
    assert a != [print_unit(u) for u in generate_units(30, 3, 8)]


def test_corpus_depth_one_covers_leaves():
    from wpcheck.frontend.syntax import PAsk, PGets, PPuts, PReturn, PTell
    kinds = {type(u.program) for u in generate_units(300, 1, 0)}
    assert kinds == {PReturn, PGets, PPuts, PTell, PAsk}


def test_corpus_programs_compile():
    progs = list(generate_program_corpus(4, 3, count=20))
    assert len(progs) == 20


def test_output_bound_honored():
    r = check_equivalence(tell(List((w0,) * 3)), RWS, NO_OUTPUT, D, bounds=Bounds(max_list_len=2))
    assert r.passed
    assert RwsOutput(UNIT, s0, NIL) in list(RWS.outputs(UNIT_T, D, Bounds(max_list_len=0)))


def test_corpus_verdicts_are_mixed():
    from wpcheck.formula import eval_formula
    from wpcheck.program import run
    seen = set()
    for u in generate_units(100, 5, 7):
        c = compile_unit(u)
        prog = c.program()
        for i in c.theory.inputs(c.domains):
            out = run(prog, c.theory, i)
            b = {**c.theory.input_binding(i), **c.theory.output_binding(out)}
            for _, spec in u.specs:
                seen.add(eval_formula(spec, b, c.domains))
    assert seen == {True, False}
