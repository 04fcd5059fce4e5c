from pathlib import Path

import pytest

from wpcheck.carriers import MAYBE_WR, ST, Bounds
from wpcheck.formula import TOP, ForallGuarded, alpha_eq, print_formula, simplify
from wpcheck.frontend.compiler import compile_unit
from wpcheck.frontend.notation import parse_spec
from wpcheck.frontend.sexpr import FrontendError, SList, pretty, read_all
from wpcheck.frontend.syntax import PReturn, parse_unit, print_unit
from wpcheck.frontend.typing import TypeCheckError
from wpcheck.program import run, wp_formula
from wpcheck.rws import RwsInput, RwsOutput
from wpcheck.values import NIL, NOTHING, UNIT, Atom, FnTable, Just

GOLDEN = Path(__file__).parent / "golden"
s0, s1 = Atom("St", "s0"), Atom("St", "s1")
e0, w0 = Atom("Ev", "e0"), Atom("Wr", "w0")


def test_return_unit_unit():
    u = parse_unit("(return unit)")
    assert isinstance(u.program, PReturn)
    c = compile_unit(u)
    for i in c.theory.inputs(c.domains):
        assert run(c.program(), c.theory, i) == RwsOutput(UNIT, i.state, NIL)


@pytest.mark.parametrize("text, message", [
    ("(bind (gets (lambda (s) s))", "unbalanced parenthesis at 1:27"),
    ("(return unit))", "unexpected ')' at 1:14"),
    ("(frobnicate)", "unknown form 'frobnicate' at 1:1"),
    ("(tell)", "at 1:1"),
    ("(domain St (s0))\n(param g (fn Wr St))\n(return unit)", "carrier Wr is not declared at 2:14"),
    ("(return y)", "unbound variable 'y'"),
])
def test_parse_errors(text, message):
    with pytest.raises(FrontendError) as err:
        compile_unit(parse_unit(text))
    assert message in str(err.value)


def test_type_errors():
    with pytest.raises(TypeCheckError, match="type mismatch"):
        compile_unit(parse_unit("(domain St (s0)) (puts (lambda (s) unit))"))
    with pytest.raises(TypeCheckError, match="spec Bad"):
        compile_unit(parse_unit("(domain St (s0)) (return unit) (spec Bad (eq result s0))"))


def test_error_location_is_reported():
    with pytest.raises(FrontendError) as err:
        parse_unit("(domain St (s0))\n(program\n  (bind (ask) (x) (wobble)))")
    assert (err.value.line, err.value.col) == (3, 19)


def test_shipped_source_compiles_and_checks(intro):
    from wpcheck.checker import check_equivalence
    r = check_equivalence(intro.subject(), intro.theory, intro.spec("ProgPost"), intro.domains)
    assert r.passed and r.inputs_checked == 192


def test_symbolic_compile_gives_guarded_top(intro):
    f = wp_formula(intro.program(), intro.theory, intro.spec("ProgPost"), 0, {"g"})
    assert isinstance(f, ForallGuarded) and f.ty == MAYBE_WR


def test_compile_with_table(intro_small):
    g = FnTable(ST, MAYBE_WR, ((s0, Just(w0)), (s1, NOTHING)))
    prog = intro_small.program({"g": g})
    assert run(prog, intro_small.theory, RwsInput(e0, s1)) == RwsOutput(UNIT, s1, NIL)


def test_round_trip_shipped_source(intro_source):
    once = print_unit(parse_unit(intro_source))
    assert print_unit(parse_unit(once)) == once
    assert parse_unit(once) == parse_unit(intro_source)


def test_empty_and_is_top():
    u = parse_unit("(return unit) (spec T (and))")
    assert u.spec("T") == TOP
    assert "(spec T top)" in print_unit(u)


def test_nested_binds_golden():
    text = (GOLDEN / "nested_binds.east").read_text(encoding="utf-8")
    assert print_unit(parse_unit(text)) == text


def test_reader_positions_and_comments():
    forms = read_all("; note\n(a (b c))\n")
    assert isinstance(forms[0], SList) and (forms[0].line, forms[0].col) == (2, 1)
    assert pretty(forms[0]) == "(a (b c))"


def test_intro_obligation_golden(intro):
    golden = parse_spec((GOLDEN / "intro_obligation.txt").read_text(encoding="utf-8"), intro.domains)
    f = simplify(wp_formula(intro.program(), intro.theory, intro.spec("ProgPost"), 0, {"g"}))
    assert alpha_eq(f, golden)


def test_obligation_seeds_alpha_equal(intro):
    a = wp_formula(intro.program(), intro.theory, intro.spec("ProgPost"), 0, {"g"})
    b = wp_formula(intro.program(), intro.theory, intro.spec("ProgPost"), 5, {"g"})
    assert a != b and alpha_eq(a, b)


def test_notation_parses_printer_output(intro):
    f = wp_formula(intro.program(), intro.theory, intro.spec("ProgPost"), 0, {"g"})
    assert alpha_eq(parse_spec(print_formula(f), intro.domains), f)


def test_notation_errors():
    with pytest.raises(FrontendError):
        parse_spec("0 ≡")
    with pytest.raises(FrontendError):
        parse_spec("(r : Maybe Wr) → r ≡ r → ⊤")


def test_corpus_round_trip_sample():
    from wpcheck.corpus import generate_units
    for u in generate_units(50, 4, 11):
        text = print_unit(u)
        assert parse_unit(text) == u
        assert print_unit(parse_unit(text)) == text


def test_forall_over_bounded_list():
    u = parse_unit("(domain Wr (w0)) (tell (list w0)) "
                   "(spec S (forall (xs (list Wr)) (implies (eq xs output) (eq 1 (length xs)))))")
    c = compile_unit(u)
    from wpcheck.checker import check_equivalence
    assert check_equivalence(c.subject(), c.theory, c.spec("S"), c.domains,
                             bounds=Bounds(max_list_len=2)).passed
