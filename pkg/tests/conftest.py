import pytest

from wpcheck.carriers import Domains
from wpcheck.frontend.cli import example_source
from wpcheck.frontend.compiler import compile_unit
from wpcheck.frontend.syntax import parse_unit


def small_domains(st=("s0", "s1"), ev=("e0",), wr=("w0",)):
    return Domains.of(St=list(st), Ev=list(ev), Wr=list(wr))


@pytest.fixture
def doms():
    return small_domains()


@pytest.fixture(scope="session")
def intro_source():
    return example_source("paper-intro")


@pytest.fixture(scope="session")
def intro(intro_source):
    return compile_unit(parse_unit(intro_source))


def with_domains(source, st, ev, wr):
    """Replace the domain declarations of a source text."""
    lines = [ln for ln in source.splitlines() if not ln.startswith("(domain ")]
    decls = [f"(domain St ({' '.join(st)}))", f"(domain Ev ({' '.join(ev)}))",
             f"(domain Wr ({' '.join(wr)}))"]
    return "\n".join(decls + lines) + "\n"


@pytest.fixture(scope="session")
def intro_small(intro_source):
    """The example over St={s0,s1}, Ev={e0}, Wr={w0}: 4 tables, 8 cases."""
    return compile_unit(parse_unit(with_domains(intro_source, ("s0", "s1"), ("e0",), ("w0",))))
