"""Deliberately wrong theories, used to show the checker can fail.

Each fixture pairs a corrupted theory with a witness source on which the
corruption is observable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .branching import ExtendedTheory
from .formula import And, Eq, Implies
from .rws import RwsOutput, RwsTheory
from .values import FALSE, NIL, TRUE, Sym

BAD_GETS_SOURCE = """\
(domain St (s0 s1))
(domain Ev (e0))
(domain Wr (w0))
(program (bind (puts (lambda (s) s1)) (_) (gets (lambda (s) s))))
(spec Unchanged (eq post-state pre-state))
"""

SWAPPED_IF_SOURCE = """\
(domain St (s0 s1))
(domain Ev (e0))
(domain Wr (w0))
(program
  (bind (gets (lambda (s) (eq s s0))) (b) (if b (tell (list w0)) (return unit))))
(spec Silent (eq 0 (length output)))
"""


class BadGetsTheory(RwsTheory):
    """``gets`` reports the initial state instead of the current one."""

    name = "rws-bad-gets"

    def wp_gets(self, cmd, sub_wp, post, ctx, fresh):
        return post(RwsOutput(cmd.fn(ctx.state), Sym("pre-state"), NIL))


class SwappedIfTheory(ExtendedTheory):
    """``if`` pairs each guard with the other branch."""

    def wp_if(self, cmd, sub_wp, post, ctx, fresh):
        c = cmd.scrutinee
        return And((Implies(Eq(c, TRUE), sub_wp(FALSE, post, ctx)),
                    Implies(Eq(c, FALSE), sub_wp(TRUE, post, ctx))))


@dataclass
class Fixture:
    name: str
    source: str
    spec: str
    theory: object
    mode: str


def fixtures() -> list:
    return [
        Fixture("bad-gets", BAD_GETS_SOURCE, "Unchanged", ExtendedTheory(BadGetsTheory()),
                "sufficiency"),
        Fixture("swapped-if", SWAPPED_IF_SOURCE, "Silent", SwappedIfTheory(RwsTheory()),
                "extension"),
    ]


def run_fixture(fx: Fixture):
    """Check the witness under the corrupted theory; a sound checker reports fail."""
    from .checker import check_extension, check_sufficiency
    from .frontend.compiler import compile_unit
    from .frontend.syntax import parse_unit
    compiled = compile_unit(parse_unit(fx.source))
    check = check_extension if fx.mode == "extension" else check_sufficiency
    return check(compiled.subject(), fx.theory, compiled.spec(fx.spec), compiled.domains)
