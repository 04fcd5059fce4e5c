"""Exhaustive agreement checks between ``wp`` and ``run``.

Every check walks the full space of parameter tables × inputs.  Cases
are independent, so ``jobs > 1`` evaluates them on a thread pool and
merges counterexamples back in enumeration order.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from .branching import ExtendedTheory, unextend
from .carriers import DEFAULT_BOUNDS, Bounds, Domains, Type, enumerate_fn_tables
from .formula import And, Formula, eval_formula, free_vars, simplify
from .program import Program, run, wp_formula
from .values import Sym, render

MODES = ("sufficiency", "necessity", "equivalence", "monotonicity", "extension")


class CheckError(Exception):
    pass


class NotOrdered(CheckError):
    """A monotonicity pair whose first postcondition does not entail the second."""


@dataclass(frozen=True)
class Subject:
    """A program family indexed by its function-typed parameters."""

    build: Callable[[dict], Program]
    param_types: dict = field(default_factory=dict)
    result_ty: Type | None = None

    @classmethod
    def of(cls, m) -> "Subject":
        if isinstance(m, Subject):
            return m
        return cls(lambda _: m, {}, m.ty)

    def symbolic(self) -> Program:
        return self.build({n: Sym(n) for n in self.param_types})


@dataclass(frozen=True)
class PostPair:
    stronger: Formula
    weaker: Formula


@dataclass
class Counterexample:
    index: int
    params: dict
    input: Any
    wp: bool
    post: bool
    output: Any = None
    note: str = ""

    def to_json(self, theory):
        out = {
            "index": self.index,
            "params": {k: render(v) for k, v in self.params.items()},
            "input": {k: render(v) for k, v in theory.input_binding(self.input).items()},
            "wp": self.wp,
            "post": self.post,
        }
        if self.output is not None:
            out["output"] = {k: render(v) for k, v in theory.output_binding(self.output).items()}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class CheckReport:
    mode: str
    inputs_checked: int
    params_checked: int
    counterexamples: list
    elapsed: float
    theory: Any = field(default=None, repr=False, compare=False)

    @property
    def verdict(self) -> str:
        return "fail" if self.counterexamples else "pass"

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_json(self, timing: bool = True) -> dict:
        return {
            "mode": self.mode,
            "verdict": self.verdict,
            "inputs_checked": self.inputs_checked,
            "params_checked": self.params_checked,
            "counterexamples": [c.to_json(self.theory) for c in self.counterexamples],
            "elapsed_ms": round(self.elapsed * 1000) if timing else 0,
        }

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), indent=2, ensure_ascii=False)

    def render(self, timing: bool = True, limit: int = 20) -> str:
        lines = [
            f"mode            {self.mode}",
            f"verdict         {self.verdict}",
            f"inputs checked  {self.inputs_checked}",
            f"params checked  {self.params_checked}",
            f"counterexamples {len(self.counterexamples)}",
        ]
        if timing:
            lines.append(f"elapsed         {self.elapsed * 1000:.0f} ms")
        for c in self.counterexamples[:limit]:
            parts = [f"#{c.index}"] + [f"{k}={render(v)}" for k, v in c.params.items()]
            parts.append(f"input {c.input}")
            if c.output is not None:
                parts.append(f"output {c.output}")
            parts += [f"wp={str(c.wp).lower()}", f"post={str(c.post).lower()}"]
            if c.note:
                parts.append(f"({c.note})")
            lines.append("  " + " ".join(parts))
        if len(self.counterexamples) > limit:
            lines.append(f"  … {len(self.counterexamples) - limit} more")
        return "\n".join(lines)


def param_space(param_types: dict, domains: Domains, bounds: Bounds = DEFAULT_BOUNDS,
                fixed: dict | None = None) -> list:
    """Every assignment of tables to parameters; ``fixed`` pins some of them."""
    fixed = fixed or {}
    unknown = set(fixed) - set(param_types)
    if unknown:
        raise CheckError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
    names = list(param_types)
    choices = []
    for n in names:
        if n in fixed:
            choices.append([fixed[n]])
        else:
            t = param_types[n]
            choices.append(list(enumerate_fn_tables(t.dom, t.cod, domains, bounds)))
    return [dict(zip(names, combo)) for combo in itertools.product(*choices)]


def _reserved(subject, domains):
    atoms = {a for decl in domains.carriers.values() for a in decl.atoms}
    return set(subject.param_types) | atoms


def _run_cases(cases, fn, jobs):
    if jobs <= 1:
        found = [fn(c) for c in cases]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            found = list(pool.map(fn, cases, chunksize=max(1, len(cases) // (jobs * 4))))
    return sorted((c for c in found if c is not None), key=lambda c: c.index)


def _cases(subject, theory, domains, bounds, params):
    """Tables plus ``(index, table position, input)`` triples in enumeration order."""
    tables = param_space(subject.param_types, domains, bounds, params)
    inputs = theory.inputs(domains)
    pairs = itertools.product(range(len(tables)), inputs)
    return tables, [(n, k, i) for n, (k, i) in enumerate(pairs)]


def _agreement(mode, m, theory, post, domains, params, bounds, jobs, seed=0):
    start = time.perf_counter()
    subject = Subject.of(m)
    pre = wp_formula(subject.symbolic(), theory, post, seed, _reserved(subject, domains))
    tables, cases = _cases(subject, theory, domains, bounds, params)
    built = [subject.build(t) for t in tables]

    def check(case):
        n, k, i = case
        t = tables[k]
        out = run(built[k], theory, i)
        ib = {**theory.input_binding(i), **t}
        wp_v = eval_formula(pre, ib, domains, bounds)
        post_v = eval_formula(post, {**ib, **theory.output_binding(out)}, domains, bounds)
        bad = ((mode in ("sufficiency", "equivalence") and wp_v and not post_v)
               or (mode in ("necessity", "equivalence") and post_v and not wp_v))
        return Counterexample(n, t, i, wp_v, post_v, out) if bad else None

    found = _run_cases(cases, check, jobs)
    return CheckReport(mode, len(cases), len(tables), found, time.perf_counter() - start, theory)


def check_sufficiency(m, theory, post, domains, params=None, bounds=DEFAULT_BOUNDS, jobs=1):
    """wp true at an input ⇒ ``post`` holds of the run from that input."""
    return _agreement("sufficiency", m, theory, post, domains, params, bounds, jobs)


def check_necessity(m, theory, post, domains, params=None, bounds=DEFAULT_BOUNDS, jobs=1):
    """``post`` holds of the run ⇒ wp true at the input."""
    return _agreement("necessity", m, theory, post, domains, params, bounds, jobs)


def check_equivalence(m, theory, post, domains, params=None, bounds=DEFAULT_BOUNDS, jobs=1):
    return _agreement("equivalence", m, theory, post, domains, params, bounds, jobs)


def entailment_witness(p1: Formula, p2: Formula, theory, result_ty: Type, domains: Domains,
                       bounds: Bounds = DEFAULT_BOUNDS, param_types: dict | None = None):
    """First binding where ``p1`` holds and ``p2`` does not, or ``None``."""
    used = free_vars(p1) | free_vars(p2)
    inputs = theory.inputs(domains) if used & set(theory.input_vars()) else [None]
    params = param_types or {}
    tables = param_space({k: v for k, v in params.items() if k in used}, domains, bounds)
    outputs = list(theory.outputs(result_ty, domains, bounds))
    for t, i, out in itertools.product(tables, inputs, outputs):
        b = {**t, **theory.output_binding(out)}
        if i is not None:
            b.update(theory.input_binding(i))
        if eval_formula(p1, b, domains, bounds) and not eval_formula(p2, b, domains, bounds):
            return b
    return None


def entails(p1, p2, theory, result_ty, domains, bounds=DEFAULT_BOUNDS, param_types=None) -> bool:
    """``p1 ⊆ₒ p2`` over every enumerated output (and input, if mentioned)."""
    return entailment_witness(p1, p2, theory, result_ty, domains, bounds, param_types) is None


def weakenings(p: Formula) -> list:
    """Pairs ``(p, p minus one conjunct)``; ``(p, p)`` when ``p`` is not a conjunction."""
    if isinstance(p, And) and len(p.parts) > 1:
        return [PostPair(p, And(p.parts[:k] + p.parts[k + 1:])) for k in range(len(p.parts))]
    return [PostPair(p, p)]


def check_monotonicity(m, theory, pair: PostPair, domains, params=None, bounds=DEFAULT_BOUNDS,
                       jobs=1, verify=True):
    """wp of the stronger postcondition implies wp of the weaker one at every input."""
    start = time.perf_counter()
    subject = Subject.of(m)
    if verify and not entails(pair.stronger, pair.weaker, theory, subject.result_ty, domains,
                              bounds, subject.param_types):
        raise NotOrdered("pair not ⊆ₒ-ordered")
    reserved = _reserved(subject, domains)
    sym = subject.symbolic()
    strong = wp_formula(sym, theory, pair.stronger, 0, reserved)
    weak = wp_formula(sym, theory, pair.weaker, 0, reserved)
    tables, cases = _cases(subject, theory, domains, bounds, params)

    def check(case):
        n, k, i = case
        t = tables[k]
        b = {**theory.input_binding(i), **t}
        s, w = eval_formula(strong, b, domains, bounds), eval_formula(weak, b, domains, bounds)
        return Counterexample(n, t, i, s, w, note="wp of stronger holds, wp of weaker fails") \
            if s and not w else None

    found = _run_cases(cases, check, jobs)
    return CheckReport("monotonicity", len(cases), len(tables), found,
                       time.perf_counter() - start, theory)


def check_extension(m, theory: ExtendedTheory, post, domains, params=None, bounds=DEFAULT_BOUNDS,
                    jobs=1):
    """Extended wp agrees with ``post`` on the run of the unextended program."""
    start = time.perf_counter()
    subject = Subject.of(m)
    pre = wp_formula(subject.symbolic(), theory, post, 0, _reserved(subject, domains))
    tables, cases = _cases(subject, theory, domains, bounds, params)
    built = [subject.build(t) for t in tables]

    def check(case):
        n, k, i = case
        t, prog = tables[k], built[k]
        ext = run(prog, theory, i)
        base = run(unextend(prog), theory.base, i)
        ib = {**theory.input_binding(i), **t}
        wp_v = eval_formula(pre, ib, domains, bounds)
        post_v = eval_formula(post, {**ib, **theory.output_binding(base)}, domains, bounds)
        if ext != base:
            return Counterexample(n, t, i, wp_v, post_v, base, note=f"extended run gave {ext}")
        return Counterexample(n, t, i, wp_v, post_v, base) if wp_v != post_v else None

    found = _run_cases(cases, check, jobs)
    return CheckReport("extension", len(cases), len(tables), found, time.perf_counter() - start, theory)


def simplifier_mismatches(formula: Formula, theory, domains, param_types=None,
                          bounds=DEFAULT_BOUNDS):
    """Compare ``formula`` and ``simplify(formula)`` at every input × table binding.

    Returns ``(simplified, bindings_checked, mismatching_bindings)``.
    """
    simple = simplify(formula)
    bad = []
    tables = param_space(param_types or {}, domains, bounds)
    count = 0
    for t, i in itertools.product(tables, theory.inputs(domains)):
        b = {**theory.input_binding(i), **t}
        count += 1
        if eval_formula(formula, b, domains, bounds) != eval_formula(simple, b, domains, bounds):
            bad.append(b)
    return simple, count, bad
