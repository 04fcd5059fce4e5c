"""S-expression reading with source locations, and a width-aware printer."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

WIDTH = 78


class FrontendError(Exception):
    """A located front-end error; ``str`` reads ``message at line:col``."""

    def __init__(self, message, line=None, col=None):
        self.message, self.line, self.col = message, line, col
        where = f" at {line}:{col}" if line is not None else ""
        super().__init__(message + where)


@dataclass(frozen=True)
class Atom:
    text: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def _tokens(text):
    line, col = 1, 1
    for m in _TOKEN.finditer(text):
        tok = m.group()
        yield tok, line, col
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            col = len(tok) - tok.rindex("\n")
        else:
            col += len(tok)


def _end_position(text):
    """Line and column of the last character of ``text``."""
    lines = text.rstrip("\n").split("\n") if text.strip() else [""]
    return len(lines), max(len(lines[-1]), 1)


def read_all(text: str) -> list:
    """Parse every top-level form in ``text``."""
    stack = [[]]
    opens = []
    for tok, line, col in _tokens(text):
        if tok[0].isspace() or tok[0] == ";":
            continue
        if tok == "(":
            stack.append([])
            opens.append((line, col))
        elif tok == ")":
            if not opens:
                raise FrontendError("unexpected ')'", line, col)
            items = stack.pop()
            l0, c0 = opens.pop()
            stack[-1].append(SList(tuple(items), l0, c0))
        else:
            stack[-1].append(Atom(tok, line, col))
    if opens:
        raise FrontendError("unbalanced parenthesis", *_end_position(text))
    return stack[0]


def flat(x) -> str:
    if isinstance(x, Atom):
        return x.text
    return "(" + " ".join(flat(i) for i in x.items) + ")"


# How many arguments stay on the head line when a form is broken.
HEAD_ARGS = {
    "bind": 2, "local": 1, "maybe": 1, "either": 1, "if": 1, "implies": 1, "forall": 1,
    "spec": 1, "domain": 1, "param": 1, "lambda": 1,
}


def _column(text, start):
    return len(text) - text.rindex("\n") - 1 if "\n" in text else start + len(text)


def pretty(x, indent: int = 0) -> str:
    """Flat when it fits in ``WIDTH``; otherwise a head line and indented children."""
    text = flat(x)
    if isinstance(x, Atom) or indent + len(text) <= WIDTH or not x.items:
        return text
    head, args = x.items[0], x.items[1:]
    keep = HEAD_ARGS.get(head.text, 0) if isinstance(head, Atom) else 0
    keep = min(keep, len(args) - 1)
    out = "(" + pretty(head, indent + 1)
    kept = 0
    while kept < keep and _column(out, indent) + 1 + len(flat(args[kept])) <= WIDTH:
        out += " " + flat(args[kept])
        kept += 1
    pad = indent + 2
    for item in args[kept:]:
        out += "\n" + " " * pad + pretty(item, pad)
    return out + ")"
