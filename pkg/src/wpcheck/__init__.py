"""Weakest-precondition obligations for reader/writer/state programs with branching."""

from .branching import ExtendedTheory, unextend
from .checker import (
    CheckReport, PostPair, Subject, check_equivalence, check_extension,
    check_monotonicity, check_necessity, check_sufficiency, entails,
)
from .formula import alpha_eq, eval_formula, print_formula, simplify
from .program import run, wp, wp_formula
from .rws import RwsTheory, build_paper_intro_prog

__version__ = "0.1.0"

__all__ = [
    "CheckReport", "ExtendedTheory", "PostPair", "RwsTheory", "Subject", "alpha_eq",
    "build_paper_intro_prog", "check_equivalence", "check_extension", "check_monotonicity",
    "check_necessity", "check_sufficiency", "entails", "eval_formula", "print_formula", "run",
    "simplify", "unextend", "wp", "wp_formula",
]
