"""Tight typing and step-counted reduction for CBN, CBV and the bang calculus."""

from ._core import (
    CalculusMismatch,
    ParseError,
    TightError,
    TranslateError,
    alpha_eq,
    check,
    countvr,
    free_vars,
    inversevr,
    normalize,
    parse,
    synthesize,
    theorem_ids,
    translate,
    translate_derivation,
    verify,
)

__all__ = [
    "CalculusMismatch",
    "ParseError",
    "TightError",
    "TranslateError",
    "alpha_eq",
    "check",
    "countvr",
    "free_vars",
    "inversevr",
    "normalize",
    "parse",
    "synthesize",
    "theorem_ids",
    "translate",
    "translate_derivation",
    "verify",
]
