"""Epistemic syllogistic: syntax, Kripke semantics, natural deduction and search."""

from .syntax import (
    All, Atom, Formula, Know, Neg, ParseError, Some, Tier, check_tier, negate, nnf,
    parse_formula, parse_term,
)
from .semantics import (
    FrameClass, KripkeModel, ModelError, PointedModel, ResourceLimitError, check_frame,
    enumerate_models, format_model, parse_model, satisfies, valid_bounded,
)
from .calculus import (
    Axiom, Hypothesis, Infer, Judgement, Premise, Rule, RuleViolation, System,
    check_proof, is_valid_proof,
)
from .search import (
    DecideResult, SearchBudget, decide, is_inconsistent, prove_bounded, singleton_model,
)
from .canonical import build_eas_countermodel, enumerate_assertoric_mcs, saturate_type

__version__ = "0.1.0"

__all__ = [
    "All", "Atom", "Formula", "Know", "Neg", "ParseError", "Some", "Tier", "check_tier",
    "negate", "nnf", "parse_formula", "parse_term",
    "FrameClass", "KripkeModel", "ModelError", "PointedModel", "ResourceLimitError",
    "check_frame", "enumerate_models", "format_model", "parse_model", "satisfies", "valid_bounded",
    "Axiom", "Hypothesis", "Infer", "Judgement", "Premise", "Rule", "RuleViolation", "System",
    "check_proof", "is_valid_proof",
    "DecideResult", "SearchBudget", "decide", "is_inconsistent", "prove_bounded", "singleton_model",
    "build_eas_countermodel", "enumerate_assertoric_mcs", "saturate_type",
]
