"""Two-sorted hypersequent proof kernel for the modal logics K .. S5."""

from .calculus import Group, RuleApp, RuleId, StepError, SystemId, check_step, group_of, system_rules
from .proofs import CheckReport, Proof, align, check_proof, proof_from_json, proof_to_json
from .syntax import (
    Formula,
    Hypersequent,
    ParseError,
    Sequent,
    Sort,
    concat_hyper,
    concat_sequents,
    formula_image,
    hyper_image,
    parse_formula,
    parse_hypersequent,
    parse_sequent,
    print_formula,
    print_hypersequent,
    print_sequent,
)

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "Formula",
    "Group",
    "Hypersequent",
    "ParseError",
    "Proof",
    "RuleApp",
    "RuleId",
    "Sequent",
    "Sort",
    "StepError",
    "SystemId",
    "align",
    "check_proof",
    "check_step",
    "concat_hyper",
    "concat_sequents",
    "formula_image",
    "group_of",
    "hyper_image",
    "parse_formula",
    "parse_hypersequent",
    "parse_sequent",
    "print_formula",
    "print_hypersequent",
    "print_sequent",
    "proof_from_json",
    "proof_to_json",
    "system_rules",
]
