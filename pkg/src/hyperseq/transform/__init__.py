"""Proof transformations over the hypersequent kernel."""

from .atomize import atomize_initials, is_atomized
from .common import FuelExhausted, TransformError, TransformTrace, WrongGroup, WrongSystem
from .cutelim import cut_degrees, eliminate_cut, reduce_cut_formula
from .regular import RegularityReport, is_regular, regularize
from .restrict52 import is_restricted_52, restrict_52
from .standard import StdProof, StdSequent, check_std, std_to_kernel, to_standard
from .t2elim import eliminate_T2

__all__ = [
    "FuelExhausted",
    "RegularityReport",
    "StdProof",
    "StdSequent",
    "TransformError",
    "TransformTrace",
    "WrongGroup",
    "WrongSystem",
    "atomize_initials",
    "check_std",
    "cut_degrees",
    "eliminate_T2",
    "eliminate_cut",
    "is_atomized",
    "is_regular",
    "is_restricted_52",
    "reduce_cut_formula",
    "regularize",
    "restrict_52",
    "std_to_kernel",
    "to_standard",
]
