from .freealg import Polynomial, bracket, expand_nlsw, to_lyndon_basis
from .gsb import RewriteSystem, Rule, complete, irr_basis, is_gsb, member, reduce
from .hnn import build_presentation, check_embedding, h0_and_adapt, normal_basis, verify_gsb
from .models import PresentationFile, Report, ValidationReport
from .parser import parse_expression, parse_presentation
from .replication import DoubledAlphabet, phi, replicate_system, translate_relation
from .tables import StructureTable
from .validate import validate
from .words import Alphabet, enumerate_alsw, is_alsw, standard_bracketing

__all__ = [
    "Alphabet", "enumerate_alsw", "is_alsw", "standard_bracketing",
    "Polynomial", "bracket", "expand_nlsw", "to_lyndon_basis",
    "RewriteSystem", "Rule", "reduce", "member", "is_gsb", "complete", "irr_basis",
    "DoubledAlphabet", "phi", "translate_relation", "replicate_system",
    "StructureTable", "h0_and_adapt", "build_presentation", "verify_gsb", "normal_basis", "check_embedding",
    "PresentationFile", "Report", "ValidationReport", "parse_presentation", "parse_expression", "validate",
]

__version__ = "0.1.0"
