"""Monotone monadic SNP: normal forms, recolourings, precolourations and classification."""

from .core import (BudgetExceeded, ClassificationReport, Clause, ColourFunction, ComponentResult,
                   FinStructure, MMSNPError, RecolouringMap, Sentence, Signature, structure)
from .textio import ParseError, parse_sentence, parse_structure, print_sentence, print_structure

__all__ = [
    "BudgetExceeded", "ClassificationReport", "Clause", "ColourFunction", "ComponentResult",
    "FinStructure", "MMSNPError", "ParseError", "RecolouringMap", "Sentence", "Signature",
    "parse_sentence", "parse_structure", "print_sentence", "print_structure", "structure",
]

__version__ = "0.1.0"
