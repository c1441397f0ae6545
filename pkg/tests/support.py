"""Fixture loading and comparison helpers shared by the test modules."""

from __future__ import annotations

import itertools
from pathlib import Path
from typing import List, Optional

from mmsnp.core import FinStructure, Sentence, clause_key
from mmsnp.textio import parse_sentence, parse_structure

DATA = Path(__file__).parent / "data"
CORPUS = DATA / "corpus"


def load(name: str) -> Sentence:
    return parse_sentence((DATA / f"{name}.mmsnp").read_text())


def load_structure(name: str, colours=()) -> FinStructure:
    return parse_structure((DATA / f"{name}.struct").read_text(), colours=colours)


def corpus() -> List[tuple]:
    return [(p.stem, parse_sentence(p.read_text())) for p in sorted(CORPUS.glob("*.mmsnp"))]


def clause_keys(phi: Sentence) -> set:
    return {clause_key(c) for c in phi.clauses}


def colour_renaming(a: Sentence, b: Sentence) -> Optional[dict]:
    """A bijection from a's colours to b's making the clause sets equal, if any."""
    if a.tau != b.tau or len(a.colours) != len(b.colours) or len(a.clauses) != len(b.clauses):
        return None
    target = clause_keys(b)
    for perm in itertools.permutations(b.colours):
        m = dict(zip(a.colours, perm))
        if {clause_key(c.rename_colours(m)) for c in a.clauses} == target:
            return m
    return None


def same_up_to_renaming(a: Sentence, b: Sentence) -> bool:
    return colour_renaming(a, b) is not None
