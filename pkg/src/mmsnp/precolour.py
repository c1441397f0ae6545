"""Precolourations, colour sets of pointed obstructions, and the chi construction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from .core import Clause, FinStructure, MMSNPError, Sentence, Signature, budget, clause_key
from .homsearch import extend_colouring, find_hit
from .normalform import obstruction_set, _sort_sentence

DEFAULT_CHI_DEPTH = 3


@dataclass(frozen=True)
class PointedStructure:
    structure: FinStructure
    root: int

    def __post_init__(self) -> None:
        if not 0 <= self.root < len(self.structure):
            raise MMSNPError("root outside the domain")


def _predicate_name(colour: str, taken: Set[str]) -> str:
    name = f"P_{colour}"
    while name in taken:
        name += "_"
    return name


def _clash(pred: str, colour: str) -> Clause:
    return Clause.build([(pred, (0,))], [(colour, 0, True)])


def standard_precolouration(phi: Sentence, check: bool = True) -> Sentence:
    """Add a unary predicate P_M per colour M that excludes every other colour."""
    if check:
        from .recolour import is_strong_normal_form
        if not is_strong_normal_form(phi):
            raise MMSNPError("standard precolouration needs a sentence in strong normal form")
    taken = set(phi.tau.names) | set(phi.colours)
    preds = []
    for m in phi.colours:
        p = _predicate_name(m, taken)
        taken.add(p)
        preds.append(p)
    tau = phi.tau.extend((p, 1) for p in preds)
    extra = [_clash(p, other) for p, m in zip(preds, phi.colours) for other in phi.colours if other != m]
    return _sort_sentence(Sentence(tau, phi.colours, tuple(phi.clauses) + tuple(extra)))


def precolour_predicates(phi: Sentence) -> Optional[Dict[str, str]]:
    """For each colour, a unary symbol carrying all its clash clauses; None if some colour has none."""
    present = set(phi.clauses)
    unary = [s for s, a in phi.tau.symbols if a == 1]
    out: Dict[str, str] = {}
    for m in phi.colours:
        for p in unary:
            if all(_clash(p, other) in present for other in phi.colours if other != m):
                out[m] = p
                break
        else:
            return None
    return out


def is_precoloured(phi: Sentence) -> bool:
    from .recolour import _in_normal_form
    return _in_normal_form(phi) and precolour_predicates(phi) is not None


def colour_set(p: PointedStructure, phi: Sentence) -> Set[str]:
    """Colours for the root that leave the structure free of obstructions."""
    obs = obstruction_set(phi).structures
    a = p.structure.with_signature(p.structure.signature.union(phi.tau))
    out = set()
    for m in phi.colours:
        col = list(a.colouring)
        col[p.root] = m
        if find_hit(a.recoloured(col), obs) is None:
            out.add(m)
    return out


def _pointed_key(p: PointedStructure):
    a = p.structure
    lits = [(c, e, True) for e, c in enumerate(a.colouring) if c is not None]
    lits.append(("\x00root", p.root, True))
    return clause_key(Clause.build(list(a.tuples()), lits))


def pointed_obstructions(phi: Sentence) -> List[Tuple[PointedStructure, Set[str]]]:
    """Every obstruction pointed at each element, up to pointed isomorphism, with its colour set."""
    seen = set()
    out = []
    for f in obstruction_set(phi).structures:
        for a in f.elements:
            p = PointedStructure(f, a)
            key = _pointed_key(p)
            if key in seen:
                continue
            seen.add(key)
            out.append((p, colour_set(p, phi)))
    return out


def colours_as_intersection_check(phi: Sentence) -> Dict[str, bool]:
    """Per colour M: whether the colour sets containing M intersect to exactly {M}."""
    pointed = pointed_obstructions(phi)
    out = {}
    for m in phi.colours:
        inter = set(phi.colours)
        for _, cs in pointed:
            if m in cs:
                inter &= cs
        out[m] = inter == {m}
    return out


class _TreeBuilder:
    def __init__(self, tau: Signature) -> None:
        self.tau = tau
        self.names: List[str] = []
        self.tuples: List[Tuple[str, Tuple[int, ...]]] = []
        self.colouring: List[Optional[str]] = []
        self.per_depth: Dict[int, int] = {}

    def new(self, depth: int) -> int:
        i = self.per_depth.get(depth, 0) + 1
        self.per_depth[depth] = i
        letters = "xyzwuv"
        if depth == 0:
            name = "x"
        elif depth < len(letters):
            name = f"{letters[depth]}{i}"
        else:
            name = f"t{depth}_{i}"
        self.names.append(name)
        self.colouring.append(None)
        return len(self.names) - 1

    def finish(self) -> FinStructure:
        rels: Dict[str, set] = {s: set() for s in self.tau.names}
        for s, t in self.tuples:
            rels[s].add(t)
        return FinStructure(self.tau, tuple(self.names), {s: frozenset(v) for s, v in rels.items()},
                            tuple(self.colouring))


def build_chi(phi: Sentence, colour: str, n: int, max_depth: int = DEFAULT_CHI_DEPTH,
              max_elements: Optional[int] = None) -> PointedStructure:
    """Canonical database of the depth-``n`` formula defining ``colour``, rooted at ``x``.

    Each level conjoins one copy of every pointed obstruction whose colour set
    contains ``colour``; the other elements of each copy root their own subtrees.
    Only depth-``n`` leaves carry colours. An empty family keeps the previous level.
    """
    if colour not in phi.colours:
        raise MMSNPError(f"unknown colour {colour}")
    if n < 0:
        raise MMSNPError("depth must be non-negative")
    if n > max_depth:
        raise MMSNPError(f"depth {n} exceeds the cap {max_depth}")
    limit = budget("nodes", max_elements)
    families = {m: [p for p, cs in pointed_obstructions(phi) if m in cs] for m in phi.colours}
    b = _TreeBuilder(phi.tau)

    def grow(node: int, m: str, level: int, depth: int) -> None:
        if level == 0 or not families[m]:
            b.colouring[node] = m
            return
        for p in families[m]:
            f = p.structure
            image = {p.root: node}
            for e in f.elements:
                if e != p.root:
                    image[e] = b.new(depth + 1)
                    if len(b.names) > limit:
                        raise MMSNPError("chi structure exceeds the element budget")
            for s, t in f.tuples():
                b.tuples.append((s, tuple(image[e] for e in t)))
            for e in f.elements:
                if e != p.root:
                    grow(image[e], f.colouring[e], level - 1, depth + 1)

    root = b.new(0)
    grow(root, colour, n, 0)
    return PointedStructure(b.finish(), root)


def chi_defines_colour(phi: Sentence, colour: str, n: int, max_depth: int = DEFAULT_CHI_DEPTH) -> bool:
    """Whether the chi structure has a free colouring and every free colouring gives the root ``colour``."""
    p = build_chi(phi, colour, n, max_depth)
    obs = obstruction_set(phi).structures
    a = p.structure
    if extend_colouring(a, obs, phi.colours) is None:
        return False
    if a.colouring[p.root] is not None:
        return a.colouring[p.root] == colour
    for other in phi.colours:
        if other == colour:
            continue
        partial: List[Optional[str]] = list(a.colouring)
        partial[p.root] = other
        if extend_colouring(a, obs, phi.colours, partial) is not None:
            return False
    return True

