"""Recolourings between normal forms: containment, equivalence, strong normal form."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .core import FinStructure, MMSNPError, RecolouringMap, Sentence, quotients
from .homsearch import find_hit, model_check
from .normalform import (_first_conjunct, is_connected_sentence, normalize, obstruction_set,
                         structural_diagnostics, item5_witnesses, _pure_unary, _sort_sentence)


class _Checker:
    """Tests recolouring candidates against the quotients of the target's obstructions."""

    def __init__(self, phi1: Sentence, phi2: Sentence) -> None:
        self.phi1 = phi1
        self.phi2 = phi2
        self.obs1 = obstruction_set(phi1).structures
        obs2 = sorted(obstruction_set(phi2).structures, key=len)
        self.tests: List[FinStructure] = [q for f in obs2 for q in quotients(f)]
        self.free_cache: Dict[Tuple[int, Tuple[str, ...]], bool] = {}

    def _free(self, ti: int, colouring: Tuple[str, ...]) -> bool:
        key = (ti, colouring)
        if key not in self.free_cache:
            a = self.tests[ti].recoloured(colouring)
            self.free_cache[key] = find_hit(a, self.obs1) is None
        return self.free_cache[key]

    def witness(self, partial: Dict[str, str]) -> Optional[FinStructure]:
        """A structure free of source obstructions whose recolouring hits a target obstruction.

        Only colourings inside the domain of ``partial`` are tried.
        """
        pre: Dict[str, List[str]] = {}
        for c1 in self.phi1.colours:
            if c1 in partial:
                pre.setdefault(partial[c1], []).append(c1)
        for ti, q in enumerate(self.tests):
            options = [pre.get(c, []) for c in q.colouring]
            for combo in itertools.product(*options):
                if self._free(ti, tuple(combo)):
                    return q.recoloured(combo)
        return None


def recolouring_witness(r: RecolouringMap, phi1: Sentence, phi2: Sentence) -> Optional[FinStructure]:
    """None when ``r`` is a recolouring from ``phi1`` to ``phi2``; otherwise a violating structure."""
    if tuple(r.source_colours) != tuple(phi1.colours) and set(r.source_colours) != set(phi1.colours):
        raise MMSNPError("recolouring source differs from the first sentence's colours")
    if not set(r.target_colours) <= set(phi2.colours):
        raise MMSNPError("recolouring target differs from the second sentence's colours")
    return _Checker(phi1, phi2).witness(r.as_dict())


def is_recolouring(r: RecolouringMap, phi1: Sentence, phi2: Sentence) -> bool:
    return recolouring_witness(r, phi1, phi2) is None


def _search_maps(checker: _Checker, targets: Sequence[str]) -> Iterator[Dict[str, str]]:
    src = list(checker.phi1.colours)
    partial: Dict[str, str] = {}

    def rec(i: int) -> Iterator[Dict[str, str]]:
        if i == len(src):
            yield dict(partial)
            return
        for t in targets:
            partial[src[i]] = t
            if checker.witness(partial) is None:
                yield from rec(i + 1)
            del partial[src[i]]

    yield from rec(0)


def find_recolouring(phi1: Sentence, phi2: Sentence) -> Optional[RecolouringMap]:
    """Some recolouring from ``phi1`` to ``phi2`` (both in normal form), or None."""
    checker = _Checker(phi1, phi2)
    for m in _search_maps(checker, phi2.colours):
        return RecolouringMap.of(phi1.colours, phi2.colours, m)
    return None


def proper_self_recolouring(phi: Sentence) -> Optional[RecolouringMap]:
    """Non-injective self-recolouring with the smallest image, ties broken lexicographically."""
    cols = list(phi.colours)
    checker = _Checker(phi, phi)
    for k in range(1, len(cols)):
        for image in itertools.combinations(cols, k):
            for m in _search_maps(checker, image):
                return RecolouringMap.of(cols, cols, m)
    return None


def _in_normal_form(phi: Sentence) -> bool:
    return not structural_diagnostics(phi) and not item5_witnesses(phi, first_only=True)


def _ensure_normal(phi: Sentence) -> Sentence:
    return phi if _in_normal_form(phi) else normalize(phi)


def remove_colours(phi: Sentence, keep: Sequence[str]) -> Sentence:
    """Drop colours outside ``keep`` together with every clause using them positively."""
    keep_set = set(keep)
    cols = tuple(c for c in phi.colours if c in keep_set)
    out = []
    for cl in phi.clauses:
        if _pure_unary(cl) and all(not p for _, _, p in cl.literals):
            out.append(_first_conjunct(cols))
            continue
        if any(p and c not in keep_set for c, _, p in cl.literals):
            continue
        out.append(cl)
    return _sort_sentence(Sentence(phi.tau, cols, tuple(out)))


def strong_normal_form(phi: Sentence) -> Sentence:
    """Equivalent normal form without proper self-recolourings; ``phi`` must be connected."""
    if not is_connected_sentence(phi):
        raise MMSNPError("strong normal form needs a connected sentence; decompose it first")
    cur = _ensure_normal(phi)
    while True:
        r = proper_self_recolouring(cur)
        if r is None:
            return cur
        cur = remove_colours(cur, r.image())
        diags = structural_diagnostics(cur)
        if diags:
            raise AssertionError("colour removal broke the normal form: " + "; ".join(diags))


def is_strong_normal_form(phi: Sentence) -> bool:
    return _in_normal_form(phi) and proper_self_recolouring(phi) is None


@dataclass(frozen=True)
class ContainmentVerdict:
    holds: bool
    witness: Optional[RecolouringMap] = None
    counterexample: Optional[FinStructure] = None


def contains(phi1: Sentence, phi2: Sentence, max_counterexample: int = 4) -> ContainmentVerdict:
    """Whether every structure satisfying ``phi1`` satisfies ``phi2``.

    Both sentences must be connected. On failure a counterexample with at most
    ``max_counterexample`` elements is searched for.
    """
    for phi in (phi1, phi2):
        if not is_connected_sentence(phi):
            raise MMSNPError("containment needs connected sentences; decompose them first")
    if phi1.tau != phi2.tau:
        tau = phi1.tau.union(phi2.tau)
        phi1 = Sentence(tau, phi1.colours, phi1.clauses)
        phi2 = Sentence(tau, phi2.colours, phi2.clauses)
    n1, n2 = _ensure_normal(phi1), _ensure_normal(phi2)
    r = find_recolouring(n1, n2)
    if r is not None:
        return ContainmentVerdict(True, witness=r)
    return ContainmentVerdict(False, counterexample=find_counterexample(n1, n2, max_counterexample))


def find_counterexample(phi1: Sentence, phi2: Sentence, max_size: int) -> Optional[FinStructure]:
    """A smallest structure satisfying ``phi1`` but not ``phi2`` (both in normal form).

    Exhaustive up to ``max_size`` elements. Satisfying ``phi1`` is closed under
    removing tuples and violating ``phi2`` under adding them, so for each
    colouring the search only explores obstruction-free tuple sets whose
    largest possible extension still violates ``phi2``.
    """
    tau = phi1.tau
    obs1 = obstruction_set(phi1).structures
    for n in range(1, max_size + 1):
        names = tuple(f"a{i}" for i in range(n))
        universe = [(s, t) for s, ar in tau.symbols for t in itertools.product(range(n), repeat=ar)]
        for colouring in itertools.combinations_with_replacement(phi1.colours, n):
            found = _bnb(tau, names, colouring, universe, obs1, phi2)
            if found is not None:
                return _shrink(found, phi2)
    return None


def _shrink(a: FinStructure, phi2: Sentence) -> FinStructure:
    """Drop tuples while the structure keeps violating ``phi2``."""
    tuples = sorted(a.tuples())
    i = 0
    while i < len(tuples):
        trial = tuples[:i] + tuples[i + 1:]
        if model_check(_build(a.signature, a.names, trial), phi2, check_normal_form=False) is None:
            tuples = trial
        else:
            i += 1
    return _build(a.signature, a.names, tuples)


def _build(tau, names, tuples, colouring=None) -> FinStructure:
    rels: Dict[str, set] = {s: set() for s in tau.names}
    for s, t in tuples:
        rels[s].add(t)
    return FinStructure(tau, names, {s: frozenset(v) for s, v in rels.items()},
                        tuple(colouring) if colouring else ())


def _bnb(tau, names, colouring, universe, obs1, phi2) -> Optional[FinStructure]:
    def free(tuples) -> bool:
        return find_hit(_build(tau, names, tuples, colouring), obs1) is None

    if not free([]):
        return None

    def rec(chosen: List, banned: set) -> Optional[FinStructure]:
        base = _build(tau, names, chosen)
        if model_check(base, phi2, check_normal_form=False) is None:
            return base
        extension = list(chosen) + [t for t in universe
                                    if t not in banned and t not in chosen and free(chosen + [t])]
        if model_check(_build(tau, names, extension), phi2, check_normal_form=False) is not None:
            return None
        pick = next(t for t in extension if t not in chosen)
        got = rec(chosen + [pick], banned)
        if got is not None:
            return got
        return rec(chosen, banned | {pick})

    return rec([], set())
