"""Backtracking search: homomorphisms, obstruction hits, model checking.

All engines take an optional node budget and raise
:class:`~mmsnp.core.BudgetExceeded` instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .core import Counter, FinStructure, MMSNPError, Sentence, budget

HomWitness = Dict[int, int]


class _Target:
    """Target structure indexed for tuple lookups by (symbol, position, element)."""

    def __init__(self, b: FinStructure) -> None:
        self.b = b
        self.size = len(b)
        self.rel = b.relations
        self.index: Dict[Tuple[str, int, int], List[Tuple[int, ...]]] = {}
        for s, ts in b.relations.items():
            for t in ts:
                for i, e in enumerate(t):
                    self.index.setdefault((s, i, e), []).append(t)


class _Source:
    """Source structure: per-element incident tuples."""

    def __init__(self, a: FinStructure) -> None:
        self.a = a
        self.size = len(a)
        self.tuples = [(s, t) for s, ts in a.relations.items() for t in ts]
        self.incident: List[List[Tuple[str, Tuple[int, ...]]]] = [[] for _ in a.elements]
        for s, t in self.tuples:
            for e in set(t):
                self.incident[e].append((s, t))


def _check_signature(a: FinStructure, b: FinStructure) -> None:
    for s, ts in a.relations.items():
        if not ts:
            continue
        if s not in b.signature:
            raise MMSNPError(f"signature mismatch: {s} missing from target")
        if b.signature.arity(s) != a.signature.arity(s):
            raise MMSNPError(f"signature mismatch: arity of {s}")


def _search(src: _Source, tgt: _Target, tcol: Sequence[Optional[str]],
            fixed: Optional[Dict[int, int]], counter: Counter,
            allowed: Optional[FrozenSet[int]] = None) -> Iterator[List[int]]:
    a = src.a
    n = src.size
    doms: List[set] = []
    for x in a.elements:
        c = a.colouring[x]
        cand = range(tgt.size) if allowed is None else allowed
        if c is None:
            d = set(cand)
        else:
            d = {y for y in cand if tcol[y] == c}
        doms.append(d)
    for s, t in src.tuples:
        if len(t) == 1:
            doms[t[0]] &= {u[0] for u in tgt.rel.get(s, ())}
    # repeated-element tuples like E(x,x) restrict the domain directly
    for s, t in src.tuples:
        if len(set(t)) == 1 and len(t) > 1:
            doms[t[0]] &= {u[0] for u in tgt.rel.get(s, ()) if len(set(u)) == 1}
    if fixed:
        for x, y in fixed.items():
            if y not in doms[x]:
                return
            doms[x] = {y}
    if any(not d for d in doms):
        return
    assign: List[int] = [-1] * n

    def consistent(x: int, y: int) -> bool:
        for s, t in src.incident[x]:
            if all(assign[e] >= 0 or e == x for e in t):
                img = tuple(y if e == x else assign[e] for e in t)
                if img not in tgt.rel.get(s, ()):
                    return False
        return True

    def forward(x: int, y: int) -> Optional[List[Tuple[int, set]]]:
        """Prune domains of elements left alone in a tuple with ``x``; returns the undo trail."""
        trail: List[Tuple[int, set]] = []
        for s, t in src.incident[x]:
            free = {e for e in t if assign[e] < 0 and e != x}
            if len(free) != 1:
                continue
            u = next(iter(free))
            pos = t.index(x)
            support = set()
            for cand in tgt.index.get((s, pos, y), ()):
                ok = True
                val = None
                for e, v in zip(t, cand):
                    if e == x:
                        if v != y:
                            ok = False
                            break
                    elif e == u:
                        if val is None:
                            val = v
                        elif val != v:
                            ok = False
                            break
                    elif assign[e] != v:
                        ok = False
                        break
                if ok and val is not None:
                    support.add(val)
            new = doms[u] & support
            if len(new) != len(doms[u]):
                trail.append((u, doms[u]))
                doms[u] = new
                if not new:
                    for v_, old in reversed(trail):
                        doms[v_] = old
                    return None
        return trail

    def pick() -> int:
        best = -1
        key = None
        for x in range(n):
            if assign[x] >= 0:
                continue
            touched = sum(1 for _, t in src.incident[x] for e in t if assign[e] >= 0)
            k = (len(doms[x]), -touched, x)
            if key is None or k < key:
                key = k
                best = x
        return best

    def rec(depth: int) -> Iterator[List[int]]:
        if depth == n:
            yield list(assign)
            return
        x = pick()
        for y in sorted(doms[x]):
            counter.tick()
            if not consistent(x, y):
                continue
            assign[x] = y
            trail = forward(x, y)
            if trail is not None:
                saved = doms[x]
                doms[x] = {y}
                yield from rec(depth + 1)
                doms[x] = saved
                for u, old in reversed(trail):
                    doms[u] = old
            assign[x] = -1

    yield from rec(0)


def homomorphisms(a: FinStructure, b: FinStructure, fixed: Optional[Dict[int, int]] = None,
                  max_nodes: Optional[int] = None) -> Iterator[HomWitness]:
    """All homomorphisms ``a -> b`` preserving tuples and the colours of coloured elements."""
    _check_signature(a, b)
    counter = Counter(budget("nodes", max_nodes))
    for m in _search(_Source(a), _Target(b), b.colouring, fixed, counter):
        yield dict(enumerate(m))


def hom_exists(a: FinStructure, b: FinStructure, fixed: Optional[Dict[int, int]] = None,
               max_nodes: Optional[int] = None) -> Optional[HomWitness]:
    for h in homomorphisms(a, b, fixed, max_nodes):
        return h
    return None


def find_hit(a: FinStructure, obstructions: Iterable[FinStructure],
             max_nodes: Optional[int] = None) -> Optional[Tuple[FinStructure, HomWitness]]:
    """Some obstruction with a homomorphism into ``a``, or None."""
    tgt = _Target(a)
    counter = Counter(budget("nodes", max_nodes))
    for f in obstructions:
        _check_signature(f, a)
        for m in _search(_Source(f), tgt, a.colouring, None, counter):
            return f, dict(enumerate(m))
    return None


def is_free(a: FinStructure, obstructions: Iterable[FinStructure],
            max_nodes: Optional[int] = None) -> bool:
    return find_hit(a, obstructions, max_nodes) is None


class _ColouringEngine:
    """Extends partial colourings of a fixed structure while avoiding obstruction hits."""

    def __init__(self, a: FinStructure, obstructions: Sequence[FinStructure],
                 colours: Sequence[str], counter: Counter) -> None:
        self.a = a
        self.tgt = _Target(a)
        self.obs = [(_Source(f), f) for f in obstructions]
        for f in obstructions:
            _check_signature(f, a)
        self.colours = list(colours)
        self.counter = counter
        self.by_colour: Dict[str, List[Tuple[_Source, int]]] = {c: [] for c in colours}
        for src, f in self.obs:
            for x in f.elements:
                c = f.colouring[x]
                if c in self.by_colour:
                    self.by_colour[c].append((src, x))
        self.neigh: List[set] = [set() for _ in a.elements]
        for _, t in a.tuples():
            for e in t:
                self.neigh[e].update(t)
        for e in a.elements:
            self.neigh[e].discard(e)

    def hit_at(self, col: List[Optional[str]], e: int) -> bool:
        """Whether some obstruction maps into the coloured part using element ``e``."""
        c = col[e]
        for src, x in self.by_colour.get(c, ()):
            for _ in _search(src, self.tgt, col, {x: e}, self.counter):
                return True
        return False

    def run(self, partial: Sequence[Optional[str]], first_only: bool) -> Iterator[List[str]]:
        a = self.a
        col: List[Optional[str]] = list(partial)
        for e in a.elements:
            if col[e] is not None and col[e] not in self.by_colour:
                raise MMSNPError(f"unknown colour {col[e]}")
        # forced colours must not already clash
        for e in a.elements:
            if col[e] is not None and self.hit_at(col, e):
                return
        doms: List[List[str]] = [[col[e]] if col[e] is not None else list(self.colours) for e in a.elements]
        free = [e for e in a.elements if col[e] is None]

        def options(e: int) -> List[str]:
            out = []
            for c in doms[e]:
                col[e] = c
                if not self.hit_at(col, e):
                    out.append(c)
            col[e] = None
            return out

        def rec(todo: List[int]) -> Iterator[List[str]]:
            if not todo:
                yield list(col)  # type: ignore[arg-type]
                return
            if first_only:
                # fail-first: fewest remaining colours, then most coloured neighbours
                best = None
                for e in todo:
                    k = (len(doms[e]), -sum(1 for u in self.neigh[e] if col[u] is not None), e)
                    if best is None or k < best[0]:
                        best = (k, e)
                e = best[1]
            else:
                e = todo[0]
            rest = [u for u in todo if u != e]
            for c in list(doms[e]):
                self.counter.tick()
                col[e] = c
                if self.hit_at(col, e):
                    col[e] = None
                    continue
                saved = []
                dead = False
                if first_only:
                    for u in self.neigh[e]:
                        if col[u] is None:
                            opts = options(u)
                            if len(opts) != len(doms[u]):
                                saved.append((u, doms[u]))
                                doms[u] = opts
                            if not opts:
                                dead = True
                                break
                if not dead:
                    yield from rec(rest)
                for u, old in saved:
                    doms[u] = old
                col[e] = None

        yield from rec(free)


def free_colourings(a: FinStructure, obstructions: Sequence[FinStructure], colours: Sequence[str],
                    partial: Optional[Sequence[Optional[str]]] = None,
                    max_nodes: Optional[int] = None) -> Iterator[Tuple[str, ...]]:
    """Every total colouring extending ``partial`` (default: ``a``'s colouring) that is obstruction-free.

    Colourings are produced in lexicographic order of colour indices along the domain order.
    """
    counter = Counter(budget("nodes", max_nodes))
    start = list(partial) if partial is not None else list(a.colouring)
    eng = _ColouringEngine(a, obstructions, colours, counter)
    for c in eng.run(start, first_only=False):
        yield tuple(c)


def extend_colouring(a: FinStructure, obstructions: Sequence[FinStructure], colours: Sequence[str],
                     partial: Optional[Sequence[Optional[str]]] = None,
                     max_nodes: Optional[int] = None) -> Optional[Tuple[str, ...]]:
    """One obstruction-free total colouring extending ``partial``, found with fail-first search."""
    counter = Counter(budget("nodes", max_nodes))
    start = list(partial) if partial is not None else list(a.colouring)
    eng = _ColouringEngine(a, obstructions, colours, counter)
    for c in eng.run(start, first_only=True):
        return tuple(c)
    return None


def model_check(a: FinStructure, phi: Sentence, max_nodes: Optional[int] = None,
                check_normal_form: bool = True) -> Optional[Tuple[str, ...]]:
    """An obstruction-free total colouring of ``a`` if ``a`` satisfies ``phi``, else None.

    ``a``'s own colouring is a forced partial assignment.
    """
    from .normalform import obstruction_set, structural_diagnostics

    if check_normal_form:
        diags = structural_diagnostics(phi)
        if diags:
            raise MMSNPError("sentence not in normal form: " + "; ".join(diags))
    obs = obstruction_set(phi)
    target = a.with_signature(a.signature.union(phi.tau))
    return extend_colouring(target, obs.structures, phi.colours, max_nodes=max_nodes)


@dataclass(frozen=True)
class NeqInstance:
    base: FinStructure
    disequalities: FrozenSet[FrozenSet[int]]

    def __post_init__(self) -> None:
        for pair in self.disequalities:
            if not pair or any(not 0 <= e < len(self.base) for e in pair) or len(pair) > 2:
                raise MMSNPError("disequality outside the domain")


def model_check_neq(inst: NeqInstance, phi: Sentence, max_nodes: Optional[int] = None) -> bool:
    """Satisfaction with extra disequality constraints; only reflexive ones matter."""
    if any(len(pair) == 1 for pair in inst.disequalities):
        return False
    return model_check(inst.base, phi, max_nodes) is not None
