"""Complexity classification through colour functions.

A colour function ``h: colours^k -> colours`` is *realized* for a sentence when
no obstruction F admits obstruction-free colourings c1..ck of its input part
with ``h(c1(x), ..., ck(x)) = colour_F(x)`` for every element x. Realized
functions form a clone. A component is tractable exactly when this clone has
a Siggers operation, and NP-complete exactly when it has a trivial subfactor.
Both are searched independently and must agree.

Searches for realized tables with extra identities run a counterexample-guided
loop. A propagation-based table solver proposes a candidate, the realizedness
oracle returns violating colouring tuples, and each becomes a learned nogood.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .core import (BudgetExceeded, ClassificationReport, ColourFunction, ComponentResult, Counter,
                   FinStructure, MMSNPError, Sentence, budget)
from .homsearch import free_colourings
from .normalform import ObstructionSet, decompose_connected, normalize, obstruction_set

Nogood = Tuple[Tuple[int, int], ...]

MAX_CELLS = 300_000
MAX_SUBFACTOR_COLOURS = 4


class InconsistentClassification(RuntimeError):
    """The Siggers search and the subfactor search disagree."""


@dataclass(frozen=True)
class Subfactor:
    rho: Tuple[str, ...]
    S: Tuple[str, ...]
    T: Tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.S or not self.T:
            raise MMSNPError("subfactor blocks must be nonempty")
        if set(self.S) & set(self.T):
            raise MMSNPError("subfactor blocks must be disjoint")
        if set(self.S) | set(self.T) != set(self.rho):
            raise MMSNPError("subfactor blocks must cover the carrier")


@dataclass(frozen=True)
class RealizednessWitness:
    obstruction: FinStructure
    colourings: Tuple[Tuple[str, ...], ...]
    nogood: Nogood

    def recombined(self, h: ColourFunction) -> Tuple[str, ...]:
        return tuple(h(*col) for col in zip(*self.colourings))


@dataclass
class SearchCertificate:
    nogoods: List[Nogood] = field(default_factory=list)
    iterations: int = 0
    unsat: bool = False
    found: Optional[ColourFunction] = None


class _Entry:
    def __init__(self, f: FinStructure, target: Tuple[int, ...], free: List[Tuple[int, ...]]) -> None:
        self.f = f
        self.target = target
        self.free = free
        # next-value sets per prefix, one trie level per element
        self.nxt: List[Dict[Tuple[int, ...], set]] = [dict() for _ in target]
        for c in free:
            for j in range(len(c)):
                self.nxt[j].setdefault(c[:j], set()).add(c[j])


class RealizednessOracle:
    """Free colourings of every obstruction's input part, prepared for witness search."""

    def __init__(self, obstructions: ObstructionSet, max_nodes: Optional[int] = None) -> None:
        self.colours = tuple(obstructions.colours)
        idx = {c: i for i, c in enumerate(self.colours)}
        self.entries: List[_Entry] = []
        for f in sorted(obstructions.structures, key=len):
            if any(c is None for c in f.colouring):
                raise MMSNPError("obstructions must be totally coloured")
            free = [tuple(idx[c] for c in col)
                    for col in free_colourings(f.reduct(), obstructions.structures, self.colours,
                                               max_nodes=max_nodes)]
            self.entries.append(_Entry(f, tuple(idx[c] for c in f.colouring), free))

    def witnesses(self, h: ColourFunction) -> Iterator[RealizednessWitness]:
        if tuple(h.colours) != self.colours:
            raise MMSNPError("colour function ranges over different colours")
        q = len(self.colours)
        k = h.arity
        pre: List[List[Tuple[int, ...]]] = [[] for _ in range(q)]
        for args in itertools.product(range(q), repeat=k):
            pre[h.value(args)].append(args)
        for e in self.entries:
            if not e.free:
                continue
            yield from self._search(e, h, pre)

    def _search(self, e: _Entry, h: ColourFunction, pre) -> Iterator[RealizednessWitness]:
        n = len(e.target)
        k = h.arity
        columns: List[Tuple[int, ...]] = []

        def rec(j: int, prefixes: List[Tuple[int, ...]]) -> Iterator[RealizednessWitness]:
            if j == n:
                cols = tuple(tuple(self.colours[v] for v in p) for p in prefixes)
                ng = tuple(sorted({(h.cell(col), e.target[x]) for x, col in enumerate(columns)}))
                yield RealizednessWitness(e.f, cols, ng)
                return
            ext = [e.nxt[j].get(p, ()) for p in prefixes]
            if any(not s for s in ext):
                return
            for args in pre[e.target[j]]:
                if all(args[i] in ext[i] for i in range(k)):
                    columns.append(args)
                    yield from rec(j + 1, [p + (args[i],) for i, p in enumerate(prefixes)])
                    columns.pop()

        yield from rec(0, [()] * k)

    def nogoods(self, q: int, arity: int) -> Iterator[Nogood]:
        """Every learnable nogood for the given arity, independent of any table."""
        for e in self.entries:
            for combo in itertools.product(e.free, repeat=arity):
                cells = set()
                for x in range(len(e.target)):
                    code = 0
                    for c in combo:
                        code = code * q + c[x]
                    cells.add((code, e.target[x]))
                yield tuple(sorted(cells))


def is_realized(h: ColourFunction, obstructions, max_nodes: Optional[int] = None) -> Optional[RealizednessWitness]:
    """None when ``h`` is realized; otherwise the first violating obstruction and colourings."""
    oracle = obstructions if isinstance(obstructions, RealizednessOracle) else RealizednessOracle(obstructions, max_nodes)
    for w in oracle.witnesses(h):
        return w
    return None


class TableSolver:
    """Finds colour tables avoiding learned nogoods, with merged cells and domain restrictions.

    Nogoods are sets of (cell, value) pairs that must not all hold. Search is
    depth-first with unit propagation and smallest-domain branching.
    """

    def __init__(self, q: int, arity: int, merges: Iterable[Tuple[int, int]] = (),
                 restrict: Optional[Dict[int, Iterable[int]]] = None,
                 max_nodes: Optional[int] = None, max_cells: int = MAX_CELLS) -> None:
        ncells = q ** arity
        if ncells > max_cells:
            raise BudgetExceeded(f"table with {ncells} cells exceeds the cell budget {max_cells}")
        self.q = q
        self.arity = arity
        self.ncells = ncells
        parent = list(range(ncells))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in merges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        reps: Dict[int, int] = {}
        self.cls = [reps.setdefault(find(c), len(reps)) for c in range(ncells)]
        full = (1 << q) - 1
        self.dom0 = [full] * len(reps)
        for cell, vals in (restrict or {}).items():
            mask = 0
            for v in vals:
                mask |= 1 << v
            self.dom0[self.cls[cell]] &= mask
        self.nogoods: List[Tuple[Tuple[int, int], ...]] = []
        self.seen = set()
        self.watch: List[List[int]] = [[] for _ in reps]
        self.inconsistent = any(d == 0 for d in self.dom0)
        self.phase: List[int] = [-1] * len(reps)
        self.counter = Counter(budget("nodes", max_nodes))

    def add_nogood(self, pairs: Iterable[Tuple[int, int]]) -> bool:
        """Add a nogood over cells; returns False when it was already known or is vacuous."""
        by_cls: Dict[int, int] = {}
        for cell, v in pairs:
            c = self.cls[cell]
            if by_cls.setdefault(c, v) != v:
                return False
        ng = tuple(sorted(by_cls.items()))
        if ng in self.seen:
            return False
        self.seen.add(ng)
        if not ng:
            self.inconsistent = True
            return True
        i = len(self.nogoods)
        self.nogoods.append(ng)
        for c, _ in ng:
            self.watch[c].append(i)
        return True

    def solve(self) -> Optional[List[int]]:
        """A value per cell satisfying every nogood and restriction, or None."""
        if self.inconsistent:
            return None
        dom = list(self.dom0)
        trail: List[Tuple[int, int]] = []

        def shrink(c: int, mask: int, queue: List[int]) -> bool:
            trail.append((c, dom[c]))
            dom[c] = mask
            if mask == 0:
                return False
            queue.append(c)
            return True

        def propagate(queue: List[int]) -> bool:
            while queue:
                c = queue.pop()
                for i in self.watch[c]:
                    open_pair = None
                    satisfied = False
                    for cc, v in self.nogoods[i]:
                        d = dom[cc]
                        if not (d >> v) & 1:
                            satisfied = True
                            break
                        if d != 1 << v:
                            if open_pair is not None:
                                satisfied = True
                                break
                            open_pair = (cc, v)
                    if satisfied:
                        continue
                    if open_pair is None:
                        return False
                    oc, ov = open_pair
                    if not shrink(oc, dom[oc] & ~(1 << ov), queue):
                        return False
            return True

        relevant = [c for c in range(len(dom)) if self.watch[c]]
        start = [c for c in range(len(dom)) if dom[c] & (dom[c] - 1) == 0]
        if not propagate(start):
            return None

        def undo(mark: int) -> None:
            while len(trail) > mark:
                c, old = trail.pop()
                dom[c] = old

        def pick() -> int:
            best, key = -1, None
            for c in relevant:
                d = dom[c]
                if d & (d - 1):
                    k = (bin(d).count("1"), -len(self.watch[c]))
                    if key is None or k < key:
                        best, key = c, k
            return best

        def rec() -> bool:
            c = pick()
            if c < 0:
                return True
            d = dom[c]
            vals = [v for v in range(self.q) if (d >> v) & 1]
            if self.phase[c] in vals:
                vals.remove(self.phase[c])
                vals.insert(0, self.phase[c])
            for v in vals:
                self.counter.tick()
                mark = len(trail)
                queue: List[int] = []
                if shrink(c, 1 << v, queue) and propagate(queue) and rec():
                    return True
                undo(mark)
            return False

        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 4 * len(dom) + 1000))
        try:
            if not rec():
                return None
        finally:
            sys.setrecursionlimit(limit)
        values = []
        for c in range(len(dom)):
            d = dom[c]
            v = (d & -d).bit_length() - 1
            self.phase[c] = v
            values.append(v)
        return [values[self.cls[cell]] for cell in range(self.ncells)]


def _cegar(oracle: RealizednessOracle, arity: int, merges: Iterable[Tuple[int, int]] = (),
           restrict: Optional[Dict[int, Iterable[int]]] = None, initial: Iterable[Nogood] = (),
           max_iters: Optional[int] = None, max_nodes: Optional[int] = None,
           batch: int = 2000, certificate: Optional[SearchCertificate] = None) -> Optional[ColourFunction]:
    colours = oracle.colours
    q = len(colours)
    solver = TableSolver(q, arity, merges, restrict, max_nodes)
    cert = certificate if certificate is not None else SearchCertificate()
    for ng in initial:
        solver.add_nogood(ng)
    iters = budget("cegar_iters", max_iters)
    max_clauses = budget("clauses")
    for _ in range(iters):
        cert.iterations += 1
        table = solver.solve()
        if table is None:
            cert.unsat = True
            return None
        h = ColourFunction(colours, arity, tuple(table))
        added = 0
        for w in oracle.witnesses(h):
            if solver.add_nogood(w.nogood):
                cert.nogoods.append(w.nogood)
                added += 1
                if added >= batch:
                    break
        if added == 0:
            if is_realized(h, oracle) is not None:
                raise AssertionError("candidate violates a nogood already learned")
            cert.found = h
            return h
        if len(solver.nogoods) > max_clauses:
            raise BudgetExceeded(f"more than {max_clauses} learned clauses")
    raise BudgetExceeded(f"no decision after {iters} refinement iterations")


def _code(args: Sequence[int], q: int) -> int:
    code = 0
    for a in args:
        code = code * q + a
    return code


def _idempotent_restrictions(q: int, arity: int) -> Dict[int, List[int]]:
    return {_code([m] * arity, q): [m] for m in range(q)}


def _require_precoloured(phi: Sentence) -> None:
    from .precolour import is_precoloured
    if not is_precoloured(phi):
        raise MMSNPError("sentence is not precoloured")


def _oracle(phi: Sentence) -> RealizednessOracle:
    return RealizednessOracle(obstruction_set(phi))


def siggers_identity_pairs(q: int) -> Iterator[Tuple[int, int]]:
    for x, y, z in itertools.product(range(q), repeat=3):
        yield _code((x, y, x, z, y, z), q), _code((y, x, z, x, z, y), q)


def is_siggers(h: ColourFunction) -> bool:
    return h.arity == 6 and all(h.table[a] == h.table[b] for a, b in siggers_identity_pairs(len(h.colours)))


def is_cyclic(h: ColourFunction) -> bool:
    q = len(h.colours)
    return all(h.value(args) == h.value(args[1:] + args[:1])
               for args in itertools.product(range(q), repeat=h.arity))


def is_idempotent(h: ColourFunction) -> bool:
    q = len(h.colours)
    return all(h.value([m] * h.arity) == m for m in range(q))


def siggers_search(phi: Sentence, max_iters: Optional[int] = None, max_nodes: Optional[int] = None,
                   certificate: Optional[SearchCertificate] = None,
                   oracle: Optional[RealizednessOracle] = None) -> Optional[ColourFunction]:
    """A realized idempotent Siggers table, or None when none exists."""
    _require_precoloured(phi)
    oracle = oracle or _oracle(phi)
    q = len(phi.colours)
    return _cegar(oracle, 6, siggers_identity_pairs(q), _idempotent_restrictions(q, 6),
                  max_iters=max_iters, max_nodes=max_nodes, certificate=certificate)


def cyclic_search(phi: Sentence, p: int, max_iters: Optional[int] = None, max_nodes: Optional[int] = None,
                  certificate: Optional[SearchCertificate] = None,
                  oracle: Optional[RealizednessOracle] = None) -> Optional[ColourFunction]:
    """A realized idempotent cyclic table of arity ``p``, or None."""
    if p < 2:
        raise MMSNPError("cyclic arity must be at least 2")
    _require_precoloured(phi)
    oracle = oracle or _oracle(phi)
    q = len(phi.colours)
    merges = [(_code(a, q), _code(a[1:] + a[:1], q)) for a in itertools.product(range(q), repeat=p)]
    return _cegar(oracle, p, merges, _idempotent_restrictions(q, p),
                  max_iters=max_iters, max_nodes=max_nodes, certificate=certificate)


def realized_tables(phi: Sentence, arity: int, oracle: Optional[RealizednessOracle] = None,
                    max_cells: int = 4096) -> Iterator[ColourFunction]:
    """Every realized table of the given arity, in lexicographic order of tables."""
    oracle = oracle or _oracle(phi)
    q = len(phi.colours)
    ncells = q ** arity
    if ncells > max_cells:
        raise BudgetExceeded(f"{ncells} cells is too many for exhaustive enumeration")
    by_last: List[List[Nogood]] = [[] for _ in range(ncells)]
    for ng in set(oracle.nogoods(q, arity)):
        cells = {c for c, _ in ng}
        if len(cells) == len(ng):
            by_last[max(cells)].append(ng)
    table = [0] * ncells

    def rec(c: int) -> Iterator[ColourFunction]:
        if c == ncells:
            yield ColourFunction(oracle.colours, arity, tuple(table))
            return
        for v in range(q):
            table[c] = v
            if all(any(table[cc] != vv for cc, vv in ng) for ng in by_last[c]):
                yield from rec(c + 1)

    yield from rec(0)


def realized_idempotency_check(phi: Sentence, max_colours: int = 3) -> bool:
    """Whether every realized binary table is idempotent (exhaustive)."""
    _require_precoloured(phi)
    if len(phi.colours) > max_colours:
        raise BudgetExceeded(f"exhaustive binary enumeration is limited to {max_colours} colours")
    return all(is_idempotent(h) for h in realized_tables(phi, 2))


def _candidate_subfactors(colours: Sequence[str]) -> Iterator[Subfactor]:
    for size in range(2, len(colours) + 1):
        for rho in itertools.combinations(colours, size):
            rest = rho[1:]
            for k in range(0, len(rest)):
                for extra in itertools.combinations(rest, k):
                    s = (rho[0],) + extra
                    t = tuple(c for c in rho if c not in s)
                    yield Subfactor(rho, s, t)


def _post_patterns(s: int, t: int) -> List[Tuple[int, Dict[Tuple[int, ...], str]]]:
    """Binary and ternary behaviours on two blocks that make the induced clone nontrivial."""
    meet = {(s, t): "S", (t, s): "S"}
    join = {(s, t): "T", (t, s): "T"}
    maj = {(s, s, t): "S", (s, t, s): "S", (t, s, s): "S", (t, t, s): "T", (t, s, t): "T", (s, t, t): "T"}
    mino = {(s, s, t): "T", (s, t, s): "T", (t, s, s): "T", (t, t, s): "S", (t, s, t): "S", (s, t, t): "S"}
    return [(2, meet), (2, join), (3, maj), (3, mino)]


def _subfactor_checks(oracle: RealizednessOracle, sf: Subfactor, stats: Dict[str, int],
                      max_iters: Optional[int], max_nodes: Optional[int]) -> bool:
    colours = oracle.colours
    q = len(colours)
    idx = {c: i for i, c in enumerate(colours)}
    rho = [idx[c] for c in sf.rho]
    blocks = {idx[c]: 0 for c in sf.S}
    blocks.update({idx[c]: 1 for c in sf.T})

    def run(arity: int, restrict: Dict[int, Iterable[int]], initial: Iterable[Nogood] = ()) -> bool:
        r = dict(_idempotent_restrictions(q, arity))
        for cell, vals in restrict.items():
            r[cell] = [v for v in vals if v in r.get(cell, range(q))]
        cert = SearchCertificate()
        found = _cegar(oracle, arity, (), r, initial, max_iters, max_nodes, certificate=cert)
        stats["subfactor_iterations"] = stats.get("subfactor_iterations", 0) + cert.iterations
        return found is not None

    # (i) the carrier is closed under every realized function
    if len(rho) < q:
        outside = [v for v in range(q) if v not in rho]
        if run(len(rho), {_code(rho, q): outside}):
            return False
    # (ii) the two-block equivalence is preserved
    theta = [(a, b) for a in rho for b in rho if blocks[a] == blocks[b]]
    if len(theta) > len(rho):
        cell_a = _code([a for a, _ in theta], q)
        cell_b = _code([b for _, b in theta], q)
        same = [((cell_a, u), (cell_b, v)) for u, v in theta]
        if run(len(theta), {cell_a: rho, cell_b: rho}, same):
            return False
    # (iii) the induced two-element clone has only projections
    s, t = idx[sf.S[0]], idx[sf.T[0]]
    block_vals = {"S": [idx[c] for c in sf.S], "T": [idx[c] for c in sf.T]}
    for arity, pattern in _post_patterns(s, t):
        if run(arity, {_code(args, q): block_vals[b] for args, b in pattern.items()}):
            return False
    return True


def trivial_subfactor_search(phi: Sentence, max_colours: int = MAX_SUBFACTOR_COLOURS,
                             max_iters: Optional[int] = None, max_nodes: Optional[int] = None,
                             stats: Optional[Dict[str, int]] = None,
                             oracle: Optional[RealizednessOracle] = None) -> Optional[Subfactor]:
    """The first carrier with a two-block partition on which the realized clone acts trivially."""
    _require_precoloured(phi)
    if len(phi.colours) > max_colours:
        raise BudgetExceeded(f"subfactor search is limited to {max_colours} colours")
    oracle = oracle or _oracle(phi)
    stats = stats if stats is not None else {}
    for sf in _candidate_subfactors(phi.colours):
        if _subfactor_checks(oracle, sf, stats, max_iters, max_nodes):
            return sf
    return None


def classify_precoloured(phi: Sentence, max_iters: Optional[int] = None,
                         max_nodes: Optional[int] = None) -> ComponentResult:
    """Decide one precoloured component; both search paths run and must agree."""
    _require_precoloured(phi)
    oracle = _oracle(phi)
    cert = SearchCertificate()
    siggers = siggers_search(phi, max_iters, max_nodes, certificate=cert, oracle=oracle)
    stats: Dict[str, object] = {"colours": len(phi.colours), "cegar_iterations": cert.iterations,
                                "learned_clauses": len(cert.nogoods)}
    sub_stats: Dict[str, int] = {}
    sub = trivial_subfactor_search(phi, max_iters=max_iters, max_nodes=max_nodes,
                                   stats=sub_stats, oracle=oracle)
    stats.update(sub_stats)
    if (siggers is None) == (sub is None):
        raise InconsistentClassification(
            "Siggers search and subfactor search disagree: "
            f"siggers={'found' if siggers else 'none'}, subfactor={sub}")
    if siggers is not None:
        return ComponentResult(phi, "P", siggers, stats)
    return ComponentResult(phi, "NP-complete", sub, stats)


def prepare_component(phi: Sentence) -> Sentence:
    """Normal form, then strong normal form, then the standard precolouration."""
    from .precolour import standard_precolouration
    from .recolour import strong_normal_form
    snf = strong_normal_form(normalize(phi))
    return standard_precolouration(snf, check=False)


def _prune_contained(components: List[Sentence]) -> List[Sentence]:
    from .recolour import contains
    keep = []
    for i, a in enumerate(components):
        redundant = False
        for j, b in enumerate(components):
            if i == j:
                continue
            if contains(a, b, max_counterexample=0).holds:
                # mutual containment keeps the earlier one
                if j < i or not contains(b, a, max_counterexample=0).holds:
                    redundant = True
                    break
        if not redundant:
            keep.append(a)
    return keep


def classify(phi: Sentence, max_iters: Optional[int] = None, max_nodes: Optional[int] = None) -> ClassificationReport:
    """Classify an arbitrary sentence component by component."""
    comps = [normalize(c) for c in decompose_connected(phi)]
    comps = _prune_contained(comps)
    results = []
    for c in comps:
        results.append(classify_precoloured(prepare_component(c), max_iters, max_nodes))
    hard = any(r.verdict == "NP-complete" for r in results)
    caveats = []
    if hard and len(results) > 1:
        caveats.append("several components remain after pairwise pruning; hardness of the disjunction "
                       "assumes no component is redundant against the union of the others")
    return ClassificationReport(tuple(results), "NP-complete" if hard else "P", tuple(caveats))
