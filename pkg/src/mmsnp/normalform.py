"""Connected decomposition, normal-form rewriting, obstruction sets.

A sentence is in normal form when

1. one clause forbids an element carrying no colour,
2. one clause per pair of colours forbids an element carrying both,
3. every other clause gives each variable exactly one positive colour,
4. every other clause is biconnected on its input atoms,
5. any structure with at most ``k`` elements satisfying the clauses with at
   most ``k`` variables satisfies all clauses.

The rewriting keeps every clause as a core and prunes clauses implied by a
clause with no more variables; both steps preserve equivalence and item 5.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .core import (BudgetExceeded, Clause, Counter, FinStructure, MMSNPError, Sentence, Signature,
                   _canonical_perm, _encode, budget, clause_key, set_partitions)
from .homsearch import _Source, _Target, _search, hom_exists


# clause <-> structure ---------------------------------------------------

def _literal_symbol(colour: str, positive: bool) -> str:
    return ("+" if positive else "-") + colour


def clause_structure(cl: Clause, tau: Signature, literal_relations: bool = False) -> FinStructure:
    """Canonical database of a clause.

    With ``literal_relations`` every literal becomes a unary relation (used for
    cores of clauses with negative literals); otherwise positive literals become
    the colouring, which needs at most one per variable.
    """
    names = cl.names if len(cl.names) == cl.num_vars else tuple(f"x{i}" for i in cl.variables)
    rels: Dict[str, set] = {s: set() for s in tau.names}
    for s, args in cl.atoms:
        rels[s].add(args)
    if literal_relations:
        extra = sorted({_literal_symbol(c, p) for c, _, p in cl.literals})
        sig = tau.extend((e, 1) for e in extra)
        for c, v, p in cl.literals:
            rels.setdefault(_literal_symbol(c, p), set()).add((v,))
        return FinStructure(sig, names, {s: frozenset(t) for s, t in rels.items()})
    col: List[Optional[str]] = [None] * cl.num_vars
    for c, v, p in cl.literals:
        if not p:
            raise MMSNPError("negative literal in a coloured obstruction")
        if col[v] is not None and col[v] != c:
            raise MMSNPError("variable carries two colours")
        col[v] = c
    return FinStructure(tau, names, {s: frozenset(t) for s, t in rels.items()}, tuple(col))


def _structure_clause(a: FinStructure, tau: Signature) -> Clause:
    atoms = [(s, t) for s, ts in a.relations.items() if s in tau for t in ts]
    lits = []
    for s, ts in a.relations.items():
        if s not in tau:
            for (v,) in ts:
                lits.append((s[1:], v, s[0] == "+"))
    for v, c in enumerate(a.colouring):
        if c is not None:
            lits.append((c, v, True))
    return Clause.build(atoms, lits, a.names)


def clause_core(cl: Clause, tau: Signature) -> Clause:
    """Smallest clause equivalent to ``cl``: the core of its canonical database."""
    if cl.num_vars <= 1:
        return cl
    a = clause_structure(cl, tau, literal_relations=True)
    counter = Counter(budget("nodes"))
    shrunk = False
    while True:
        src, tgt = _Source(a), _Target(a)
        for v in a.elements:
            allowed = frozenset(e for e in a.elements if e != v)
            if next(_search(src, tgt, a.colouring, None, counter, allowed), None) is not None:
                a = a.induced(sorted(allowed))
                shrunk = True
                break
        else:
            break
    return _structure_clause(a, tau) if shrunk else cl


# connectivity ---------------------------------------------------------------

def clause_components(cl: Clause) -> List[Set[int]]:
    """Gaifman components; a variable used only in literals is its own component."""
    parent = list(cl.variables)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, args in cl.atoms:
        for v in args[1:]:
            ra, rb = find(args[0]), find(v)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: Dict[int, Set[int]] = {}
    for v in cl.variables:
        groups.setdefault(find(v), set()).add(v)
    return [groups[k] for k in sorted(groups)]


def is_connected_sentence(phi: Sentence) -> bool:
    return all(len(clause_components(c)) <= 1 for c in phi.clauses)


def _restrict(cl: Clause, vars_: Set[int], atoms: Optional[Iterable] = None) -> Clause:
    at = [a for a in cl.atoms if set(a[1]) <= vars_] if atoms is None else list(atoms)
    lits = [l for l in cl.literals if l[1] in vars_]
    return Clause.build(at, lits, cl.names)


def decompose_connected(phi: Sentence) -> List[Sentence]:
    """Connected sentences whose disjunction is equivalent to ``phi``."""
    choices: List[List[Clause]] = []
    for cl in phi.clauses:
        comps = clause_components(cl)
        choices.append([_restrict(cl, comp) for comp in comps])
    out = []
    seen = set()
    for pick in itertools.product(*choices):
        key = tuple(pick)
        if key in seen:
            continue
        seen.add(key)
        out.append(phi.with_clauses(pick))
    return out


def find_cut(cl: Clause) -> Optional[Tuple[Optional[int], List, List]]:
    """A partition of the atoms into two nonempty parts sharing at most one variable."""
    atoms = list(cl.atoms)
    if len(atoms) < 2:
        return None
    for cut in [None] + list(cl.variables):
        parent = list(range(len(atoms)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        by_var: Dict[int, int] = {}
        for i, (_, args) in enumerate(atoms):
            for v in args:
                if v == cut:
                    continue
                if v in by_var:
                    ra, rb = find(by_var[v]), find(i)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
                else:
                    by_var[v] = i
        roots = {find(i) for i in range(len(atoms))}
        if len(roots) > 1:
            first = find(0)
            part1 = [a for i, a in enumerate(atoms) if find(i) == first]
            part2 = [a for i, a in enumerate(atoms) if find(i) != first]
            return cut, part1, part2
    return None


def is_biconnected(cl: Clause) -> bool:
    return find_cut(cl) is None


def _fresh(taken: Set[str], prefix: str) -> str:
    i = 1
    while f"{prefix}{i}" in taken:
        i += 1
    name = f"{prefix}{i}"
    taken.add(name)
    return name


class _Rewriter:
    """Mutable state for the uncoloured phase: predicate list and clause set."""

    def __init__(self, phi: Sentence, max_clauses: Optional[int]) -> None:
        self.tau = phi.tau
        self.preds: List[str] = list(phi.colours)
        self.taken: Set[str] = set(phi.tau.names) | set(phi.colours)
        self.clauses: Dict[tuple, Clause] = {}
        self.order: List[tuple] = []
        self.limit = budget("clauses", max_clauses)

    def add(self, cl: Clause) -> List[Clause]:
        """Core, split if needed, and insert; returns the clauses actually inserted."""
        if cl.is_contradictory():
            return []
        cl = clause_core(cl, self.tau)
        if len(clause_components(cl)) > 1:
            raise MMSNPError("clause is not connected; decompose the sentence first")
        cut = find_cut(cl)
        if cut is None:
            key = clause_key(cl)
            if key in self.clauses:
                return []
            if len(self.clauses) >= self.limit:
                from .core import BudgetExceeded
                raise BudgetExceeded(f"clause budget of {self.limit} exceeded")
            self.clauses[key] = cl
            self.order.append(key)
            return [cl]
        x, part1, part2 = cut
        if x is None:
            raise MMSNPError("clause is not connected; decompose the sentence first")
        p = _fresh(self.taken, "P")
        self.preds.append(p)
        v1 = {v for _, args in part1 for v in args}
        v2 = {v for _, args in part2 for v in args}
        c1 = Clause.build(part1, [l for l in cl.literals if l[1] in v1] + [(p, x, True)], cl.names)
        c2 = Clause.build(part2, [l for l in cl.literals if l[1] in v2] + [(p, x, False)], cl.names)
        return self.add(c1) + self.add(c2)

    def sentence(self) -> Sentence:
        return Sentence(self.tau, tuple(self.preds), tuple(self.clauses[k] for k in self.order))


def _identifications(cl: Clause) -> Iterable[Clause]:
    """Clauses obtained by merging one set of at least two variables."""
    n = cl.num_vars
    for size in range(2, n + 1):
        for group in itertools.combinations(range(n), size):
            rep = group[0]
            m = {v: (rep if v in group else v) for v in range(n)}
            atoms = [(s, tuple(m[v] for v in args)) for s, args in cl.atoms]
            lits = [(c, m[v], p) for c, v, p in cl.literals]
            yield Clause.build(atoms, lits, cl.names)


def biconnected_split(phi: Sentence, max_clauses: Optional[int] = None) -> Sentence:
    """Replace every clause by cores of biconnected parts, adding one predicate per cut."""
    rw = _Rewriter(phi, max_clauses)
    for cl in phi.clauses:
        rw.add(cl)
    return rw.sentence()


def close_small_clauses(phi: Sentence, max_clauses: Optional[int] = None) -> Sentence:
    """Add the cores of all variable identifications until nothing new appears."""
    rw = _Rewriter(phi, max_clauses)
    queue: List[Clause] = []
    for cl in phi.clauses:
        queue.extend(rw.add(cl))
    while queue:
        cl = queue.pop(0)
        for ident in _identifications(cl):
            queue.extend(rw.add(ident))
    return rw.sentence()


def prune_uncoloured(phi: Sentence) -> Sentence:
    """Drop clauses into which another clause with no more variables maps, then unused predicates."""
    clauses = sorted(phi.clauses, key=lambda c: (c.num_vars, clause_key(c)))
    structs = [clause_structure(c, phi.tau, literal_relations=True) for c in clauses]
    kept: List[int] = []
    for i, c in enumerate(clauses):
        a = structs[i]
        implied = any(clauses[j].num_vars <= c.num_vars and _literal_hom(structs[j], a) for j in kept)
        if not implied:
            kept.append(i)
    out = [clauses[i] for i in kept]
    used = {l[0] for cl in out for l in cl.literals}
    preds = tuple(p for p in phi.colours if p in used)
    return Sentence(phi.tau, preds, tuple(out))


def _literal_hom(d: FinStructure, c: FinStructure) -> bool:
    for s, ts in d.relations.items():
        if ts and not c.relations.get(s):
            return False
    for _ in _all_homs(d, c):
        return True
    return False


# colours ---------------------------------------------------------------------

def _pure_unary(cl: Clause) -> bool:
    return not cl.atoms and cl.num_vars == 1


def _live_subsets(preds: Sequence[str], clauses: Iterable[Clause]) -> List[frozenset]:
    """Subsets of predicates not forbidden outright by an atom-free one-variable clause."""
    unary = [cl for cl in clauses if _pure_unary(cl)]
    live = []
    for r in range(len(preds) + 1):
        for combo in itertools.combinations(preds, r):
            s = frozenset(combo)
            if not any(all((c in s) == p for c, _, p in cl.literals) for cl in unary):
                live.append(s)
    return live


def _subset_names(preds: Sequence[str], live: Sequence[frozenset], taken: Set[str]) -> Dict[frozenset, str]:
    if live and all(len(s) == 1 for s in live):
        return {s: next(iter(s)) for s in live}
    names: Dict[frozenset, str] = {}
    taken = set(taken) - set(preds)
    for s in live:
        names[s] = _fresh(taken, "M")
    return names


def _first_conjunct(colours: Sequence[str]) -> Clause:
    return Clause.build([], [(c, 0, False) for c in colours], ["x"])


def _item2(colours: Sequence[str]) -> List[Clause]:
    return [Clause.build([], [(a, 0, True), (b, 0, True)], ["x"])
            for a, b in itertools.combinations(colours, 2)]


def predicates_to_colours(phi: Sentence) -> Sentence:
    """Recast predicates as colours, one colour per live subset of predicates.

    Literals become positive colour literals listing the admissible colours; a
    clause whose variable admits several colours is kept with a marker and
    expanded by :func:`fully_colour`.
    """
    preds = list(phi.colours)
    limit = budget("colours")
    if 2 ** len(preds) > 64 * limit:
        raise BudgetExceeded(f"{len(preds)} predicates exceed the colour budget of {limit}")
    live = _live_subsets(preds, phi.clauses)
    if len(live) > limit:
        raise BudgetExceeded(f"{len(live)} colours exceed the colour budget of {limit}")
    if not live:
        dead = _fresh(set(phi.tau.names), "M")
        return Sentence(phi.tau, (dead,), (_first_conjunct([dead]), Clause.build([], [(dead, 0, True)], ["x"])))
    names = _subset_names(preds, live, set(phi.tau.names) | set(preds))
    colours = tuple(names[s] for s in live)
    out: List[Clause] = [_first_conjunct(colours)] + _item2(colours)
    for cl in phi.clauses:
        if _pure_unary(cl):
            continue
        out.append(_GroupedClause.of(cl, live, names).to_clause())
    return Sentence(phi.tau, colours, tuple(_dedup(out)))


class _GroupedClause:
    """Clause whose variables carry sets of admissible colours (encoded with a marker literal)."""

    MARK = "\x00"

    @staticmethod
    def of(cl: Clause, live: Sequence[frozenset], names: Dict[frozenset, str]) -> "_GroupedClause":
        g = _GroupedClause()
        g.atoms = cl.atoms
        g.names = cl.names
        g.options: List[List[str]] = []
        for v in cl.variables:
            lits = cl.literals_on(v)
            g.options.append([names[s] for s in live if all((c in s) == p for c, p in lits)])
        return g

    def to_clause(self) -> Clause:
        lits = []
        for v, opts in enumerate(self.options):
            if len(opts) == 1:
                lits.append((opts[0], v, True))
            else:
                # marker keeps the admissible set until full colouring
                lits.append((self.MARK + ",".join(opts), v, True))
        return Clause.build(self.atoms, lits, self.names)


def fully_colour(phi: Sentence) -> Sentence:
    """Expand every clause into one clause per admissible colour of each variable."""
    colours = set(phi.colours)
    limit = budget("clauses")
    out: List[Clause] = []
    for cl in phi.clauses:
        if _pure_unary(cl) and any(not p for _, _, p in cl.literals):
            out.append(cl)
            continue
        if _pure_unary(cl) and len(cl.literals) == 2:
            out.append(cl)
            continue
        options: List[List[str]] = []
        for v in cl.variables:
            lits = cl.literals_on(v)
            marked = [c for c, p in lits if c.startswith(_GroupedClause.MARK)]
            if marked:
                opts = marked[0][1:].split(",")
                opts = [o for o in opts if o]
            else:
                pos = [c for c, p in lits if p]
                neg = [c for c, p in lits if not p]
                opts = [c for c in phi.colours if (not pos or pos == [c]) and c not in neg]
                if len(set(pos)) > 1:
                    opts = []
            options.append(opts)
        size = 1
        for o in options:
            size *= len(o)
        if len(out) + size > limit:
            raise BudgetExceeded(f"full colouring exceeds the clause budget of {limit}")
        for combo in itertools.product(*options):
            lits = [(c, v, True) for v, c in enumerate(combo)]
            out.append(Clause.build(cl.atoms, lits, cl.names))
    for c in (l[0] for cl in out for l in cl.literals):
        if c not in colours:
            raise MMSNPError(f"unknown colour {c}")
    return phi.with_clauses(_dedup(out))


def _dedup(clauses: Iterable[Clause]) -> List[Clause]:
    seen = set()
    out = []
    for cl in clauses:
        k = clause_key(cl)
        if k not in seen:
            seen.add(k)
            out.append(cl)
    return out


# coloured clause subsumption ----------------------------------------------------

def _shape(cl: Clause) -> Tuple[Clause, Tuple[str, ...]]:
    """Atoms-only canonical clause plus the colour vector in its numbering."""
    n = cl.num_vars
    perm = _canonical_perm(n, cl.atoms, [])
    atoms, _ = _encode(perm, cl.atoms, [])
    vec = [""] * n
    for v in range(n):
        vec[perm[v]] = cl.colour_of(v) or ""
    return Clause(atoms, ()), tuple(vec)


def _rels(sig: Signature, atoms: Sequence) -> Dict[str, frozenset]:
    rels: Dict[str, set] = {s: set() for s in sig.names}
    for s, args in atoms:
        rels[s].add(args)
    return {s: frozenset(t) for s, t in rels.items()}


def _all_homs(a: FinStructure, b: FinStructure) -> Iterable[List[int]]:
    counter = Counter(budget("nodes"))
    return _search(_Source(a), _Target(b), b.colouring, None, counter)


def prune_subsumed(phi: Sentence) -> Sentence:
    """Drop coloured clauses implied by an earlier clause with no more variables."""
    special = [cl for cl in phi.clauses if _pure_unary(cl)]
    rest = [cl for cl in phi.clauses if not _pure_unary(cl)]
    rest.sort(key=lambda c: (c.num_vars, clause_key(c)))
    shapes: Dict[tuple, Clause] = {}
    entries = []
    for cl in rest:
        plain, vec = _shape(cl)
        k = clause_key(plain)
        shapes[k] = plain
        entries.append((cl, k, vec))
    sig = phi.tau
    struct = {k: clause_structure(p, sig) for k, p in shapes.items()}
    hom_cache: Dict[Tuple[tuple, tuple], List[List[int]]] = {}

    def homs(kd: tuple, kc: tuple) -> List[List[int]]:
        if (kd, kc) not in hom_cache:
            hom_cache[(kd, kc)] = list(_all_homs(struct[kd], struct[kc]))
        return hom_cache[(kd, kc)]

    present: Dict[tuple, Dict[tuple, int]] = {}
    kept: List[Clause] = []
    for idx, (cl, k, vec) in enumerate(entries):
        implied = False
        for kd, vecs in present.items():
            if shapes[kd].num_vars > cl.num_vars:
                continue
            for h in homs(kd, k):
                if tuple(vec[h[v]] for v in range(len(h))) in vecs:
                    implied = True
                    break
            if implied:
                break
        present.setdefault(k, {})[vec] = idx
        if not implied:
            kept.append(cl)
    return phi.with_clauses(special + kept)


# full pipeline ---------------------------------------------------------------

def _is_colour_shaped(phi: Sentence) -> bool:
    """Items 1-3 hold syntactically."""
    return not structural_diagnostics(phi, items=(1, 2, 3))


def normalize(phi: Sentence, max_clauses: Optional[int] = None) -> Sentence:
    """An equivalent sentence in normal form; ``phi`` must be connected."""
    if not is_connected_sentence(phi):
        raise MMSNPError("normalize needs a connected sentence; decompose it first")
    if _is_colour_shaped(phi) and not structural_diagnostics(phi) and not item5_witnesses(phi, first_only=True):
        return _sort_sentence(prune_subsumed(phi))
    stage = biconnected_split(phi, max_clauses)
    stage = close_small_clauses(stage, max_clauses)
    stage = prune_uncoloured(stage)
    stage = predicates_to_colours(stage)
    stage = fully_colour(stage)
    stage = _recolour_closure(stage, max_clauses)
    stage = prune_subsumed(stage)
    return _sort_sentence(stage)


def _recolour_closure(phi: Sentence, max_clauses: Optional[int]) -> Sentence:
    """Close coloured clauses under identification of equally coloured variables."""
    limit = budget("clauses", max_clauses)
    known: Dict[tuple, Clause] = {clause_key(c): c for c in phi.clauses}
    queue = [c for c in phi.clauses if not _pure_unary(c)]
    while queue:
        cl = queue.pop()
        for ident in _identifications(cl):
            if any(len({c for c, _ in ident.literals_on(v)}) > 1 for v in ident.variables):
                continue
            core = clause_core(ident, phi.tau)
            if not is_biconnected(core):
                continue
            k = clause_key(core)
            if k not in known:
                if len(known) >= limit:
                    raise BudgetExceeded(f"clause budget of {limit} exceeded")
                known[k] = core
                queue.append(core)
    return phi.with_clauses(known.values())


def _sort_sentence(phi: Sentence) -> Sentence:
    """First conjunct, then colour-pair clauses, then the rest by size and canonical key."""
    cols = phi.colours
    first = [c for c in phi.clauses if _pure_unary(c) and all(not p for _, _, p in c.literals)]
    pairs = [c for c in phi.clauses if _pure_unary(c) and len(c.literals) == 2 and all(p for _, _, p in c.literals)]
    rest = [c for c in phi.clauses if c not in first and c not in pairs]
    order = {c: i for i, c in enumerate(cols)}
    pairs.sort(key=lambda c: sorted(order.get(l[0], -1) for l in c.literals))
    rest.sort(key=lambda c: (c.num_vars, len(c.atoms), clause_key(c)))
    return phi.with_clauses(first + pairs + rest)


# validation ---------------------------------------------------------------

def is_first_conjunct(cl: Clause, colours: Sequence[str]) -> bool:
    return (_pure_unary(cl) and all(not p for _, _, p in cl.literals)
            and sorted(c for c, _, _ in cl.literals) == sorted(colours))


def _is_item2(cl: Clause) -> bool:
    return (_pure_unary(cl) and len(cl.literals) == 2 and all(p for _, _, p in cl.literals))


def obstruction_clauses(phi: Sentence) -> List[Clause]:
    return [c for c in phi.clauses if not is_first_conjunct(c, phi.colours) and not _is_item2(c)]


def structural_diagnostics(phi: Sentence, items: Sequence[int] = (1, 2, 3, 4)) -> List[str]:
    """Items 1-4 of the normal form, checked syntactically."""
    out: List[str] = []
    cols = phi.colours
    if 1 in items:
        if not cols:
            out.append("item 1: no colours")
        elif not any(is_first_conjunct(c, cols) for c in phi.clauses):
            out.append("item 1: missing clause forbidding uncoloured elements")
    if 2 in items:
        have = {frozenset(l[0] for l in c.literals) for c in phi.clauses if _is_item2(c)}
        for a, b in itertools.combinations(cols, 2):
            if frozenset((a, b)) not in have:
                out.append(f"item 2: missing clause forbidding {a} and {b} together")
    for i, cl in enumerate(phi.clauses):
        if is_first_conjunct(cl, cols) or _is_item2(cl):
            continue
        if 3 in items:
            for v in cl.variables:
                lits = cl.literals_on(v)
                if len(lits) != 1 or not lits[0][1]:
                    out.append(f"item 3: clause {i} does not give variable {cl.names[v]} exactly one colour")
                    break
        if 4 in items and not is_biconnected(cl):
            out.append(f"item 4: clause {i} is not biconnected")
    return out


def item5_witnesses(phi: Sentence, size_cap: Optional[int] = None,
                    first_only: bool = False) -> List[Tuple[Clause, FinStructure]]:
    """Small structures violating a clause while satisfying every clause no larger than themselves.

    Candidates are quotients of clause databases, largest first.
    """
    clauses = obstruction_clauses(phi)
    usable = []
    for c in clauses:
        try:
            usable.append((c, clause_structure(c, phi.tau)))
        except MMSNPError:
            usable.append((c, clause_structure(c, phi.tau, literal_relations=True)))
    out = []
    for cl, db in usable:
        n = len(db)
        seen = set()
        for blocks in set_partitions(list(db.elements)):
            k = len(blocks)
            if k == n or (size_cap is not None and k > size_cap):
                continue
            if any(len({db.colouring[e] for e in b}) > 1 for b in blocks):
                continue
            m = [0] * n
            for i, b in enumerate(blocks):
                for e in b:
                    m[e] = i
            q = db.image(m, k)
            qkey = clause_key(_structure_clause(q, phi.tau))
            if qkey in seen:
                continue
            seen.add(qkey)
            smaller = [s for c2, s in usable if c2.num_vars <= k and s.signature == q.signature]
            if all(hom_exists(s, q) is None for s in smaller):
                out.append((cl, q))
                if first_only:
                    return out
                break
    return out


def validate_normal_form(phi: Sentence, size_cap: Optional[int] = None) -> List[str]:
    """Diagnostics for the five normal-form items; empty when in normal form."""
    out = structural_diagnostics(phi)
    for cl, q in item5_witnesses(phi, size_cap):
        from .textio import format_clause, print_structure
        out.append(f"item 5: a {len(q)}-element structure violates {format_clause(cl)} "
                   f"but no clause with at most {len(q)} variables: "
                   + " ".join(print_structure(q).split()))
    return out


def is_normal_form(phi: Sentence) -> bool:
    return not validate_normal_form(phi)


@dataclass(frozen=True)
class ObstructionSet:
    colours: Tuple[str, ...]
    structures: Tuple[FinStructure, ...]


def obstruction_set(phi: Sentence) -> ObstructionSet:
    """Canonical databases of the coloured clauses other than items 1 and 2."""
    return ObstructionSet(phi.colours, tuple(clause_structure(c, phi.tau) for c in obstruction_clauses(phi)))


def sentence_size(phi: Sentence) -> int:
    return max([1] + [c.num_vars for c in phi.clauses])
