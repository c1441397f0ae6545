"""Data model: signatures, clauses, sentences, finite coloured structures.

Variables of a clause and elements of a structure are dense integers
``0..n-1``; display names live in a side table and never take part in
equality.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Atom = Tuple[str, Tuple[int, ...]]
Literal = Tuple[str, int, bool]


class BudgetExceeded(RuntimeError):
    """A search engine hit its configured resource limit."""


class MMSNPError(ValueError):
    """Invalid input or violated precondition."""


_DEFAULT_BUDGETS = {
    "nodes": 2_000_000,
    "clauses": 50_000,
    "cegar_iters": 5_000,
    "colours": 64,
}


def budget(name: str, override: Optional[int] = None) -> int:
    """Resolve a budget: explicit override, then ``MMSNP_BUDGET_<NAME>``, then default."""
    if override is not None:
        return override
    env = os.environ.get("MMSNP_BUDGET_" + name.upper())
    if env:
        return int(env)
    return _DEFAULT_BUDGETS[name]


class Counter:
    """Node counter raising :class:`BudgetExceeded` past a limit."""

    __slots__ = ("limit", "count", "what")

    def __init__(self, limit: int, what: str = "search nodes") -> None:
        self.limit = limit
        self.count = 0
        self.what = what

    def tick(self, n: int = 1) -> None:
        self.count += n
        if self.count > self.limit:
            raise BudgetExceeded(f"{self.what} budget of {self.limit} exceeded")


@dataclass(frozen=True)
class Signature:
    symbols: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        names = [n for n, _ in self.symbols]
        if len(set(names)) != len(names):
            raise MMSNPError("duplicate symbol in signature")
        for name, arity in self.symbols:
            if arity < 1:
                raise MMSNPError(f"symbol {name} has arity {arity}; arity must be at least 1")

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.symbols)

    def arity(self, name: str) -> int:
        for n, a in self.symbols:
            if n == name:
                return a
        raise KeyError(name)

    def __contains__(self, name: object) -> bool:
        return any(n == name for n, _ in self.symbols)

    def extend(self, extra: Iterable[Tuple[str, int]]) -> "Signature":
        return Signature(self.symbols + tuple(extra))

    def union(self, other: "Signature") -> "Signature":
        merged = list(self.symbols)
        for name, arity in other.symbols:
            if name in self:
                if self.arity(name) != arity:
                    raise MMSNPError(f"signature mismatch on {name}")
            else:
                merged.append((name, arity))
        return Signature(tuple(merged))


@dataclass(frozen=True)
class Clause:
    """A negated conjunct: the clause forbids ``atoms`` and ``literals`` holding together."""

    atoms: Tuple[Atom, ...]
    literals: Tuple[Literal, ...]
    names: Tuple[str, ...] = field(default=(), compare=False, hash=False)

    @staticmethod
    def build(atoms: Iterable[Atom], literals: Iterable[Literal] = (),
              names: Optional[Sequence[str]] = None) -> "Clause":
        """Build a clause in canonical variable numbering (equal clauses are equal up to renaming)."""
        # duplicates would skew refinement labels
        atoms = list(dict.fromkeys(atoms))
        literals = list(dict.fromkeys(literals))
        order: Dict[int, int] = {}
        for _, args in atoms:
            for v in args:
                order.setdefault(v, len(order))
        for _, v, _ in literals:
            order.setdefault(v, len(order))
        dense_atoms = [(s, tuple(order[v] for v in args)) for s, args in atoms]
        dense_lits = [(c, order[v], pos) for c, v, pos in literals]
        if names is None:
            dense_names = tuple(_default_var_name(i) for i in range(len(order)))
        else:
            inverse = {new: old for old, new in order.items()}
            dense_names = tuple(names[inverse[i]] for i in range(len(order)))
        perm = _canonical_perm(len(order), dense_atoms, dense_lits)
        a, l = _encode(perm, dense_atoms, dense_lits)
        out_names = [""] * len(order)
        for old, new in enumerate(perm):
            out_names[new] = dense_names[old]
        return Clause(a, l, _dedupe_names(out_names))

    def __post_init__(self) -> None:
        if not self.names:
            object.__setattr__(self, "names", tuple(_default_var_name(i) for i in range(self.num_vars)))

    @property
    def num_vars(self) -> int:
        used = {v for _, args in self.atoms for v in args} | {v for _, v, _ in self.literals}
        return len(used)

    @property
    def variables(self) -> range:
        return range(self.num_vars)

    def colour_of(self, v: int) -> Optional[str]:
        """The unique positive colour literal on ``v``, if exactly one exists."""
        pos = [c for c, w, p in self.literals if w == v and p]
        return pos[0] if len(pos) == 1 else None

    def literals_on(self, v: int) -> List[Tuple[str, bool]]:
        return [(c, p) for c, w, p in self.literals if w == v]

    def is_contradictory(self) -> bool:
        """True when some variable carries both P and not-P; such a clause is never violated."""
        lits = set(self.literals)
        return any((c, v, not p) in lits for c, v, p in self.literals)

    def rename_colours(self, mapping: Mapping[str, str]) -> "Clause":
        return Clause.build(self.atoms, [(mapping.get(c, c), v, p) for c, v, p in self.literals], self.names)


def _default_var_name(i: int) -> str:
    base = "xyzuvw"
    return base[i] if i < len(base) else f"x{i}"


@dataclass(frozen=True)
class Sentence:
    """``exists colours forall vars: AND of forbidden conjuncts``."""

    tau: Signature
    colours: Tuple[str, ...]
    clauses: Tuple[Clause, ...]

    def __post_init__(self) -> None:
        if len(set(self.colours)) != len(self.colours):
            raise MMSNPError("duplicate colour")
        clash = set(self.colours) & set(self.tau.names)
        if clash:
            raise MMSNPError(f"colour names clash with input symbols: {sorted(clash)}")

    def with_clauses(self, clauses: Iterable[Clause]) -> "Sentence":
        return Sentence(self.tau, self.colours, tuple(clauses))


@dataclass(frozen=True, eq=False)
class FinStructure:
    """Finite relational structure with a partial colouring (one colour per element at most)."""

    signature: Signature
    names: Tuple[str, ...]
    relations: Mapping[str, FrozenSet[Tuple[int, ...]]]
    colouring: Tuple[Optional[str], ...] = ()

    def __post_init__(self) -> None:
        rels = {s: frozenset(self.relations.get(s, ())) for s in self.signature.names}
        extra = set(self.relations) - set(rels)
        if extra:
            raise MMSNPError(f"relations for undeclared symbols {sorted(extra)}")
        n = len(self.names)
        for s, tuples in rels.items():
            a = self.signature.arity(s)
            for t in tuples:
                if len(t) != a:
                    raise MMSNPError(f"tuple {t} has wrong arity for {s}/{a}")
                if any(not 0 <= e < n for e in t):
                    raise MMSNPError(f"tuple {t} mentions an element outside the domain")
        object.__setattr__(self, "relations", rels)
        col = tuple(self.colouring) if self.colouring else (None,) * n
        if len(col) != n:
            raise MMSNPError("colouring length differs from domain size")
        object.__setattr__(self, "colouring", col)

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinStructure):
            return NotImplemented
        return (self.signature == other.signature and len(self) == len(other)
                and dict(self.relations) == dict(other.relations)
                and self.colouring == other.colouring)

    __hash__ = None  # type: ignore[assignment]

    @property
    def elements(self) -> range:
        return range(len(self.names))

    def tuples(self) -> Iterator[Tuple[str, Tuple[int, ...]]]:
        for s in self.signature.names:
            for t in sorted(self.relations[s]):
                yield s, t

    def num_tuples(self) -> int:
        return sum(len(ts) for ts in self.relations.values())

    def is_totally_coloured(self) -> bool:
        return all(c is not None for c in self.colouring)

    def recoloured(self, colouring: Sequence[Optional[str]]) -> "FinStructure":
        return FinStructure(self.signature, self.names, self.relations, tuple(colouring))

    def reduct(self) -> "FinStructure":
        """Drop the colouring."""
        return self.recoloured((None,) * len(self))

    def with_signature(self, signature: Signature) -> "FinStructure":
        rels = {s: self.relations.get(s, frozenset()) for s in signature.names}
        for s, ts in self.relations.items():
            if ts and s not in signature:
                raise MMSNPError(f"symbol {s} missing from target signature")
        return FinStructure(signature, self.names, rels, self.colouring)

    def components(self) -> List[List[int]]:
        """Connected components of the Gaifman graph, in order of least element."""
        parent = list(self.elements)

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for _, t in self.tuples():
            for e in t[1:]:
                ra, rb = find(t[0]), find(e)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        groups: Dict[int, List[int]] = {}
        for e in self.elements:
            groups.setdefault(find(e), []).append(e)
        return [groups[k] for k in sorted(groups)]

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def induced(self, elements: Sequence[int]) -> "FinStructure":
        index = {e: i for i, e in enumerate(elements)}
        rels = {s: frozenset(tuple(index[e] for e in t) for t in ts if all(e in index for e in t))
                for s, ts in self.relations.items()}
        return FinStructure(self.signature, tuple(self.names[e] for e in elements), rels,
                            tuple(self.colouring[e] for e in elements))

    def image(self, mapping: Sequence[int], size: int,
              names: Optional[Sequence[str]] = None) -> "FinStructure":
        """Push forward along ``mapping`` (element -> block index); blocks take the colour of any member."""
        rels = {s: frozenset(tuple(mapping[e] for e in t) for t in ts) for s, ts in self.relations.items()}
        col: List[Optional[str]] = [None] * size
        for e in self.elements:
            c = self.colouring[e]
            if c is not None:
                b = mapping[e]
                if col[b] is not None and col[b] != c:
                    raise MMSNPError("image would doubly colour an element")
                col[b] = c
        if names is None:
            members: Dict[int, List[str]] = {}
            for e in self.elements:
                members.setdefault(mapping[e], []).append(self.names[e])
            names = tuple("_".join(members.get(b, [f"b{b}"])) for b in range(size))
        return FinStructure(self.signature, tuple(names), rels, tuple(col))


def structure(signature: Signature, names: Sequence[str],
              facts: Iterable[Tuple[str, Sequence[str]]] = (),
              colouring: Optional[Mapping[str, str]] = None) -> FinStructure:
    """Convenience constructor from element names."""
    index = {n: i for i, n in enumerate(names)}
    rels: Dict[str, set] = {s: set() for s in signature.names}
    for s, args in facts:
        rels[s].add(tuple(index[a] for a in args))
    col = [None] * len(names)
    for n, c in (colouring or {}).items():
        col[index[n]] = c
    return FinStructure(signature, tuple(names), {s: frozenset(v) for s, v in rels.items()}, tuple(col))


@dataclass(frozen=True)
class RecolouringMap:
    source_colours: Tuple[str, ...]
    target_colours: Tuple[str, ...]
    mapping: Tuple[Tuple[str, str], ...]

    def __post_init__(self) -> None:
        m = dict(self.mapping)
        if set(m) != set(self.source_colours):
            raise MMSNPError("recolouring must be total on the source colours")
        if not set(m.values()) <= set(self.target_colours):
            raise MMSNPError("recolouring image outside the target colours")

    @staticmethod
    def of(source: Sequence[str], target: Sequence[str], mapping: Mapping[str, str]) -> "RecolouringMap":
        return RecolouringMap(tuple(source), tuple(target), tuple((c, mapping[c]) for c in source))

    def __call__(self, colour: str) -> str:
        return dict(self.mapping)[colour]

    def as_dict(self) -> Dict[str, str]:
        return dict(self.mapping)

    def image(self) -> Tuple[str, ...]:
        m = self.as_dict()
        return tuple(c for c in self.target_colours if c in m.values())

    def is_injective(self) -> bool:
        return len(set(self.as_dict().values())) == len(self.source_colours)


@dataclass(frozen=True)
class ColourFunction:
    """Operation table ``colours^arity -> colours``; cell order is lexicographic in colour index."""

    colours: Tuple[str, ...]
    arity: int
    table: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise MMSNPError("arity must be at least 1")
        if len(self.table) != len(self.colours) ** self.arity:
            raise MMSNPError("table must define every argument tuple")
        if any(not 0 <= v < len(self.colours) for v in self.table):
            raise MMSNPError("table value outside the colour range")

    @staticmethod
    def from_callable(colours: Sequence[str], arity: int, fn) -> "ColourFunction":
        cols = tuple(colours)
        idx = {c: i for i, c in enumerate(cols)}
        table = tuple(idx[fn(*(cols[i] for i in args))]
                      for args in itertools.product(range(len(cols)), repeat=arity))
        return ColourFunction(cols, arity, table)

    def cell(self, args: Sequence[int]) -> int:
        q = len(self.colours)
        code = 0
        for a in args:
            code = code * q + a
        return code

    def value(self, args: Sequence[int]) -> int:
        return self.table[self.cell(args)]

    def __call__(self, *args: str) -> str:
        idx = {c: i for i, c in enumerate(self.colours)}
        return self.colours[self.value([idx[a] for a in args])]

    def cells(self) -> Iterator[Tuple[Tuple[str, ...], str]]:
        for args in itertools.product(range(len(self.colours)), repeat=self.arity):
            yield tuple(self.colours[a] for a in args), self.colours[self.value(args)]


@dataclass(frozen=True)
class ComponentResult:
    sentence: Sentence
    verdict: str
    witness: object
    stats: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class ClassificationReport:
    components: Tuple[ComponentResult, ...]
    overall: str
    caveats: Tuple[str, ...] = ()


def validate(sentence: Sentence) -> List[str]:
    """Well-formedness diagnostics for a sentence; empty when valid."""
    out: List[str] = []
    tau = sentence.tau
    colours = set(sentence.colours)
    for i, cl in enumerate(sentence.clauses):
        for sym, args in cl.atoms:
            if sym not in tau:
                if sym in colours:
                    out.append(f"clause {i}: colour {sym} used as an input atom")
                else:
                    out.append(f"clause {i}: undeclared symbol {sym}")
            elif tau.arity(sym) != len(args):
                out.append(f"clause {i}: atom {sym} has {len(args)} arguments, arity is {tau.arity(sym)}")
        for c, _, _ in cl.literals:
            if c not in colours:
                out.append(f"clause {i}: undeclared colour {c}")
        if not cl.atoms and not cl.literals:
            out.append(f"clause {i}: empty clause")
    return out


# canonical forms ---------------------------------------------------------

def _refine(n: int, atoms: Sequence[Atom], literals: Sequence[Literal]) -> List[int]:
    """Colour refinement on the variable/atom incidence graph; returns a stable cell label per variable."""
    label = [0] * n
    unary: List[list] = [[] for _ in range(n)]
    for c, v, p in literals:
        unary[v].append((c, p))
    sig0 = [tuple(sorted(u)) for u in unary]
    keys = sorted(set(sig0))
    label = [keys.index(s) for s in sig0]
    while True:
        sigs = []
        for v in range(n):
            occ = []
            for sym, args in atoms:
                for pos, w in enumerate(args):
                    if w == v:
                        occ.append((sym, pos, tuple(label[u] for u in args)))
            sigs.append((label[v], tuple(sorted(occ))))
        keys = sorted(set(sigs))
        new = [keys.index(s) for s in sigs]
        if len(set(new)) == len(set(label)):
            return new
        label = new


def _encode(perm: Sequence[int], atoms: Sequence[Atom], literals: Sequence[Literal]):
    a = tuple(sorted({(s, tuple(perm[v] for v in args)) for s, args in atoms}))
    l = tuple(sorted({(c, perm[v], p) for c, v, p in literals}))
    return a, l


def _canonical_perm(n: int, atoms: Sequence[Atom], literals: Sequence[Literal]) -> List[int]:
    if n == 0:
        return []
    label = _refine(n, atoms, literals)
    cells: Dict[int, List[int]] = {}
    for v in range(n):
        cells.setdefault(label[v], []).append(v)
    ordered = [cells[k] for k in sorted(cells)]
    best = None
    best_perm: List[int] = []
    # ties inside a refinement cell are broken by trying every ordering
    for choice in itertools.product(*(itertools.permutations(c) for c in ordered)):
        perm = [0] * n
        pos = 0
        for group in choice:
            for v in group:
                perm[v] = pos
                pos += 1
        enc = _encode(perm, atoms, literals)
        if best is None or enc < best:
            best = enc
            best_perm = perm
    return best_perm


def _dedupe_names(names: Sequence[str]) -> Tuple[str, ...]:
    seen = set()
    out = []
    for i, nm in enumerate(names):
        if not nm or nm in seen:
            nm = f"x{i}"
            while nm in seen:
                nm += "_"
        seen.add(nm)
        out.append(nm)
    return tuple(out)


def canonical_clause_form(clause: Clause) -> Clause:
    """Representative of the clause's renaming class, with default variable names."""
    c = Clause.build(clause.atoms, clause.literals)
    return Clause(c.atoms, c.literals, tuple(_default_var_name(i) for i in range(c.num_vars)))


def clause_key(clause: Clause):
    c = Clause.build(clause.atoms, clause.literals)
    return c.atoms, c.literals


# structure combinators ----------------------------------------------------

def disjoint_union(a: FinStructure, b: FinStructure) -> FinStructure:
    """Disjoint union; elements of ``b`` are shifted past those of ``a``."""
    sig = a.signature.union(b.signature)
    off = len(a)
    rels = {}
    for s in sig.names:
        ta = a.relations.get(s, frozenset())
        tb = b.relations.get(s, frozenset())
        rels[s] = frozenset(ta) | frozenset(tuple(e + off for e in t) for t in tb)
    names = list(a.names)
    used = set(names)
    for nm in b.names:
        cand = nm
        k = 1
        while cand in used:
            cand = f"{nm}_{k}"
            k += 1
        used.add(cand)
        names.append(cand)
    return FinStructure(sig, tuple(names), rels, a.colouring + b.colouring)


def set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    """All set partitions, finest first; blocks ordered by least element."""
    items = list(items)
    if not items:
        yield []
        return

    def rec(i: int, blocks: List[List[int]]) -> Iterator[List[List[int]]]:
        if i == len(items):
            yield [list(b) for b in blocks]
            return
        x = items[i]
        blocks.append([x])
        yield from rec(i + 1, blocks)
        blocks.pop()
        for b in blocks:
            b.append(x)
            yield from rec(i + 1, blocks)
            b.pop()

    yield from rec(0, [])


def quotients(a: FinStructure) -> Iterator[FinStructure]:
    """Images of ``a`` under identifications of equally coloured elements; ``a`` itself first."""
    for blocks in set_partitions(list(a.elements)):
        ok = True
        for blk in blocks:
            cols = {a.colouring[e] for e in blk}
            if len(cols) > 1:
                ok = False
                break
        if not ok:
            continue
        mapping = [0] * len(a)
        for i, blk in enumerate(blocks):
            for e in blk:
                mapping[e] = i
        yield a.image(mapping, len(blocks))
