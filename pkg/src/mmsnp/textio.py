"""Concrete syntax for sentences, structures and JSON reports.

Sentence files::

    signature { E/2 }
    colors { M1, M2 }
    forbid { -M1(x), -M2(x) }
    forbid { E(x,y), M1(x), M1(y) }

Structure files::

    structure { domain { a, b } E(a,b) colour M1(a) }

``#`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import jsonschema

from .core import (Clause, ClassificationReport, ColourFunction, FinStructure, MMSNPError,
                   RecolouringMap, Sentence, Signature)


@dataclass(frozen=True)
class SourceSpan:
    begin: int
    end: int
    line: int
    column: int

    def __post_init__(self) -> None:
        if self.begin > self.end:
            raise ValueError("span begin after end")


class ParseError(MMSNPError):
    def __init__(self, message: str, span: SourceSpan, expected: Optional[str] = None) -> None:
        self.message = message
        self.span = span
        self.expected = expected
        super().__init__(self.render())

    def render(self) -> str:
        text = f"{self.span.line}:{self.span.column}: {self.message}"
        if self.expected:
            text += f" (expected {self.expected})"
        return text


_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<neq>!=)
  | (?P<punct>[{}(),/=\-])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    span: SourceSpan


class _Lexer:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks: List[_Tok] = []
        self.pos = 0
        i = 0
        line, col = 1, 1
        byte = 0
        while i < len(text):
            m = _TOKEN.match(text, i)
            if m is None:
                span = SourceSpan(byte, byte + len(text[i].encode()), line, col)
                raise ParseError(f"unexpected character {text[i]!r}", span)
            chunk = m.group(0)
            nbytes = len(chunk.encode())
            kind = m.lastgroup
            if kind != "ws":
                if kind == "punct" or kind == "neq":
                    kind = chunk
                self.toks.append(_Tok(kind, chunk, SourceSpan(byte, byte + nbytes, line, col)))
            for ch in chunk:
                if ch == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
            byte += nbytes
            i = m.end()
        self.eof = _Tok("eof", "", SourceSpan(byte, byte, line, col))

    def peek(self, k: int = 0) -> _Tok:
        j = self.pos + k
        return self.toks[j] if j < len(self.toks) else self.eof

    def next(self) -> _Tok:
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, kind: str, what: Optional[str] = None) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            shown = repr(t.text) if t.text else "end of input"
            raise ParseError(f"unexpected {shown}", t.span, what or repr(kind))
        return self.next()

    def keyword(self, *words: str) -> _Tok:
        t = self.peek()
        if t.kind != "name" or t.text not in words:
            shown = repr(t.text) if t.text else "end of input"
            raise ParseError(f"unexpected {shown}", t.span, " or ".join(repr(w) for w in words))
        return self.next()

    def names_list(self, what: str) -> List[_Tok]:
        """``{ NAME, ... }`` possibly empty."""
        self.expect("{")
        out: List[_Tok] = []
        if self.peek().kind == "}":
            self.next()
            return out
        while True:
            out.append(self.expect("name", what))
            t = self.next()
            if t.kind == "}":
                return out
            if t.kind != ",":
                raise ParseError(f"unexpected {t.text!r}", t.span, "',' or '}'")


def parse_sentence(text: str) -> Sentence:
    lx = _Lexer(text)
    lx.keyword("signature")
    lx.expect("{")
    symbols: List[Tuple[str, int]] = []
    if lx.peek().kind == "}":
        lx.next()
    else:
        while True:
            name = lx.expect("name", "symbol name")
            lx.expect("/", "'/'")
            ar = lx.expect("int", "arity")
            if int(ar.text) < 1:
                raise ParseError("arity must be at least 1", ar.span)
            if any(n == name.text for n, _ in symbols):
                raise ParseError(f"duplicate symbol {name.text}", name.span)
            symbols.append((name.text, int(ar.text)))
            t = lx.next()
            if t.kind == "}":
                break
            if t.kind != ",":
                raise ParseError(f"unexpected {t.text!r}", t.span, "',' or '}'")
    tau = Signature(tuple(symbols))
    lx.keyword("colors", "colours")
    colour_toks = lx.names_list("colour name")
    colours: List[str] = []
    for t in colour_toks:
        if t.text in colours:
            raise ParseError(f"duplicate colour {t.text}", t.span)
        if t.text in tau:
            raise ParseError(f"colour {t.text} clashes with an input symbol", t.span)
        colours.append(t.text)
    clauses: List[Clause] = []
    while lx.peek().kind != "eof":
        lx.keyword("forbid")
        clauses.append(_parse_clause(lx, tau, colours))
    return Sentence(tau, tuple(colours), tuple(clauses))


def _parse_clause(lx: _Lexer, tau: Signature, colours: Sequence[str]) -> Clause:
    lx.expect("{")
    var_index: Dict[str, int] = {}
    var_names: List[str] = []
    atoms: List[Tuple[str, Tuple[int, ...]]] = []
    lits: List[Tuple[str, int, bool]] = []

    def var(tok: _Tok) -> int:
        if tok.text not in var_index:
            var_index[tok.text] = len(var_names)
            var_names.append(tok.text)
        return var_index[tok.text]

    while True:
        neg = False
        if lx.peek().kind == "-":
            lx.next()
            neg = True
        head = lx.expect("name", "literal")
        if lx.peek().kind in ("=", "!="):
            raise ParseError("equality not permitted", lx.peek().span)
        lx.expect("(", "'('")
        args: List[_Tok] = []
        while True:
            args.append(lx.expect("name", "variable"))
            t = lx.next()
            if t.kind == ")":
                break
            if t.kind != ",":
                raise ParseError(f"unexpected {t.text!r}", t.span, "',' or ')'")
        if lx.peek().kind in ("=", "!="):
            raise ParseError("equality not permitted", lx.peek().span)
        if head.text in colours:
            if len(args) != 1:
                raise ParseError(f"colour {head.text} takes one variable", head.span)
            lits.append((head.text, var(args[0]), not neg))
        elif head.text in tau:
            if neg:
                raise ParseError(f"negated input atom {head.text} not permitted", head.span)
            if tau.arity(head.text) != len(args):
                raise ParseError(f"arity mismatch: {head.text} has arity {tau.arity(head.text)}",
                                 head.span)
            atoms.append((head.text, tuple(var(a) for a in args)))
        else:
            raise ParseError(f"unknown symbol {head.text}", head.span)
        t = lx.next()
        if t.kind == "}":
            break
        if t.kind in ("=", "!="):
            raise ParseError("equality not permitted", t.span)
        if t.kind != ",":
            raise ParseError(f"unexpected {t.text!r}", t.span, "',' or '}'")
    return Clause.build(atoms, lits, var_names)


def format_clause(cl: Clause) -> str:
    n = cl.names
    parts = [f"{s}({','.join(n[v] for v in args)})" for s, args in cl.atoms]
    parts += [("" if p else "-") + f"{c}({n[v]})" for c, v, p in cl.literals]
    return "{ " + ", ".join(parts) + " }"


def print_sentence(s: Sentence) -> str:
    lines = ["signature { " + ", ".join(f"{n}/{a}" for n, a in s.tau.symbols) + " }"
             if s.tau.symbols else "signature { }",
             "colors { " + ", ".join(s.colours) + " }" if s.colours else "colors { }"]
    for cl in s.clauses:
        lines.append("forbid " + format_clause(cl))
    return "\n".join(lines) + "\n"


def parse_structure(text: str, signature: Optional[Signature] = None,
                    colours: Optional[Sequence[str]] = None) -> FinStructure:
    """Parse a structure; without ``signature`` the arities are inferred from the facts."""
    lx = _Lexer(text)
    lx.keyword("structure")
    lx.expect("{")
    lx.keyword("domain")
    dom_toks = lx.names_list("element name")
    index: Dict[str, int] = {}
    for t in dom_toks:
        if t.text in index:
            raise ParseError(f"duplicate element {t.text}", t.span)
        index[t.text] = len(index)
    facts: Dict[str, set] = {}
    inferred: List[Tuple[str, int]] = []
    colouring: List[Optional[str]] = [None] * len(index)
    while lx.peek().kind != "}":
        t = lx.peek()
        if t.kind == "name" and t.text in ("colour", "color") and lx.peek(1).kind == "name":
            lx.next()
            ctok = lx.expect("name", "colour name")
            if colours is not None and ctok.text not in colours:
                raise ParseError(f"unknown colour {ctok.text}", ctok.span)
            lx.expect("(", "'('")
            el = lx.expect("name", "element")
            lx.expect(")", "')'")
            if el.text not in index:
                raise ParseError(f"unknown element {el.text}", el.span)
            e = index[el.text]
            if colouring[e] is not None and colouring[e] != ctok.text:
                raise ParseError("element doubly coloured", el.span)
            colouring[e] = ctok.text
            continue
        head = lx.expect("name", "fact or '}'")
        lx.expect("(", "'('")
        args: List[int] = []
        while True:
            el = lx.expect("name", "element")
            if el.text not in index:
                raise ParseError(f"unknown element {el.text}", el.span)
            args.append(index[el.text])
            nt = lx.next()
            if nt.kind == ")":
                break
            if nt.kind != ",":
                raise ParseError(f"unexpected {nt.text!r}", nt.span, "',' or ')'")
        if signature is not None:
            if head.text not in signature:
                raise ParseError(f"unknown symbol {head.text}", head.span)
            if signature.arity(head.text) != len(args):
                raise ParseError(f"arity mismatch: {head.text} has arity {signature.arity(head.text)}",
                                 head.span)
        else:
            known = dict(inferred)
            if head.text in known and known[head.text] != len(args):
                raise ParseError(f"arity mismatch: {head.text} used with arity {known[head.text]}",
                                 head.span)
            if head.text not in known:
                inferred.append((head.text, len(args)))
        facts.setdefault(head.text, set()).add(tuple(args))
    lx.expect("}")
    end = lx.peek()
    if end.kind != "eof":
        raise ParseError(f"unexpected {end.text!r}", end.span, "end of input")
    sig = signature if signature is not None else Signature(tuple(inferred))
    names = tuple(index)
    return FinStructure(sig, names, {s: frozenset(v) for s, v in facts.items()}, tuple(colouring))


def print_structure(a: FinStructure) -> str:
    names = a.names
    facts = sorted(((t, s) for s, ts in a.relations.items() for t in ts))
    lines = ["structure {", "  domain { " + ", ".join(names) + " }" if names else "  domain { }"]
    for t, s in facts:
        lines.append(f"  {s}({','.join(names[e] for e in t)})")
    for e, c in enumerate(a.colouring):
        if c is not None:
            lines.append(f"  colour {c}({names[e]})")
    lines.append("}")
    return "\n".join(lines) + "\n"


# reports -----------------------------------------------------------------

REPORT_SCHEMA = {
    "type": "object",
    "required": ["components", "overall", "caveats"],
    "additionalProperties": False,
    "properties": {
        "components": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["sentence", "verdict", "witness", "stats"],
                "additionalProperties": False,
                "properties": {
                    "sentence": {"type": "string"},
                    "verdict": {"enum": ["P", "NP-complete"]},
                    "witness": {"type": "object", "required": ["kind"]},
                    "stats": {"type": "object"},
                },
            },
        },
        "overall": {"enum": ["P", "NP-complete"]},
        "caveats": {"type": "array", "items": {"type": "string"}},
    },
}


def witness_json(witness: object, explain: bool = False) -> dict:
    from .classify import Subfactor  # local: classify imports textio indirectly

    if isinstance(witness, ColourFunction):
        out = {"kind": "siggers", "arity": witness.arity, "colours": list(witness.colours)}
        if explain:
            out["cells"] = [list(args) + [val] for args, val in witness.cells()]
        return out
    if isinstance(witness, Subfactor):
        return {"kind": "trivial-subfactor", "rho": list(witness.rho),
                "S": list(witness.S), "T": list(witness.T)}
    raise TypeError(f"unsupported witness {witness!r}")


def report_json(report: ClassificationReport, explain: bool = False) -> dict:
    comps = []
    for c in report.components:
        stats = dict(c.stats)
        if not explain:
            stats = {k: v for k, v in stats.items() if not isinstance(v, (list, dict))}
        comps.append({"sentence": print_sentence(c.sentence), "verdict": c.verdict,
                      "witness": witness_json(c.witness, explain), "stats": stats})
    doc = {"components": comps, "overall": report.overall, "caveats": list(report.caveats)}
    jsonschema.validate(doc, REPORT_SCHEMA)
    return doc


def dump_report(report: ClassificationReport, explain: bool = False) -> str:
    return json.dumps(report_json(report, explain), indent=2, sort_keys=False)


def format_recolouring(r: RecolouringMap) -> str:
    return ", ".join(f"{a} -> {b}" for a, b in r.mapping)
