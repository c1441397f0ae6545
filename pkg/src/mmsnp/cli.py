"""Command-line interface: ``mmsnp <command> ...``.

Exit codes: 0 success (or "holds"/"satisfies"), 1 negative answer, 2 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from .core import BudgetExceeded, MMSNPError, Sentence
from .textio import (ParseError, dump_report, format_recolouring, parse_sentence, parse_structure,
                     print_sentence, print_structure, report_json)

BUDGET_FLAGS = {"max_clauses": "CLAUSES", "max_nodes": "NODES", "max_cegar_iters": "CEGAR_ITERS"}


def _read_sentence(path: str) -> Sentence:
    text = Path(path).read_text()
    try:
        return parse_sentence(text)
    except ParseError as e:
        raise MMSNPError(f"{path}:{e.render()}") from None


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _connected(phi: Sentence) -> Sentence:
    from .normalform import is_connected_sentence
    if not is_connected_sentence(phi):
        raise MMSNPError("sentence is not connected; run `decompose` first")
    return phi


def cmd_parse(args) -> int:
    from .core import validate
    phi = _read_sentence(args.input)
    diags = validate(phi)
    if diags:
        raise MMSNPError("; ".join(diags))
    _emit(print_sentence(phi), args.output)
    return 0


def cmd_normalize(args) -> int:
    from .normalform import normalize
    _emit(print_sentence(normalize(_connected(_read_sentence(args.input)))), args.output)
    return 0


def cmd_snf(args) -> int:
    from .recolour import strong_normal_form
    _emit(print_sentence(strong_normal_form(_connected(_read_sentence(args.input)))), args.output)
    return 0


def cmd_decompose(args) -> int:
    from .normalform import decompose_connected
    parts = decompose_connected(_read_sentence(args.input))
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = Path(args.input).stem
        for i, p in enumerate(parts, 1):
            (out / f"{stem}.{i}.mmsnp").write_text(print_sentence(p))
    else:
        sys.stdout.write("\n".join(print_sentence(p) for p in parts))
    return 0


def cmd_precolour(args) -> int:
    from .normalform import normalize
    from .precolour import standard_precolouration
    from .recolour import is_strong_normal_form, strong_normal_form
    phi = _connected(_read_sentence(args.input))
    if not is_strong_normal_form(phi):
        phi = strong_normal_form(normalize(phi))
    _emit(print_sentence(standard_precolouration(phi)), args.output)
    return 0


def cmd_obstructions(args) -> int:
    from .normalform import is_normal_form, normalize, obstruction_set
    phi = _connected(_read_sentence(args.input))
    if not is_normal_form(phi):
        phi = normalize(phi)
    _emit("".join(print_structure(f) for f in obstruction_set(phi).structures), args.output)
    return 0


def cmd_contains(args) -> int:
    from .recolour import contains
    v = contains(_read_sentence(args.first), _read_sentence(args.second), args.max_size)
    if args.json:
        doc = {"holds": v.holds,
               "recolouring": dict(v.witness.mapping) if v.witness else None,
               "counterexample": print_structure(v.counterexample) if v.counterexample else None}
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    elif v.holds:
        _emit(f"holds\nrecolouring: {format_recolouring(v.witness)}\n", args.output)
    else:
        text = "does not hold\n"
        text += print_structure(v.counterexample) if v.counterexample else "no counterexample within the size bound\n"
        _emit(text, args.output)
    return 0 if v.holds else 1


def cmd_check(args) -> int:
    from .homsearch import model_check
    from .normalform import decompose_connected, is_normal_form, normalize
    phi = _read_sentence(args.sentence)
    a = parse_structure(Path(args.structure).read_text(), colours=phi.colours)
    colouring = None
    for comp in decompose_connected(phi):
        nf = comp if is_normal_form(comp) else normalize(comp)
        colouring = model_check(a, nf)
        if colouring is not None:
            break
    if args.json:
        doc = {"satisfies": colouring is not None,
               "colouring": dict(zip(a.names, colouring)) if colouring else None}
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    elif colouring is not None:
        _emit("satisfies\n" + "".join(f"{n}: {c}\n" for n, c in zip(a.names, colouring)), args.output)
    else:
        _emit("does not satisfy\n", args.output)
    return 0 if colouring is not None else 1


def _classify_file(path: str, explain: bool) -> dict:
    from .classify import classify
    return report_json(classify(_read_sentence(path)), explain)


def _inputs(paths: Sequence[str]) -> List[str]:
    out: List[str] = []
    for p in paths:
        pp = Path(p)
        if pp.is_dir():
            out.extend(str(f) for f in sorted(pp.glob("*.mmsnp")))
        else:
            out.append(p)
    return out


def cmd_classify(args) -> int:
    from .classify import classify
    files = _inputs(args.inputs)
    if len(files) == 1 and not Path(args.inputs[0]).is_dir():
        _emit(dump_report(classify(_read_sentence(files[0])), args.explain) + "\n", args.output)
        return 0
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            docs = list(pool.map(_classify_file, files, [args.explain] * len(files)))
    else:
        docs = [_classify_file(f, args.explain) for f in files]
    _emit(json.dumps(dict(zip(files, docs)), indent=2) + "\n", args.output)
    return 0


def cmd_chi(args) -> int:
    from .normalform import normalize
    from .precolour import build_chi
    from .recolour import is_strong_normal_form, strong_normal_form
    phi = _connected(_read_sentence(args.input))
    if not is_strong_normal_form(phi):
        phi = strong_normal_form(normalize(phi))
    p = build_chi(phi, args.colour, args.depth)
    _emit(print_structure(p.structure), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmsnp", description="MMSNP normal forms, containment and classification")
    parser.add_argument("--max-clauses", type=int, help="clause budget for rewriting and learning")
    parser.add_argument("--max-nodes", type=int, help="search-node budget for backtracking engines")
    parser.add_argument("--max-cegar-iters", type=int, help="refinement-iteration budget for table searches")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_text: str, single_input: bool = True):
        p = sub.add_parser(name, help=help_text)
        if single_input:
            p.add_argument("input")
        p.add_argument("-o", "--output")
        p.set_defaults(fn=fn)
        return p

    add("parse", cmd_parse, "validate and pretty-print a sentence")
    add("normalize", cmd_normalize, "rewrite a connected sentence into normal form")
    add("snf", cmd_snf, "compute a strong normal form")
    p = add("decompose", cmd_decompose, "split into connected sentences")
    p.add_argument("--output-dir")
    add("precolour", cmd_precolour, "standard precolouration of the strong normal form")
    add("obstructions", cmd_obstructions, "list the coloured obstructions of the normal form")
    p = add("contains", cmd_contains, "decide whether the first sentence implies the second", single_input=False)
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--max-size", type=int, default=4, help="counterexample size bound")
    p.add_argument("--json", action="store_true")
    p = add("check", cmd_check, "model-check a structure against a sentence", single_input=False)
    p.add_argument("structure")
    p.add_argument("sentence")
    p.add_argument("--json", action="store_true")
    p = add("classify", cmd_classify, "classify sentences as P or NP-complete", single_input=False)
    p.add_argument("inputs", nargs="+", help="sentence files or directories of .mmsnp files")
    p.add_argument("--explain", action="store_true", help="include witnesses in full")
    p.add_argument("--json", action="store_true", help="JSON output (always on)")
    p.add_argument("--jobs", type=int, default=1)
    p = add("chi", cmd_chi, "build the colour-defining structure")
    p.add_argument("--colour", "--color", required=True)
    p.add_argument("--depth", type=int, default=1)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # budgets travel through the environment so worker processes inherit them
    saved = dict(os.environ)
    for flag, env in BUDGET_FLAGS.items():
        val = getattr(args, flag)
        if val is not None:
            os.environ[f"MMSNP_BUDGET_{env}"] = str(val)
    try:
        return args.fn(args)
    except BudgetExceeded as e:
        print(f"error: budget exceeded: {e}", file=sys.stderr)
    except (MMSNPError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
    finally:
        os.environ.clear()
        os.environ.update(saved)
    return 2


if __name__ == "__main__":
    sys.exit(main())
