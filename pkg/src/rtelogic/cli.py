"""Command-line front end.

Exit codes: 0 Entailment, 1 Informative, 2 Contradiction, 3 Unknown;
10 usage, 11 file, 12 parse, 13 pipeline, 14 engine disagreement.
Sat results reuse 0 (unsatisfiable), 1 (satisfiable) and 3 (unknown).
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .fole.cnf import clausify
from .fole.parser import FoleSyntaxError, parse_fole, render_fole
from .fole.problem import AxiomKind, ProblemFormatError, format_axioms, format_problem, parse_problem
from .fole.syntax import Not
from .kgraph import GraphError, LowestSensePolicy, ManualPolicy
from .ontology import PipelineConfig, StoreError, build_knowledge, load_store, load_yago_dir
from .presup import LambdaError, generate_presup_axioms, load_argument_store
from .reasoner import EngineDisagreement, ReasonerConfig, Satisfiable, Unsatisfiable, check_sat, export_clauses
from .rte import classify, conjuncts

EXIT_USAGE = 10
EXIT_FILE = 11
EXIT_PARSE = 12
EXIT_PIPELINE = 13
EXIT_DISAGREEMENT = 14

SAT_EXIT = {"unsatisfiable": 0, "satisfiable": 1, "unknown": 3}

log = logging.getLogger("rtelogic")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------ loading


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="latin-1")
    except OSError as exc:
        raise CliError(EXIT_FILE, f"{path}: {exc.strerror or exc}") from None


def _parse_error(path, exc) -> CliError:
    return CliError(EXIT_PARSE, f"{path}:{exc}")


def load_problem_file(path, diagnostics=None):
    text = _read(path)
    try:
        return parse_problem(text, diagnostics)
    except (FoleSyntaxError, ProblemFormatError, ValueError) as exc:
        raise _parse_error(path, exc) from None


def split_formulas(text: str):
    """Yield (line, column, chunk) for each '.'-terminated formula."""
    # blank out comments so positions survive
    clean = "\n".join(l.split("%", 1)[0] for l in text.split("\n"))
    line, col = 1, 1
    start = (1, 1)
    buf = []
    for ch in clean:
        if not buf and ch.isspace():
            pass
        else:
            if not buf:
                start = (line, col)
            buf.append(ch)
            if ch == ".":
                yield start[0], start[1], "".join(buf)
                buf = []
        if ch == "\n":
            line, col = line + 1, 1
        else:
            col += 1
    if "".join(buf).strip():
        yield start[0], start[1], "".join(buf)


def load_formula_file(path, diagnostics=None) -> list:
    text = _read(path)
    out = []
    arities: dict = {}
    try:
        for line, col, chunk in split_formulas(text):
            if not chunk.rstrip().endswith("."):
                raise FoleSyntaxError("formula must end with '.'", line, col)
            out.append(parse_fole(chunk, arities=arities, diagnostics=diagnostics, line=line, column=col))
    except FoleSyntaxError as exc:
        raise _parse_error(path, exc) from None
    return out


def _policy(args):
    if args.keep_list:
        try:
            return ManualPolicy.parse(_read(args.keep_list))
        except GraphError as exc:
            raise CliError(EXIT_PARSE, f"{args.keep_list}: {exc}") from None
    return LowestSensePolicy()


def _store(args):
    try:
        return load_store(args.store) if args.store else None
    except OSError as exc:
        raise CliError(EXIT_FILE, f"{args.store}: {exc.strerror or exc}") from None
    except (StoreError, GraphError) as exc:
        raise CliError(EXIT_PARSE, f"{args.store}: {exc}") from None


def _yago(args):
    if not args.yago_dir:
        return None
    if not Path(args.yago_dir).is_dir():
        raise CliError(EXIT_FILE, f"{args.yago_dir}: not a directory")
    try:
        return load_yago_dir(args.yago_dir)
    except (StoreError, GraphError) as exc:
        raise CliError(EXIT_PARSE, f"{args.yago_dir}: {exc}") from None


def _presup_store(args):
    if not args.presup_store:
        return None
    if not args.abstract:
        raise CliError(EXIT_USAGE, "--presup-store needs --abstract")
    for p in (args.presup_store, args.abstract):
        _read(p)
    try:
        return load_argument_store(args.presup_store, args.abstract)
    except (LambdaError, FoleSyntaxError) as exc:
        raise CliError(EXIT_PARSE, f"{args.presup_store}: {exc}") from None


def _reasoner_config(args) -> ReasonerConfig:
    engines = {"both": ("prover", "model-builder"), "prover": ("prover",), "model-builder": ("model-builder",)}
    try:
        return ReasonerConfig(
            max_domain_size=args.max_domain_size,
            max_clauses=args.max_clauses,
            max_seconds=args.max_seconds,
            engines=frozenset(engines[args.engines]),
        )
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None


# ------------------------------------------------------------ knowledge


@dataclass
class Knowledge:
    problem: object
    generated: list
    unresolved: list
    integrated: dict
    search_predicates: int


def build(args) -> Knowledge:
    """Load the problem and run the knowledge pipeline plus presuppositions."""
    p = load_problem_file(args.problem)
    store = None if args.no_pipeline else _store(args)
    if store is None and not args.no_pipeline:
        raise CliError(EXIT_USAGE, "--store is required unless --no-pipeline is given")
    yago = None if args.no_pipeline else _yago(args)
    presup = _presup_store(args)
    generated, unresolved, integrated, n_search = [], [], {}, 0
    try:
        if store is not None:
            cfg = PipelineConfig(strategy=args.strategy, policy=_policy(args), optimize=not args.no_optimize)
            r = build_knowledge(p, store, yago, cfg)
            p = r.problem
            generated = list(r.axioms)
            unresolved = sorted(str(u) for u in r.unresolved)
            integrated = r.integrated
            n_search = len(r.search_predicates)
        if presup is not None:
            extra = generate_presup_axioms(p, presup)
            p = p.with_background(extra)
            generated += extra
    except (GraphError, LambdaError) as exc:
        raise CliError(EXIT_PIPELINE, f"pipeline: {exc}") from None
    return Knowledge(p, generated, unresolved, integrated, n_search)


def _export(args, name, formulas):
    if not args.export_clauses:
        return
    out = Path(args.export_clauses)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.in").write_text(export_clauses(clausify(formulas)), encoding="latin-1")
    except OSError as exc:
        raise CliError(EXIT_FILE, f"{out}: {exc.strerror or exc}") from None


# ------------------------------------------------------------ reporting


def _result_fields(prefix, res) -> list[tuple[str, str]]:
    if res is None:
        return [(f"{prefix}.status", "skipped")]
    out = [(f"{prefix}.status", res.status), (f"{prefix}.engine", res.engine)]
    if isinstance(res, Satisfiable):
        out.append((f"{prefix}.domain_size", str(res.model.domain_size)))
    elif isinstance(res, Unsatisfiable):
        out.append((f"{prefix}.proof_steps", str(len(res.proof.steps))))
    else:
        out.append((f"{prefix}.reason", res.reason))
    return out


def _describe(res) -> str:
    if isinstance(res, Satisfiable):
        return f"satisfiable [{res.engine}, domain size {res.model.domain_size}]"
    if isinstance(res, Unsatisfiable):
        return f"unsatisfiable [{res.engine}, {len(res.proof.steps)} proof steps]"
    return f"unknown [{res.engine}: {res.reason}]"


def _certificates(res, label, args) -> list[str]:
    lines = []
    if args.show_model and isinstance(res, Satisfiable):
        lines += [f"model of {label}:", res.model.format()]
    if args.show_proof and isinstance(res, Unsatisfiable):
        lines += [f"refutation of {label}:", str(res.proof)]
    return lines


def _record(pairs) -> str:
    return "".join(f"{k}={v.replace(chr(10), ' ')}\n" for k, v in pairs)


def _axiom_table(axioms) -> list[str]:
    if not axioms:
        return ["background axioms: none"]
    lines = [f"background axioms ({len(axioms)}):"]
    w = max(len(a.kind.value) for a in axioms)
    for i, ax in enumerate(axioms, 1):
        src = ax.source or "-"
        lines.append(f"  {i:>3}  {ax.kind.value:<{w}}  {src}  {render_fole(ax.formula)}")
    return lines


def cmd_check(args) -> int:
    k = build(args)
    cfg = _reasoner_config(args)
    p = k.problem
    _export(args, "test1", conjuncts(p, False))
    _export(args, "test2", conjuncts(p, True))
    verdict = classify(p, cfg)
    if args.format == "record":
        pairs = [
            ("command", "check"),
            ("problem", str(args.problem)),
            ("pipeline", "off" if args.no_pipeline else "on"),
            ("strategy", str(args.strategy)),
            ("search_predicates", str(k.search_predicates)),
            ("unresolved", ",".join(k.unresolved)),
            ("integrated", ",".join(f"{u}:{'>'.join(path)}" for u, path in sorted(k.integrated.items()))),
        ]
        counts = Counter(ax.kind for ax in p.background)
        pairs.append(("axioms.total", str(len(p.background))))
        for kind in AxiomKind:
            pairs.append((f"axioms.{kind.value}", str(counts[kind])))
        for i, ax in enumerate(p.background, 1):
            pairs.append((f"axiom.{i}", f"{ax.kind.value}|{ax.source}|{render_fole(ax.formula)}"))
        pairs += _result_fields("test1", verdict.consistency)
        pairs += _result_fields("test2", verdict.informativity)
        pairs += [("verdict", verdict.kind.value), ("exit_code", str(verdict.exit_code))]
        if verdict.detail:
            pairs.append(("detail", verdict.detail))
        sys.stdout.write(_record(pairs))
    else:
        lines = [f"verdict: {verdict.kind.value}"]
        if verdict.detail:
            lines.append(f"  {verdict.detail}")
        lines.append(f"test 1 (T & BK & H):  {_describe(verdict.consistency)}")
        if verdict.informativity is not None:
            lines.append(f"test 2 (T & BK & -H): {_describe(verdict.informativity)}")
        if k.unresolved:
            lines.append(f"unresolved predicates: {', '.join(k.unresolved)}")
        for u, path in sorted(k.integrated.items()):
            lines.append(f"integrated {u}: {' > '.join(path)}")
        lines += _axiom_table(p.background)
        lines += _certificates(verdict.consistency, "test 1", args)
        if verdict.informativity is not None:
            lines += _certificates(verdict.informativity, "test 2", args)
        print("\n".join(lines))
    return verdict.exit_code


def cmd_axioms(args) -> int:
    k = build(args)
    if args.emit_problem:
        sys.stdout.write(format_problem(k.problem))
    else:
        sys.stdout.write(format_axioms(k.generated))
    return 0


def cmd_sat(args) -> int:
    cfg = _reasoner_config(args)
    formulas = []
    for path in args.files:
        formulas += load_formula_file(path)
    if args.negate_last and formulas:
        formulas[-1] = Not(formulas[-1])
    _export(args, "sat", formulas)
    res = check_sat(formulas, cfg)
    if args.format == "record":
        pairs = [("command", "sat"), ("files", ",".join(map(str, args.files))), ("formulas", str(len(formulas)))]
        pairs += _result_fields("result", res)
        sys.stdout.write(_record(pairs))
    else:
        print(_describe(res))
        if isinstance(res, Satisfiable):
            print(res.model.format())
        elif isinstance(res, Unsatisfiable):
            print(res.proof)
    return SAT_EXIT[res.status]


def cmd_parse(args) -> int:
    diagnostics: list = []
    text = _read(args.file)
    if any(l.strip().startswith("#") for l in text.splitlines()):
        p = load_problem_file(args.file, diagnostics)
        out = format_problem(p)
    else:
        fs = load_formula_file(args.file, diagnostics)
        out = "".join(render_fole(f, spaced=True) + ".\n" for f in fs)
    for d in diagnostics:
        print(f"{args.file}:{d}", file=sys.stderr)
    if not args.quiet:
        sys.stdout.write(out)
    return 0


def cmd_kb(args) -> int:
    lines = []
    if not (args.store or args.yago_dir or args.keep_list or args.presup_store):
        raise CliError(EXIT_USAGE, "nothing to validate")
    store = _store(args)
    if store is not None:
        lines.append(f"store {args.store}: {len(store.kinds)} symbols, {len(store.synsets)} synsets, acyclic")
    yago = _yago(args)
    if yago is not None:
        for subj, r in sorted(yago.items()):
            lines.append(f"yago {subj}: {len(r.graph.nodes)} classes, {len(r.aliases)} aliases")
    if args.keep_list:
        pol = _policy(args)
        lines.append(f"keep-list {args.keep_list}: {len(pol.keep)} directives")
    presup = _presup_store(args)
    if presup is not None:
        lines.append(f"presup store {args.presup_store}: {len(presup.entries)} triggers, {len(presup.abstracts)} abstract axioms")
    print("\n".join(lines))
    return 0


# ------------------------------------------------------------ argparse


def _add_limits(p):
    g = p.add_argument_group("reasoner limits")
    g.add_argument("--max-domain-size", type=int, default=8, metavar="K")
    g.add_argument("--max-seconds", type=float, default=30.0, metavar="S")
    g.add_argument("--max-clauses", type=int, default=200_000, metavar="N")
    g.add_argument("--engines", choices=("both", "prover", "model-builder"), default="both")
    p.add_argument("--export-clauses", metavar="DIR", help="write clause sets in LADR syntax to DIR")


def _add_knowledge(p):
    p.add_argument("problem", help="problem file with #text, #hypothesis and optional #axiom sections")
    p.add_argument("--no-pipeline", action="store_true", help="use the problem's background as is")
    p.add_argument("--store", metavar="FILE", help="taxonomy store")
    p.add_argument("--yago-dir", metavar="DIR", help="directory of *.yago type-query fixtures")
    p.add_argument("--keep-list", metavar="FILE", help="manual edge policy; default is lowest sense")
    p.add_argument("--policy", choices=("lowest-sense", "manual"), default=None,
                   help="edge policy; manual requires --keep-list")
    p.add_argument("--strategy", type=int, choices=(1, 2), default=2)
    p.add_argument("--no-optimize", action="store_true", help="skip tree optimization")
    p.add_argument("--presup-store", metavar="FILE")
    p.add_argument("--abstract", metavar="FILE", help="abstract lambda axioms for --presup-store")


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rtelogic", description="Logical entailment checking for FOLE problems.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="classify a problem")
    _add_knowledge(p)
    _add_limits(p)
    p.add_argument("--format", choices=("text", "record"), default="text")
    p.add_argument("--show-model", action="store_true")
    p.add_argument("--show-proof", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("axioms", help="print generated background axioms")
    _add_knowledge(p)
    p.add_argument("--emit-problem", action="store_true",
                   help="print the whole augmented problem instead of the axioms alone")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("sat", help="check satisfiability of formula files")
    p.add_argument("files", nargs="+", help="files of '.'-terminated formulas")
    p.add_argument("--negate-last", action="store_true", help="negate the last formula")
    p.add_argument("--format", choices=("text", "record"), default="text")
    _add_limits(p)
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("parse", help="validate and pretty-print a FOLE file")
    p.add_argument("file")
    p.add_argument("-q", "--quiet", action="store_true", help="validate only")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("kb", help="validate knowledge files")
    p.add_argument("--store", metavar="FILE")
    p.add_argument("--yago-dir", metavar="DIR")
    p.add_argument("--keep-list", metavar="FILE")
    p.add_argument("--presup-store", metavar="FILE")
    p.add_argument("--abstract", metavar="FILE")
    p.set_defaults(func=cmd_kb)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(
        level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
        format="%(levelname)s %(name)s: %(message)s",
    )
    if getattr(args, "policy", None) == "manual" and not args.keep_list:
        ap.error("--policy manual requires --keep-list")
    if getattr(args, "policy", None) == "lowest-sense":
        args.keep_list = None
    try:
        return args.func(args)
    except CliError as exc:
        print(f"rtelogic: error: {exc}", file=sys.stderr)
        return exc.code
    except EngineDisagreement as exc:
        print(f"rtelogic: error: {exc}", file=sys.stderr)
        return EXIT_DISAGREEMENT


if __name__ == "__main__":
    sys.exit(main())
