"""RTE problems (text, hypothesis, background axioms) and their file format.

Problem files are line oriented::

    % comment
    #text
    some(X, ...).
    #hypothesis
    some(X, ...).
    #axiom IS-A phase=III source=edge:city_n_1->location_n_1
    all(X, imp(city_n_1(X), location_n_1(X))).

Each section header is followed by exactly one formula terminated by ``.``;
the formula may span several lines.  ``#axiom`` may repeat and may carry an
optional kind and ``key=value`` provenance fields.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from pathlib import Path

from .parser import FoleSyntaxError, parse_fole, render_fole
from .syntax import free_vars


class AxiomKind(enum.Enum):
    IS_A = "IS-A"
    IS_NOT_A = "IS-NOT-A"
    IS_EQ = "IS-EQ"
    PRESUPPOSITION = "PRESUPPOSITION"
    GENERIC = "GENERIC"


@dataclass(frozen=True)
class Axiom:
    kind: AxiomKind
    formula: object
    source: str = ""
    phase: str = ""

    def header(self) -> str:
        parts = ["#axiom", self.kind.value]
        if self.phase:
            parts.append(f"phase={self.phase}")
        if self.source:
            parts.append(f"source={self.source}")
        return " ".join(parts)


@dataclass(frozen=True)
class Problem:
    text: object
    hypothesis: object
    background: tuple = field(default=())

    def __post_init__(self):
        for name in ("text", "hypothesis"):
            fv = free_vars(getattr(self, name))
            if fv:
                raise ValueError(f"{name} is not closed: free {sorted(fv)}")
        for ax in self.background:
            if free_vars(ax.formula):
                raise ValueError(f"axiom is not closed: {render_fole(ax.formula)}")

    def with_background(self, axioms) -> "Problem":
        """Append axioms, skipping formulas already present."""
        seen = {ax.formula for ax in self.background}
        extra = []
        for ax in axioms:
            if ax.formula not in seen:
                seen.add(ax.formula)
                extra.append(ax)
        return replace(self, background=self.background + tuple(extra))


class ProblemFormatError(ValueError):
    pass


def _split_sections(text: str):
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            if current is not None:
                current["lines"].append("")
            continue
        if stripped.startswith("#"):
            words = stripped[1:].split()
            if not words:
                raise ProblemFormatError(f"{lineno}:1: empty section header")
            current = {"name": words[0], "args": words[1:], "line": lineno + 1, "lines": []}
            sections.append(current)
            continue
        if current is None:
            raise ProblemFormatError(f"{lineno}:1: formula outside of a section")
        current["lines"].append(raw)
    return sections


def _axiom_meta(args: list[str]):
    kind = AxiomKind.GENERIC
    meta = {}
    for a in args:
        if "=" in a:
            k, v = a.split("=", 1)
            meta[k] = v
        else:
            try:
                kind = AxiomKind(a.upper())
            except ValueError:
                raise ProblemFormatError(f"unknown axiom kind {a!r}") from None
    return kind, meta.get("source", ""), meta.get("phase", "")


def parse_problem(text: str, diagnostics: list | None = None) -> Problem:
    arities: dict = {}
    parts = {}
    background = []
    for sec in _split_sections(text):
        body = "\n".join(sec["lines"]).strip()
        if not body:
            raise ProblemFormatError(f"{sec['line'] - 1}:1: section #{sec['name']} has no formula")
        if not body.rstrip().endswith("."):
            raise ProblemFormatError(f"{sec['line'] - 1}:1: formula in #{sec['name']} must end with '.'")
        f = parse_fole("\n".join(sec["lines"]), arities=arities, diagnostics=diagnostics, line=sec["line"])
        if sec["name"] in ("text", "hypothesis"):
            if sec["name"] in parts:
                raise ProblemFormatError(f"{sec['line'] - 1}:1: duplicate #{sec['name']} section")
            parts[sec["name"]] = f
        elif sec["name"] == "axiom":
            kind, source, phase = _axiom_meta(sec["args"])
            background.append(Axiom(kind, f, source, phase))
        else:
            raise ProblemFormatError(f"{sec['line'] - 1}:1: unknown section #{sec['name']}")
    for needed in ("text", "hypothesis"):
        if needed not in parts:
            raise ProblemFormatError(f"missing #{needed} section")
    return Problem(parts["text"], parts["hypothesis"], tuple(background))


def load_problem(path, diagnostics: list | None = None) -> Problem:
    return parse_problem(Path(path).read_text(encoding="latin-1"), diagnostics)


def format_axioms(axioms) -> str:
    lines = []
    for ax in axioms:
        lines.append(ax.header())
        lines.append(render_fole(ax.formula, spaced=True) + ".")
    return "\n".join(lines) + ("\n" if lines else "")


def format_problem(p: Problem) -> str:
    out = ["#text", render_fole(p.text, spaced=True) + ".", "#hypothesis", render_fole(p.hypothesis, spaced=True) + "."]
    return "\n".join(out) + "\n" + format_axioms(p.background)


__all__ = [
    "Axiom",
    "AxiomKind",
    "FoleSyntaxError",
    "Problem",
    "ProblemFormatError",
    "format_axioms",
    "format_problem",
    "load_problem",
    "parse_problem",
]
