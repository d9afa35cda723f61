"""Taxonomy ingestion and the three-phase background knowledge pipeline.

Phase I builds a graph from a WordNet-style store and reduces it to a
tree.  Phase II classifies predicates the store does not know using
YAGO-style type fixtures.  Phase III turns the final tree into axioms.

Store file lines::

    syn district_n_1 territory_n_1
    hyp city_n_1 unit_n_6
    kind leipzig_ne_1 individual

YAGO fixture lines (one file per subject, ``<symbol>.yago``)::

    fact bautzen_ne_1 type wordnet_town_n_1
    sub wordnet_town_n_1 wordnet_city_n_1
    isCalled budysin
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

from .fole.problem import Problem
from .fole.syntax import PredicateSymbol, atoms, inject_aliases
from .kgraph import (
    ALL_RULES,
    CONCEPT,
    INDIVIDUAL,
    KINDS,
    ROOT_SYMBOL,
    ComplexNode,
    GraphError,
    KnowledgeGraph,
    LowestSensePolicy,
    attach_unknown,
    generate_axioms,
    kind_of,
    optimize_tree,
    reduce_to_tree,
)

log = logging.getLogger(__name__)

SEARCH_CATEGORIES = frozenset({"noun", "verb", "named-entity", "location", "person"})
WORDNET_PREFIX = "wordnet_"


class StoreError(ValueError):
    pass


# ------------------------------------------------------------ WordNet store


@dataclass
class TaxonomyStore:
    hypernyms: dict = field(default_factory=dict)
    synsets: list = field(default_factory=list)
    kinds: dict = field(default_factory=dict)

    def __post_init__(self):
        self._group = {}
        for group in self.synsets:
            for s in group:
                if s in self._group:
                    raise StoreError(f"{s} is in two synsets")
                self._group[s] = group

    def __contains__(self, symbol) -> bool:
        return str(symbol) in self.kinds

    def synset(self, symbol) -> frozenset:
        s = str(symbol)
        return self._group.get(s, frozenset([s]))

    def hyperonyms(self, symbol) -> set:
        out = set()
        for m in self.synset(symbol):
            out |= self.hypernyms.get(m, set())
        return out

    def check_acyclic(self) -> None:
        reps = {s: min(self.synset(s)) for s in self.kinds}
        up = {}
        for s, hs in self.hypernyms.items():
            for h in hs:
                a, b = reps[s], reps[h]
                if a == b:
                    raise StoreError(f"cycle: {s} -> {h} within one synset")
                up.setdefault(a, set()).add(b)
        state = {}
        for start in sorted(up):
            if start in state:
                continue
            path, stack = [start], [iter(sorted(up.get(start, ())))]
            state[start] = 1
            while stack:
                nxt = next(stack[-1], None)
                if nxt is None:
                    state[path.pop()] = 2
                    stack.pop()
                elif state.get(nxt) == 1:
                    cyc = path[path.index(nxt):] + [nxt]
                    raise StoreError("cycle: " + " -> ".join(cyc))
                elif nxt not in state:
                    state[nxt] = 1
                    path.append(nxt)
                    stack.append(iter(sorted(up.get(nxt, ()))))


def parse_store(text: str) -> TaxonomyStore:
    """Read a store; kinds not given explicitly follow the symbol category."""
    hyp: dict = {}
    pairs = []
    kinds = {}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "hyp" and len(parts) == 3:
            hyp.setdefault(parts[1], set()).add(parts[2])
            seen.update(parts[1:])
        elif parts[0] == "syn" and len(parts) >= 3:
            pairs.append(parts[1:])
            seen.update(parts[1:])
        elif parts[0] == "kind" and len(parts) == 3:
            if parts[2] not in KINDS:
                raise StoreError(f"line {lineno}: kind must be one of {KINDS}")
            kinds[parts[1]] = parts[2]
            seen.add(parts[1])
        else:
            raise StoreError(f"line {lineno}: cannot parse {raw!r}")
    for s in seen:
        kinds.setdefault(s, kind_of(s))
    # union of overlapping syn lines
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for group in pairs:
        for other in group[1:]:
            parent[find(other)] = find(group[0])
    groups: dict = {}
    for s in parent:
        groups.setdefault(find(s), set()).add(s)
    store = TaxonomyStore(hyp, [frozenset(g) for g in groups.values()], kinds)
    store.check_acyclic()
    return store


def load_store(path) -> TaxonomyStore:
    return parse_store(Path(path).read_text(encoding="latin-1"))


# ------------------------------------------------------------ YAGO fixtures


@dataclass
class TypeQueryResult:
    subject: PredicateSymbol
    graph: KnowledgeGraph
    aliases: list = field(default_factory=list)

    def alias_symbols(self) -> list[PredicateSymbol]:
        return [self.subject.with_lemma(a) for a in self.aliases]


def _wordnet_class(name: str):
    if not name.startswith(WORDNET_PREFIX):
        return None
    return name[len(WORDNET_PREFIX):]


def parse_yago(text: str) -> TypeQueryResult:
    """Build G_Y for one subject; non-WordNet classes are dropped."""
    subject = None
    types, subs, aliases = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "fact" and len(parts) == 4 and parts[2] == "type":
            if subject is not None and parts[1] != subject:
                raise StoreError(f"line {lineno}: second subject {parts[1]}")
            subject = parts[1]
            types.append(parts[3])
        elif parts[0] == "sub" and len(parts) == 3:
            subs.append((parts[1], parts[2]))
        elif parts[0] == "isCalled" and len(parts) == 2:
            aliases.append(parts[1].lower())
        else:
            raise StoreError(f"line {lineno}: cannot parse {raw!r}")
    if subject is None:
        raise StoreError("fixture has no type facts")
    classes = set()
    edges = set()
    for t in types:
        c = _wordnet_class(t)
        if c is not None:
            classes.add(c)
            edges.add((subject, c))
    for a, b in subs:
        ca, cb = _wordnet_class(a), _wordnet_class(b)
        if ca is not None:
            classes.add(ca)
        if cb is not None:
            classes.add(cb)
        if ca is not None and cb is not None:
            edges.add((ca, cb))
    g = KnowledgeGraph()
    for c in sorted(classes - {ROOT_SYMBOL}):
        g.add_node(ComplexNode(c, frozenset([c]), kind_of(c)))
    g.add_node(ComplexNode(subject, frozenset([subject]), INDIVIDUAL))
    for a, b in sorted(edges):
        g.add_edge(a, b)
    for n in sorted(g.nodes):
        if n != g.root and not g.parents(n):
            g.add_edge(n, g.root)
    g.validate()
    if g.leaves() != [subject]:
        raise StoreError(f"G_Y must have the subject as its only leaf, found {g.leaves()}")
    seen = []
    for a in aliases:
        if a not in seen:
            seen.append(a)
    return TypeQueryResult(PredicateSymbol(subject), g, seen)


def load_yago_dir(path) -> dict:
    out = {}
    for f in sorted(Path(path).glob("*.yago")):
        r = parse_yago(f.read_text(encoding="latin-1"))
        out[str(r.subject)] = r
    return out


# ------------------------------------------------------------ Phase I


def extract_search_predicates(p: Problem | None, exclude=()) -> set:
    """Unary noun/verb/entity atoms of T and H."""
    if p is None:
        return set()
    skip = {str(e) for e in exclude}
    out = set()
    for f in (p.text, p.hypothesis):
        for a in atoms(f):
            if len(a.args) == 1 and a.symbol.category in SEARCH_CATEGORIES and a.pred not in skip:
                out.add(a.symbol)
    return out


def build_graph_phase1(preds, store: TaxonomyStore) -> tuple[KnowledgeGraph, set]:
    """G_W for ``preds``; unknown predicates hang under the root."""
    g = KnowledgeGraph()
    unresolved = set()
    todo = []
    for p in sorted(str(x) for x in preds):
        if p == ROOT_SYMBOL:
            continue
        if p in store:
            todo.append(p)
        else:
            unresolved.add(PredicateSymbol(p))

    def ensure(sym) -> str:
        group = store.synset(sym)
        if ROOT_SYMBOL in group:
            return g.root
        nid = g.node_of(sym)
        if nid is None:
            nid = min(group)
            kinds = {store.kinds.get(m, kind_of(m)) for m in group}
            kind = INDIVIDUAL if INDIVIDUAL in kinds else CONCEPT
            g.add_node(ComplexNode(nid, group, kind))
            return nid
        return nid

    done = set()
    while todo:
        s = todo.pop()
        nid = ensure(s)
        if nid in done:
            continue
        done.add(nid)
        if nid == g.root:
            continue
        hs = sorted(store.hyperonyms(s))
        if not hs:
            g.add_edge(nid, g.root)
        for h in hs:
            hid = ensure(h)
            g.add_edge(nid, hid)
            todo.append(h)
    for u in sorted(unresolved):
        g = attach_unknown(g, u)
    g.validate()
    return g, unresolved


# ------------------------------------------------------------ Phase II


def _shared(t: KnowledgeGraph, node: ComplexNode) -> bool:
    return any(t.node_of(m) is not None for m in node.members)


def enumerate_paths(result: TypeQueryResult) -> list[list[str]]:
    """Every root-to-direct-hyperonym path of G_Y, each ending with the leaf."""
    g = result.graph
    leaf = str(result.subject)
    targets = set(g.parents(leaf))
    out = []

    def walk(n, path):
        if n in targets:
            out.append(path + [leaf])
        for c in g.children(n):
            if c != leaf:
                walk(c, path + [c])

    walk(g.root, [g.root])
    return out


def select_yago_path(result: TypeQueryResult, t: KnowledgeGraph) -> list[str]:
    """Path with most nodes shared with ``t``, then the longest, then
    the lexicographically smallest."""
    paths = enumerate_paths(result)
    if not paths:
        raise GraphError(f"G_Y for {result.subject} has no path to its leaf")
    g = result.graph

    def key(path):
        inner = path[:-1]
        shared = sum(1 for n in inner if _shared(t, g.nodes[n]))
        return (-shared, -len(inner), inner)

    return min(paths, key=key)


class IntegrationConflict(GraphError):
    pass


def _chain(t, nid):
    out = [nid]
    while out[-1] != t.root:
        ps = t.parents(out[-1])
        if not ps:
            break
        out.append(ps[0])
    return out


def integrate_path(t: KnowledgeGraph, path, source: KnowledgeGraph | None = None) -> KnowledgeGraph:
    """Merge a root-to-leaf path into ``t``.

    Path nodes already in ``t`` (by member symbol) are reused; new nodes
    between two reused nodes are dropped, new nodes after the last reused
    one are chained below it.  A leaf previously parked under the root is
    moved.  Raises IntegrationConflict if reused nodes are out of order in
    ``t`` or the leaf already has a different real parent.
    """
    path = [str(p) for p in path]
    leaf = path[-1]
    out = t.copy()
    inner = path[:-1]

    def node_for(sym):
        if source is not None and sym in source.nodes:
            return source.nodes[sym]
        return ComplexNode(sym, frozenset([sym]), kind_of(sym))

    mapped = []
    for i, sym in enumerate(inner):
        members = node_for(sym).members
        hits = {out.node_of(m) for m in members} - {None}
        if len(hits) > 1:
            raise IntegrationConflict(f"{sym} matches several nodes: {sorted(hits)}")
        mapped.append((i, hits.pop() if hits else None))
    shared = [(i, nid) for i, nid in mapped if nid is not None]
    if not shared:
        shared = [(-1, out.root)]
    for (_, a), (_, b) in zip(shared, shared[1:]):
        if a != b and a not in out.ancestors(b):
            raise IntegrationConflict(
                f"{b} is not below {a} in the tree; chains: {' > '.join(_chain(out, a))} | {' > '.join(_chain(out, b))}"
            )
    last_i, anchor = shared[-1]
    for sym in inner[last_i + 1:]:
        n = node_for(sym)
        out.add_node(ComplexNode(n.id, n.members, n.kind))
        out.add_edge(n.id, anchor)
        anchor = n.id

    leaf_id = out.node_of(leaf)
    if leaf_id is None:
        n = node_for(leaf)
        out.add_node(ComplexNode(n.id, n.members, INDIVIDUAL if kind_of(leaf) == INDIVIDUAL else n.kind))
        out.add_edge(n.id, anchor)
    else:
        parents = out.parents(leaf_id)
        if parents == [anchor]:
            pass
        elif parents == [out.root] and not out.children(leaf_id):
            out.remove_edge(leaf_id, out.root)
            out.add_edge(leaf_id, anchor)
        else:
            raise IntegrationConflict(
                f"{leaf} already sits under {', '.join(parents)}; the path wants it under {anchor}"
            )
    out.validate()
    return out


def add_aliases(t: KnowledgeGraph, subject, aliases) -> KnowledgeGraph:
    out = t.copy()
    nid = out.node_of(subject)
    if nid is None:
        raise GraphError(f"{subject} is not in the tree")
    for a in aliases:
        out.add_member(nid, str(a))
    return out


# ------------------------------------------------------------ pipeline


@dataclass(frozen=True)
class PipelineConfig:
    strategy: int = 2
    policy: object = field(default_factory=LowestSensePolicy)
    optimize: bool = True

    def __post_init__(self):
        if self.strategy not in (1, 2):
            raise ValueError("strategy must be 1 or 2")

    @property
    def rules(self) -> frozenset:
        return ALL_RULES if self.strategy == 2 else frozenset({1, 3})


@dataclass
class PipelineResult:
    problem: Problem
    graph: KnowledgeGraph
    tree: KnowledgeGraph
    removed: list
    unresolved: set
    integrated: dict
    axioms: list
    search_predicates: set


def _inject(f, subject, aliases):
    names = {str(a) for a in aliases}
    present = {a.pred for a in atoms(f)}
    if str(subject) not in present or names & present:
        return f
    return inject_aliases(f, subject, aliases)


def build_knowledge(p: Problem, store: TaxonomyStore, yago: dict | None = None,
                    cfg: PipelineConfig | None = None) -> PipelineResult:
    cfg = cfg or PipelineConfig()
    yago = yago or {}
    alias_syms = {str(a) for r in yago.values() for a in r.alias_symbols()}

    # Phase I
    search = extract_search_predicates(p, exclude=alias_syms)
    g, unresolved = build_graph_phase1(search, store)
    removed = []
    if cfg.strategy == 2:
        t, removed = reduce_to_tree(g, cfg.policy)
        if cfg.optimize:
            t = optimize_tree(t, {str(s) for s in search})
    else:
        t = g.copy()

    # Phase II
    text, hyp = p.text, p.hypothesis
    integrated = {}
    yago_symbols = set()
    for u in sorted(unresolved):
        result = yago.get(str(u))
        if result is None:
            log.info("no YAGO fixture for %s", u)
            continue
        path = select_yago_path(result, t)
        before = t.symbols()
        t = integrate_path(t, path, result.graph)
        aliases = result.alias_symbols()
        t = add_aliases(t, u, aliases)
        yago_symbols |= (t.symbols() - before) | {str(u)}
        integrated[str(u)] = path
        if aliases:
            text = _inject(text, u, aliases)
            hyp = _inject(hyp, u, aliases)

    # Phase III; leftover placeholders are not known to exclude anything
    opaque = {str(u) for u in unresolved if str(u) not in integrated and t.node_of(str(u)) == str(u)}
    axioms = []
    for ax in generate_axioms(t, cfg.rules, phase="III", opaque=opaque):
        syms = {a.pred for a in atoms(ax.formula)}
        origin = "yago" if syms & yago_symbols else "wordnet"
        axioms.append(replace(ax, source=f"{origin}:{ax.source}"))
    out = replace(p, text=text, hypothesis=hyp).with_background(axioms)
    return PipelineResult(out, g, t, removed, unresolved, integrated, axioms, search)


def run_pipeline(p: Problem, store: TaxonomyStore, yago: dict | None = None,
                 cfg: PipelineConfig | None = None) -> Problem:
    """Phases I-III; returns ``p`` with generated axioms appended."""
    return build_knowledge(p, store, yago, cfg).problem


__all__ = [
    "IntegrationConflict",
    "PipelineConfig",
    "PipelineResult",
    "StoreError",
    "TaxonomyStore",
    "TypeQueryResult",
    "add_aliases",
    "build_graph_phase1",
    "build_knowledge",
    "enumerate_paths",
    "extract_search_predicates",
    "integrate_path",
    "load_store",
    "load_yago_dir",
    "parse_store",
    "parse_yago",
    "run_pipeline",
    "select_yago_path",
]
