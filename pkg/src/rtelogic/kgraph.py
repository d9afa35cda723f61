"""Knowledge graphs of synonym sets, their reduction to trees, and the
IS-A / IS-NOT-A / IS-EQ axioms generated from them.

A graph node is a ComplexNode: a set of synonymous predicate symbols.
Edges run from hyponym node to hyperonym node; the root holds only
``entity_n_1``.  Node ids are plain strings (by convention the
representative symbol at creation time).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .fole.problem import Axiom, AxiomKind
from .fole.syntax import Atom, Forall, Iff, Imp, Not, PredicateSymbol, Var

ROOT_SYMBOL = "entity_n_1"
CONCEPT = "concept"
INDIVIDUAL = "individual"
KINDS = (CONCEPT, INDIVIDUAL)
INDIVIDUAL_CATEGORIES = {"named-entity", "location", "person"}


class GraphError(ValueError):
    pass


class UnresolvedNodeError(GraphError):
    def __init__(self, node, candidates):
        super().__init__(f"no edge policy decision for {node}; candidates: {', '.join(candidates)}")
        self.node = node
        self.candidates = list(candidates)


def kind_of(symbol) -> str:
    return INDIVIDUAL if PredicateSymbol(str(symbol)).category in INDIVIDUAL_CATEGORIES else CONCEPT


@dataclass(frozen=True)
class ComplexNode:
    id: str
    members: frozenset
    kind: str = CONCEPT

    def __post_init__(self):
        if not self.members:
            raise GraphError(f"node {self.id} has no members")
        if self.kind not in KINDS:
            raise GraphError(f"node {self.id}: bad kind {self.kind!r}")
        object.__setattr__(self, "members", frozenset(str(m) for m in self.members))

    @property
    def representative(self) -> str:
        return min(self.members)

    def sorted_members(self) -> list[str]:
        return sorted(self.members)


class KnowledgeGraph:
    """Hyponym-to-hyperonym DAG over complex nodes."""

    def __init__(self, root: ComplexNode | None = None):
        root = root or ComplexNode(ROOT_SYMBOL, frozenset([ROOT_SYMBOL]))
        self.root = root.id
        self.nodes: dict[str, ComplexNode] = {root.id: root}
        self._up: dict[str, set] = {root.id: set()}
        self._down: dict[str, set] = {root.id: set()}
        self._where: dict[str, str] = {m: root.id for m in root.members}

    # -- construction

    def add_node(self, node: ComplexNode) -> ComplexNode:
        if node.id in self.nodes:
            raise GraphError(f"duplicate node id {node.id}")
        for m in node.members:
            if m in self._where:
                raise GraphError(f"{m} already belongs to node {self._where[m]}")
        self.nodes[node.id] = node
        self._up[node.id] = set()
        self._down[node.id] = set()
        for m in node.members:
            self._where[m] = node.id
        return node

    def add_member(self, node_id: str, symbol: str) -> None:
        symbol = str(symbol)
        owner = self._where.get(symbol)
        if owner == node_id:
            return
        if owner is not None:
            raise GraphError(f"{symbol} already belongs to node {owner}")
        n = self.nodes[node_id]
        self.nodes[node_id] = ComplexNode(n.id, n.members | {symbol}, n.kind)
        self._where[symbol] = node_id

    def add_edge(self, child: str, parent: str) -> None:
        if child == parent:
            raise GraphError(f"self edge on {child}")
        if child not in self.nodes or parent not in self.nodes:
            raise GraphError(f"edge {child} -> {parent} references an unknown node")
        self._up[child].add(parent)
        self._down[parent].add(child)

    def remove_edge(self, child: str, parent: str) -> None:
        self._up[child].discard(parent)
        self._down[parent].discard(child)

    def remove_node(self, node_id: str) -> None:
        if node_id == self.root:
            raise GraphError("cannot remove the root")
        for p in list(self._up[node_id]):
            self.remove_edge(node_id, p)
        for c in list(self._down[node_id]):
            self.remove_edge(c, node_id)
        for m in self.nodes[node_id].members:
            del self._where[m]
        del self.nodes[node_id], self._up[node_id], self._down[node_id]

    def copy(self):
        g = type(self).__new__(type(self))
        g.root = self.root
        g.nodes = dict(self.nodes)
        g._up = {k: set(v) for k, v in self._up.items()}
        g._down = {k: set(v) for k, v in self._down.items()}
        g._where = dict(self._where)
        return g

    # -- queries

    def parents(self, node_id: str) -> list[str]:
        return sorted(self._up[node_id])

    def children(self, node_id: str) -> list[str]:
        return sorted(self._down[node_id])

    def node_of(self, symbol) -> str | None:
        return self._where.get(str(symbol))

    def edges(self) -> list[tuple[str, str]]:
        return sorted((c, p) for c, ps in self._up.items() for p in ps)

    def symbols(self) -> set[str]:
        return set(self._where)

    def leaves(self) -> list[str]:
        return sorted(n for n in self.nodes if not self._down[n])

    def ancestors(self, node_id: str) -> set[str]:
        out, stack = set(), [node_id]
        while stack:
            for p in self._up[stack.pop()]:
                if p not in out:
                    out.add(p)
                    stack.append(p)
        return out

    def find_cycle(self) -> list[str] | None:
        color = dict.fromkeys(self.nodes, 0)
        for start in sorted(self.nodes):
            if color[start]:
                continue
            stack = [(start, iter(sorted(self._up[start])))]
            path = [start]
            color[start] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    color[node] = 2
                    stack.pop()
                    path.pop()
                elif color[nxt] == 1:
                    return path[path.index(nxt):] + [nxt]
                elif color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, iter(sorted(self._up[nxt]))))
                    path.append(nxt)
        return None

    def validate(self) -> None:
        cycle = self.find_cycle()
        if cycle:
            raise GraphError("cycle: " + " -> ".join(cycle))
        for n in self.nodes:
            if n != self.root and self.root not in self.ancestors(n):
                raise GraphError(f"node {n} does not reach the root")
        if self._up[self.root]:
            raise GraphError("the root has a parent")

    def is_tree(self) -> bool:
        return all(len(self._up[n]) == 1 for n in self.nodes if n != self.root)

    def __eq__(self, other):
        return (isinstance(other, KnowledgeGraph) and self.root == other.root
                and self.nodes == other.nodes and self.edges() == other.edges())

    def __repr__(self):
        return f"{type(self).__name__}({len(self.nodes)} nodes, {len(self.edges())} edges)"

    # -- serialization

    def serialize(self) -> str:
        lines = []
        for nid in sorted(self.nodes):
            n = self.nodes[nid]
            lines.append(f"node {nid} kind={n.kind} members={','.join(n.sorted_members())}")
        for c, p in self.edges():
            lines.append(f"edge {c} {p}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, root: str = ROOT_SYMBOL):
        nodes, edges = {}, []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "node" and len(parts) == 4:
                fields = dict(p.split("=", 1) for p in parts[2:])
                nodes[parts[1]] = ComplexNode(parts[1], frozenset(fields["members"].split(",")), fields["kind"])
            elif parts[0] == "edge" and len(parts) == 3:
                edges.append((parts[1], parts[2]))
            else:
                raise GraphError(f"line {lineno}: cannot parse {raw!r}")
        if root not in nodes:
            raise GraphError(f"root node {root} missing")
        g = cls(nodes.pop(root))
        for n in nodes.values():
            g.add_node(n)
        for c, p in edges:
            g.add_edge(c, p)
        g.validate()
        return g


class KnowledgeTree(KnowledgeGraph):
    """A KnowledgeGraph in which every non-root node has exactly one parent."""

    def validate(self) -> None:
        super().validate()
        if self.nodes[self.root].members != frozenset([ROOT_SYMBOL]):
            raise GraphError(f"tree root must hold only {ROOT_SYMBOL}")
        bad = [n for n in self.nodes if n != self.root and len(self._up[n]) != 1]
        if bad:
            raise GraphError(f"nodes without a single parent: {', '.join(sorted(bad))}")

    def parent(self, node_id: str) -> str | None:
        ps = self._up[node_id]
        return next(iter(ps)) if ps else None

    def path_to_root(self, node_id: str) -> list[str]:
        out = [node_id]
        while out[-1] != self.root:
            out.append(self.parent(out[-1]))
        return out

    @classmethod
    def from_graph(cls, g: KnowledgeGraph) -> "KnowledgeTree":
        t = cls.__new__(cls)
        t.root = g.root
        t.nodes = dict(g.nodes)
        t._up = {k: set(v) for k, v in g._up.items()}
        t._down = {k: set(v) for k, v in g._down.items()}
        t._where = dict(g._where)
        t.validate()
        return t


# ---------------------------------------------------------------- axioms

_X = Var("X")


def _unary(pred):
    return Atom(pred, (_X,))


def is_a(ci, cj):
    return Forall("X", Imp(_unary(ci), _unary(cj)))


def is_not_a(ci, cj):
    return Forall("X", Imp(_unary(ci), Not(_unary(cj))))


def is_eq(ci, cj):
    return Forall("X", Iff(_unary(ci), _unary(cj)))


ALL_RULES = frozenset({1, 2, 3})


def generate_axioms(g: KnowledgeGraph, rules=ALL_RULES, phase: str = "", opaque=()) -> list[Axiom]:
    """Axioms from rule 1 (edges), rule 2 (sibling pairs) and rule 3 (synsets).

    Nodes are visited in id order; each node contributes its outgoing
    IS-A axioms, then IS-NOT-A for each pair of its children, then IS-EQ
    for each pair of its members.  Children listed in ``opaque`` (nodes we
    know nothing about) take no part in rule 2.
    """
    opaque = set(opaque)
    rules = frozenset(rules)
    if not rules <= ALL_RULES:
        raise ValueError(f"unknown rules {sorted(rules - ALL_RULES)}")
    out = []
    for nid in sorted(g.nodes):
        rep = g.nodes[nid].representative
        if 1 in rules:
            for p in g.parents(nid):
                prep = g.nodes[p].representative
                out.append(Axiom(AxiomKind.IS_A, is_a(rep, prep), f"edge:{rep}->{prep}", phase))
        if 2 in rules:
            reps = sorted(g.nodes[c].representative for c in g.children(nid) if c not in opaque)
            for a, b in itertools.combinations(reps, 2):
                out.append(Axiom(AxiomKind.IS_NOT_A, is_not_a(a, b), f"siblings:{rep}:{a},{b}", phase))
        if 3 in rules:
            for a, b in itertools.combinations(g.nodes[nid].sorted_members(), 2):
                out.append(Axiom(AxiomKind.IS_EQ, is_eq(a, b), f"synset:{a},{b}", phase))
    return out


def find_multi_parent_nodes(g: KnowledgeGraph) -> list[tuple[str, list[str]]]:
    return [(n, g.parents(n)) for n in sorted(g.nodes) if len(g.parents(n)) >= 2]


# -------------------------------------------------------- Prop-1 pattern


@dataclass(frozen=True)
class Conflict:
    """``ck`` falls under both ``ci`` and ``cj`` although they exclude each other."""

    ck: str
    ci: str
    cj: str
    axioms: tuple = field(default=(), compare=False)


def _shape(f):
    if not isinstance(f, Forall):
        return None
    v, body = f.var, f.body

    def un(a):
        if isinstance(a, Atom) and a.args == (Var(v),):
            return a.pred
        return None

    if isinstance(body, Imp) and un(body.left):
        if un(body.right):
            return ("isa", un(body.left), un(body.right))
        if isinstance(body.right, Not) and un(body.right.body):
            return ("not", un(body.left), un(body.right.body))
    if isinstance(body, Iff) and un(body.left) and un(body.right):
        return ("eq", un(body.left), un(body.right))
    return None


def check_prop1_pattern(axioms, transitive: bool = False) -> list[Conflict]:
    """Find every ck with ck -> ci, ck -> cj and ci -> not cj.

    By default only literal axiom triples count.  With ``transitive`` the
    IS-A relation is closed under chaining and IS-EQ (both directions).
    """
    isa: dict[str, set] = {}
    by_pair = {}
    excl = []
    for ax in axioms:
        s = _shape(ax.formula)
        if s is None:
            continue
        tag, a, b = s
        if tag == "isa":
            isa.setdefault(a, set()).add(b)
            by_pair[(a, b)] = ax
        elif tag == "not":
            excl.append((a, b, ax))
        elif tag == "eq" and transitive:
            isa.setdefault(a, set()).add(b)
            isa.setdefault(b, set()).add(a)
    if transitive:
        closure = {}
        for start in isa:
            seen, stack = set(), [start]
            while stack:
                for nxt in isa.get(stack.pop(), ()):
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            closure[start] = seen
        isa = closure
    out = []
    seen_conf = set()
    for ci, cj, nax in excl:
        for ck in sorted(isa):
            sup = isa[ck]
            if ci in sup and cj in sup:
                c = Conflict(ck, ci, cj, (nax, by_pair.get((ck, ci)), by_pair.get((ck, cj))))
                if c not in seen_conf:
                    seen_conf.add(c)
                    out.append(c)
    return out


# ------------------------------------------------------- tree reduction


class LowestSensePolicy:
    """Keep the parent whose representative has the smallest (sense, name)."""

    name = "lowest-sense"

    def choose(self, g: KnowledgeGraph, node_id: str, parents: list[str]) -> str:
        def key(p):
            rep = g.nodes[p].representative
            return (PredicateSymbol(rep).sense, rep)

        return min(parents, key=key)


class ManualPolicy:
    """Keep-list decisions: child symbol -> parent symbol to keep.

    File format: one ``keep <child-symbol> <parent-symbol>`` per line.
    """

    name = "manual"

    def __init__(self, keep: dict):
        self.keep = {str(k): str(v) for k, v in keep.items()}

    @classmethod
    def parse(cls, text: str) -> "ManualPolicy":
        keep = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3 or parts[0] != "keep":
                raise GraphError(f"keep-list line {lineno}: expected 'keep <child> <parent>'")
            keep[parts[1]] = parts[2]
        return cls(keep)

    def choose(self, g: KnowledgeGraph, node_id: str, parents: list[str]) -> str:
        for m in g.nodes[node_id].sorted_members():
            target = self.keep.get(m)
            if target is None:
                continue
            owner = g.node_of(target)
            if owner in parents:
                return owner
        raise UnresolvedNodeError(node_id, parents)


def reduce_to_tree(g: KnowledgeGraph, policy) -> tuple[KnowledgeTree, list[tuple[str, str]]]:
    """Keep one parent per multi-parent node; report the removed edges."""
    g.validate()
    work = g.copy()
    removed = []
    for node_id, parents in find_multi_parent_nodes(g):
        keep = policy.choose(g, node_id, parents)
        if keep not in parents:
            raise UnresolvedNodeError(node_id, parents)
        for p in parents:
            if p != keep:
                work.remove_edge(node_id, p)
                removed.append((node_id, p))
    return KnowledgeTree.from_graph(work), removed


def _holds_search(t, node_id, search: set) -> bool:
    return bool(t.nodes[node_id].members & search)


def optimize_tree(t: KnowledgeTree, search_predicates) -> KnowledgeTree:
    """Prune non-search leaves, then contract non-branching interior nodes.

    Nodes holding a search predicate are never removed, so every search
    predicate keeps its axioms.
    """
    search = {str(s) for s in search_predicates}
    out = t.copy()
    changed = True
    while changed:
        changed = False
        for n in sorted(out.nodes):
            if n != out.root and not out.children(n) and not _holds_search(out, n, search):
                out.remove_node(n)
                changed = True
    for n in sorted(out.nodes):
        if n == out.root or _holds_search(out, n, search):
            continue
        kids = out.children(n)
        if len(kids) == 1:
            parent = out.parent(n)
            out.remove_node(n)
            out.add_edge(kids[0], parent)
    out.validate()
    return out


def attach_unknown(t: KnowledgeGraph, pred, kind: str | None = None):
    """Hang ``pred`` directly under the root as a fresh leaf."""
    name = str(pred)
    if t.node_of(name) is not None:
        raise GraphError(f"{name} is already in the graph")
    out = t.copy()
    out.add_node(ComplexNode(name, frozenset([name]), kind or kind_of(name)))
    out.add_edge(name, out.root)
    return out
