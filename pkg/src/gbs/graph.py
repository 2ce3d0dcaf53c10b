"""Labeled graphs: data model, text/JSON formats, signs, reduction, matching."""

import hashlib
import json
import re
from collections import deque
from dataclasses import dataclass, field, replace
from typing import NamedTuple

from .arith import check_label, DIGIT_LIMIT
from .errors import (GraphSyntaxError, ZeroLabel, DisconnectedGraph, ElementaryGroup,
                     GbsError)


class HalfEdge(NamedTuple):
    edge: str
    rev: bool = False

    @property
    def bar(self):
        return HalfEdge(self.edge, not self.rev)

    def __str__(self):
        return ("~" if self.rev else "") + self.edge

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text.startswith("~"):
            return cls(text[1:], True)
        return cls(text, False)


def half(x):
    """Accept a HalfEdge or its string form."""
    return x if isinstance(x, HalfEdge) else HalfEdge.parse(x)


@dataclass(frozen=True)
class Edge:
    name: str
    origin: str
    terminus: str
    label: int       # at the origin
    label_rev: int   # at the terminus

    @property
    def is_loop(self):
        return self.origin == self.terminus


@dataclass(frozen=True)
class LabeledGraph:
    vertices: tuple
    edges: tuple

    def __post_init__(self):
        validate(self)

    # lookups
    def edge(self, name):
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(name)

    def has_edge(self, name):
        return any(e.name == name for e in self.edges)

    def origin(self, h):
        e = self.edge(h.edge)
        return e.terminus if h.rev else e.origin

    def terminus(self, h):
        return self.origin(h.bar)

    def label(self, h):
        e = self.edge(h.edge)
        return e.label_rev if h.rev else e.label

    def half_edges(self):
        out = []
        for e in self.edges:
            out += [HalfEdge(e.name), HalfEdge(e.name, True)]
        return out

    def at_vertex(self, v):
        return [h for h in self.half_edges() if self.origin(h) == v]

    def set_label(self, h, value):
        check_label(value)
        edges = []
        for e in self.edges:
            if e.name == h.edge:
                e = replace(e, label_rev=value) if h.rev else replace(e, label=value)
            edges.append(e)
        return LabeledGraph(self.vertices, tuple(edges))

    def pairs(self):
        return [(e.label, e.label_rev) for e in self.edges]

    def key(self):
        """Order-independent identity of the exact graph (names included)."""
        return (tuple(sorted(self.vertices)),
                tuple(sorted((e.name, e.origin, e.terminus, e.label, e.label_rev)
                             for e in self.edges)))

    def same(self, other):
        return self.key() == other.key()

    def fingerprint(self):
        return hashlib.sha256(serialize_graph(self).encode()).hexdigest()[:16]

    def __str__(self):
        return serialize_graph(self)


def validate(g):
    if len(set(g.vertices)) != len(g.vertices):
        raise GbsError("duplicate vertex names")
    names = [e.name for e in g.edges]
    if len(set(names)) != len(names):
        raise GbsError("duplicate edge names")
    vs = set(g.vertices)
    for e in g.edges:
        if e.origin not in vs or e.terminus not in vs:
            raise GbsError(f"edge {e.name} uses an undeclared vertex")
        if e.label == 0 or e.label_rev == 0:
            raise ZeroLabel(f"edge {e.name} has label 0")


def is_connected(g):
    if not g.vertices:
        return False
    adj = {v: set() for v in g.vertices}
    for e in g.edges:
        adj[e.origin].add(e.terminus)
        adj[e.terminus].add(e.origin)
    seen = {g.vertices[0]}
    todo = [g.vertices[0]]
    while todo:
        for w in adj[todo.pop()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(g.vertices)


def make_graph(vertices, edges):
    """Build a graph from vertex names and (name, origin, terminus, a, b) tuples."""
    g = LabeledGraph(tuple(vertices), tuple(Edge(*e) for e in edges))
    if not is_connected(g):
        raise DisconnectedGraph("graph is not connected")
    return g


def rose(*pairs, names=None):
    names = names or [f"f{i + 1}" for i in range(len(pairs))]
    return make_graph(["v0"], [(n, "v0", "v0", a, b) for n, (a, b) in zip(names, pairs)])


# -- text and JSON formats ----------------------------------------------------

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.']*$")


def _int(tok, lineno):
    if not re.fullmatch(r"[+-]?\d+", tok):
        raise GraphSyntaxError(f"bad label {tok!r}", lineno)
    n = int(tok)
    if n == 0:
        raise ZeroLabel(f"line {lineno}: label 0 is not allowed")
    if len(tok.lstrip("+-")) > DIGIT_LIMIT:
        raise GraphSyntaxError(f"label {tok} exceeds {DIGIT_LIMIT} digits", lineno)
    return n


def parse_graph(text):
    """Parse the .gbs text format (or its JSON mirror).

    Declarations are separated by newlines or ';'.  A vertex declaration is
    ``vertices: v0 v1`` or just ``v0 v1``; an edge declaration is
    ``edge f: v0 v1 2 3`` or ``f: v0 v1 2 3``.  '#' starts a comment.
    """
    if text.lstrip().startswith("{"):
        return graph_from_json(json.loads(text))
    vertices, edges = None, []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        for part in line.split(";"):
            part = part.strip()
            if not part:
                continue
            if part.startswith("vertices:"):
                toks = part[len("vertices:"):].split()
                if vertices is not None:
                    raise GraphSyntaxError("vertices declared twice", lineno)
                vertices = _names(toks, lineno)
                continue
            if ":" not in part:
                if vertices is not None:
                    raise GraphSyntaxError(f"unexpected text {part!r}", lineno)
                vertices = _names(part.split(), lineno)
                continue
            head, body = part.split(":", 1)
            head = head.split()
            if len(head) == 2 and head[0] == "edge":
                head = head[1:]
            if len(head) != 1 or not _NAME.match(head[0]):
                raise GraphSyntaxError(f"bad edge header {part!r}", lineno)
            toks = body.split()
            if len(toks) != 4:
                raise GraphSyntaxError("edge needs: origin terminus labelAtOrigin labelAtTerminus",
                                       lineno)
            o, t = toks[0], toks[1]
            edges.append((head[0], o, t, _int(toks[2], lineno), _int(toks[3], lineno), lineno))
    if vertices is None:
        raise GraphSyntaxError("no vertex declaration", 1)
    vs = set(vertices)
    names = set()
    for name, o, t, _, _, lineno in edges:
        if o not in vs or t not in vs:
            raise GraphSyntaxError(f"edge {name} uses an undeclared vertex", lineno)
        if name in names:
            raise GraphSyntaxError(f"edge {name} declared twice", lineno)
        names.add(name)
    return make_graph(vertices, [e[:5] for e in edges])


def _names(toks, lineno):
    if not toks:
        raise GraphSyntaxError("empty vertex list", lineno)
    for t in toks:
        if not _NAME.match(t):
            raise GraphSyntaxError(f"bad vertex name {t!r}", lineno)
    if len(set(toks)) != len(toks):
        raise GraphSyntaxError("duplicate vertex name", lineno)
    return toks


def serialize_graph(g):
    """One-line form, accepted by parse_graph."""
    parts = [" ".join(g.vertices)]
    for e in g.edges:
        parts.append(f"{e.name}: {e.origin} {e.terminus} {e.label} {e.label_rev}")
    return "; ".join(parts)


def format_gbs(g):
    """Multi-line .gbs file text."""
    lines = ["vertices: " + " ".join(g.vertices)]
    lines += [f"edge {e.name}: {e.origin} {e.terminus} {e.label} {e.label_rev}" for e in g.edges]
    return "\n".join(lines) + "\n"


def graph_to_json(g):
    return {"vertices": list(g.vertices),
            "edges": [{"name": e.name, "origin": e.origin, "terminus": e.terminus,
                       "labels": [e.label, e.label_rev]} for e in g.edges]}


def graph_from_json(obj):
    try:
        edges = [(e["name"], e["origin"], e["terminus"], int(e["labels"][0]), int(e["labels"][1]))
                 for e in obj["edges"]]
        vertices = list(obj["vertices"])
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise GraphSyntaxError(f"bad JSON graph: {exc}", 1) from None
    for e in edges:
        check_label(e[3])
        check_label(e[4])
    return make_graph(vertices, edges)


# -- moves as data ------------------------------------------------------------

@dataclass(frozen=True)
class Move:
    kind: str            # slide, induction, a_plus, a_minus, collapse, expansion
    edge: str = ""
    path: tuple = ()
    params: dict = field(default_factory=dict, hash=False, compare=True)

    def to_json(self):
        return {"kind": self.kind, "edge": self.edge, "path": list(self.path),
                "params": self.params}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["kind"], obj.get("edge", ""), tuple(obj.get("path", ())),
                   dict(obj.get("params", {})))


@dataclass
class MoveSequence:
    fingerprint: str
    moves: list = field(default_factory=list)

    def to_json(self):
        return {"initial": self.fingerprint, "moves": [m.to_json() for m in self.moves]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["initial"], [Move.from_json(m) for m in obj["moves"]])

    def __len__(self):
        return len(self.moves)


# -- signs --------------------------------------------------------------------

@dataclass(frozen=True)
class GraphMatch:
    """How to turn a source graph into a target graph.

    First negate labels per ``vertex_flips`` (all half-edges leaving those
    vertices) and ``edge_flips`` (both ends of those edges), then rename
    vertices by ``vertex_map`` and edges by ``edge_map``, which sends an edge
    name to (target name, reversed?).
    """

    vertex_map: dict = field(default_factory=dict)
    edge_map: dict = field(default_factory=dict)
    vertex_flips: tuple = ()
    edge_flips: tuple = ()

    def to_json(self):
        return {"vertex_map": dict(sorted(self.vertex_map.items())),
                "edge_map": {k: [v[0], bool(v[1])] for k, v in sorted(self.edge_map.items())},
                "vertex_flips": sorted(self.vertex_flips),
                "edge_flips": sorted(self.edge_flips)}

    @classmethod
    def from_json(cls, obj):
        return cls(dict(obj["vertex_map"]),
                   {k: (v[0], bool(v[1])) for k, v in obj["edge_map"].items()},
                   tuple(obj["vertex_flips"]), tuple(obj["edge_flips"]))


def flip_signs(g, vertex_flips=(), edge_flips=()):
    vf, ef = set(vertex_flips), set(edge_flips)
    edges = []
    for e in g.edges:
        a, b = e.label, e.label_rev
        if e.origin in vf:
            a = -a
        if e.terminus in vf:
            b = -b
        if e.name in ef:
            a, b = -a, -b
        edges.append(replace(e, label=a, label_rev=b))
    return LabeledGraph(g.vertices, tuple(edges))


def apply_match(g, m):
    g = flip_signs(g, m.vertex_flips, m.edge_flips)
    vmap = {v: m.vertex_map.get(v, v) for v in g.vertices}
    edges = []
    for e in g.edges:
        name, rev = m.edge_map.get(e.name, (e.name, False))
        o, t, a, b = vmap[e.origin], vmap[e.terminus], e.label, e.label_rev
        if rev:
            o, t, a, b = t, o, b, a
        edges.append(Edge(name, o, t, a, b))
    return LabeledGraph(tuple(vmap[v] for v in g.vertices), tuple(edges))


def _vertex_signs(g, wanted):
    """Vertex signs eps with eps(o)*eps(t) = wanted[e] on a BFS spanning forest."""
    eps = {}
    for root in g.vertices:
        if root in eps:
            continue
        eps[root] = 1
        todo = deque([root])
        while todo:
            u = todo.popleft()
            for e in g.edges:
                if e.is_loop:
                    continue
                for a, b in ((e.origin, e.terminus), (e.terminus, e.origin)):
                    if a == u and b not in eps:
                        eps[b] = eps[u] * wanted[e.name]
                        todo.append(b)
    return eps


def sign_obstructed(g):
    """True when no admissible sign change makes every label positive."""
    tau = {e.name: (1 if e.label > 0 else -1) * (1 if e.label_rev > 0 else -1) for e in g.edges}
    eps = _vertex_signs(g, tau)
    return any(eps[e.origin] * eps[e.terminus] != tau[e.name] for e in g.edges)


def normalize_signs(g):
    """Canonical sign pattern plus the flips that produced it.

    Vertex signs come from a breadth-first spanning forest rooted at the first
    declared vertex; then every edge with a negative origin label is flipped.
    The result is all-positive whenever that is achievable.  Applying the
    returned match to the result gives back ``g``.
    """
    tau = {e.name: (1 if e.label > 0 else -1) * (1 if e.label_rev > 0 else -1) for e in g.edges}
    eps = _vertex_signs(g, tau)
    vflips = tuple(v for v in g.vertices if eps[v] < 0)
    h = flip_signs(g, vflips)
    eflips = tuple(e.name for e in h.edges if e.label < 0)
    h = flip_signs(h, (), eflips)
    return h, GraphMatch(vertex_flips=vflips, edge_flips=eflips)


def absolute(g):
    """Same graph with every label replaced by its absolute value."""
    return LabeledGraph(g.vertices, tuple(replace(e, label=abs(e.label), label_rev=abs(e.label_rev))
                                          for e in g.edges))


# -- reduction ----------------------------------------------------------------

def collapse_edge(g, name):
    """Contract a non-loop edge whose label is ±1 at one end."""
    e = g.edge(name)
    if e.is_loop:
        raise GbsError(f"edge {name} is a loop")
    if abs(e.label) == 1:
        gone, keep, factor = e.origin, e.terminus, e.label_rev * e.label
    elif abs(e.label_rev) == 1:
        gone, keep, factor = e.terminus, e.origin, e.label * e.label_rev
    else:
        raise GbsError(f"edge {name} is not collapsible")
    edges = []
    for f in g.edges:
        if f.name == name:
            continue
        o, t, a, b = f.origin, f.terminus, f.label, f.label_rev
        if o == gone:
            o, a = keep, a * factor
        if t == gone:
            t, b = keep, b * factor
        edges.append(Edge(f.name, o, t, check_label(a), check_label(b)))
    return LabeledGraph(tuple(v for v in g.vertices if v != gone), tuple(edges))


def collapsible_edges(g):
    return [e.name for e in g.edges
            if not e.is_loop and (abs(e.label) == 1 or abs(e.label_rev) == 1)]


def is_elementary(g):
    if len(g.vertices) == 1 and not g.edges:
        return True
    if len(g.vertices) == 1 and len(g.edges) == 1:
        e = g.edges[0]
        return abs(e.label) == 1 and abs(e.label_rev) == 1
    return False


def reduce(g):
    """Collapse edges until none is collapsible; return (graph, MoveSequence)."""
    seq = MoveSequence(g.fingerprint())
    while True:
        names = collapsible_edges(g)
        if not names:
            break
        e = g.edge(names[0])
        seq.moves.append(Move("collapse", e.name, (), {"labels": [e.label, e.label_rev],
                                                       "origin": e.origin,
                                                       "terminus": e.terminus}))
        g = collapse_edge(g, names[0])
    if is_elementary(g):
        raise ElementaryGroup("reduced graph presents an elementary group")
    return g, seq


@dataclass(frozen=True)
class RoseShape:
    petals: tuple
    n: int


def rose_shape(g):
    if len(g.vertices) != 1:
        return None
    return RoseShape(tuple(e.name for e in g.edges), len(g.edges))


def rose_key(g):
    """Invariant of a rose up to relabeling, orientation and admissible signs."""
    return tuple(sorted((min(abs(a), abs(b)), max(abs(a), abs(b)), (a > 0) == (b > 0))
                        for a, b in g.pairs()))


# -- structural matching ------------------------------------------------------

def graphs_equal_up_to_relabeling(g1, g2):
    """A GraphMatch sending g1 onto g2 exactly, or None."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None

    def sig(e):
        return (min(abs(e.label), abs(e.label_rev)), max(abs(e.label), abs(e.label_rev)),
                e.is_loop)

    if sorted(map(sig, g1.edges)) != sorted(map(sig, g2.edges)):
        return None
    if len(g1.vertices) == 1 and rose_key(g1) != rose_key(g2):
        return None
    e1 = list(g1.edges)
    used = set()
    vmap, vinv = {}, {}
    emap = {}

    def bind(a, b, undo):
        if a in vmap:
            return vmap[a] == b
        if b in vinv:
            return False
        vmap[a], vinv[b] = b, a
        undo.append(a)
        return True

    def search(i):
        if i == len(e1):
            if len(g1.vertices) == 1 and not e1:
                vmap[g1.vertices[0]] = g2.vertices[0]
            return _finish_match(g1, g2, vmap, emap)
        e = e1[i]
        for f in g2.edges:
            if f.name in used or sig(f) != sig(e):
                continue
            for rev in (False, True):
                a, b = (abs(f.label_rev), abs(f.label)) if rev else (abs(f.label), abs(f.label_rev))
                if (abs(e.label), abs(e.label_rev)) != (a, b):
                    continue
                fo, ft = (f.terminus, f.origin) if rev else (f.origin, f.terminus)
                undo = []
                if bind(e.origin, fo, undo) and bind(e.terminus, ft, undo):
                    used.add(f.name)
                    emap[e.name] = (f.name, rev)
                    got = search(i + 1)
                    if got is not None:
                        return got
                    used.discard(f.name)
                    del emap[e.name]
                for a in undo:
                    del vinv[vmap.pop(a)]
        return None

    return search(0)


def _finish_match(g1, g2, vmap, emap):
    # choose vertex signs eps and edge flips eta so that eps(u)*eta*x = x'
    g2_edges = {f.name: f for f in g2.edges}
    want = {}
    for e in g1.edges:
        name, rev = emap[e.name]
        f = g2_edges[name]
        a2, b2 = (f.label_rev, f.label) if rev else (f.label, f.label_rev)
        s1 = 1 if (e.label > 0) == (a2 > 0) else -1
        s2 = 1 if (e.label_rev > 0) == (b2 > 0) else -1
        want[e.name] = (s1, s2)
    eps = _vertex_signs(g1, {k: s1 * s2 for k, (s1, s2) in want.items()})
    eflips = []
    for e in g1.edges:
        s1, s2 = want[e.name]
        if eps[e.origin] * eps[e.terminus] != s1 * s2:
            return None
        if eps[e.origin] != s1:
            eflips.append(e.name)
    m = GraphMatch(dict(vmap), dict(emap),
                   tuple(v for v in g1.vertices if eps[v] < 0), tuple(eflips))
    return m if apply_match(g1, m).same(g2) else None
