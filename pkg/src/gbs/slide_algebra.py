"""Commuting slide moves of distinct edges in a rose.

A slide sequence is a list of ``SlideSymbol``s.  ``commute_pair`` rewrites an
adjacent pair (first slides edge E, second slides edge F) into an equivalent
sequence whose F-slides come first, or reports the shape as one that cannot
occur between two mobile edges of a non-ascending group.  ``rearrange_by_edge``
bubbles a whole sequence into per-edge groups.

Renamings: a rewrite may reach a graph that agrees with the original result
only after swapping edge names.  That is recorded as a ``GraphMatch`` sending
the rewritten result onto the original one; later slides are renamed through
it.
"""

from dataclasses import dataclass, field

from .decision import SearchBudget
from .errors import InvalidSequence, ForbiddenEncountered, GbsError
from .graph import GraphMatch, HalfEdge, apply_match, graphs_equal_up_to_relabeling, half
from .mobility import mobile_edges
from .moves import apply_slide, remove_redundant_subcycles
from .reach import RoseArith, Congruence, find_path

FORBIDDEN = frozenset("fghopqr")


@dataclass(frozen=True)
class SlideSymbol:
    """Slide of the half-edge ``edge`` along ``path``.

    ``tag`` is the edge id the slide had before any renaming; grouping works on
    tags, replay on the current names.
    """
    edge: HalfEdge
    path: tuple
    tag: str = field(default=None, compare=False)
    source: object = field(default=None, compare=False)   # symbol before renaming

    @property
    def group(self):
        return self.tag or self.edge.edge

    def __str__(self):
        return f"{self.edge}/" + ".".join(str(h) for h in self.path)

    def to_json(self):
        out = {"edge": str(self.edge), "path": [str(h) for h in self.path],
               "tag": self.group}
        if self.source is not None:
            out["renamed_from"] = self.source.to_json()
        return out


def sym(edge, path):
    return SlideSymbol(half(edge), tuple(half(h) for h in path))


@dataclass
class Rearranged:
    symbols: list
    renaming: GraphMatch      # rewritten result -> original result
    case: str
    method: str = "rewrite"   # "rewrite" or "reach"


@dataclass
class Forbidden:
    case: str


def replay_symbols(g, symbols):
    for i, s in enumerate(symbols):
        try:
            g = apply_slide(g, s.edge, s.path)
        except (GbsError, KeyError) as exc:
            raise InvalidSequence(f"slide {i} ({s}) does not replay: {exc}") from None
    return g


def _bar_path(path):
    return tuple(h.bar for h in reversed(path))


def _first_hit(path, halves):
    for i, h in enumerate(path):
        if h in halves:
            return i, h
    return None, None


def _match_from(pairs):
    """GraphMatch from (new half-edge, old half-edge) correspondences."""
    return GraphMatch({}, {a.edge: (b.edge, a.rev != b.rev) for a, b in pairs})


def is_identity(m):
    return (not m.vertex_flips and not m.edge_flips
            and all(v == k for k, v in m.vertex_map.items())
            and all(v == (k, False) for k, v in m.edge_map.items()))


def rename_symbol(s, m):
    """Express a slide written for the original graph in the rewritten graph's names."""
    inv = {}
    for name, (target, rev) in m.edge_map.items():
        inv[target] = (name, rev)

    def tr(h):
        if h.edge not in inv:
            return h
        name, rev = inv[h.edge]
        return HalfEdge(name, h.rev != rev)

    out = SlideSymbol(tr(s.edge), tuple(tr(h) for h in s.path), s.group, s.source or s)
    return s if out == s else out


def compose(m1, m2):
    """Match equivalent to applying m1 then m2."""
    e1 = m1.edge_map
    emap = {}
    names = set(e1) | {k for k in m2.edge_map if k not in {v[0] for v in e1.values()}}
    for a in names:
        b, r1 = e1.get(a, (a, False))
        c, r2 = m2.edge_map.get(b, (b, False))
        emap[a] = (c, r1 != r2)
    vmap = {}
    for v in set(m1.vertex_map) | set(m2.vertex_map):
        w = m1.vertex_map.get(v, v)
        vmap[v] = m2.vertex_map.get(w, w)
    eflips = tuple(sorted(a for a in names
                          if (a in m1.edge_flips) != (e1.get(a, (a, False))[0] in m2.edge_flips)))
    vflips = tuple(sorted(v for v in set(m1.vertex_flips) | set(m2.vertex_flips) | set(vmap)
                          if (v in m1.vertex_flips)
                          != (m1.vertex_map.get(v, v) in m2.vertex_flips)))
    return GraphMatch(vmap, emap, vflips, eflips)


def _classify(x, A, y, B):
    """Case letter from the shape of e/A . f/B with e = x, f = y."""
    i, hit_a = _first_hit(A, {y, y.bar})
    j, hit_b = _first_hit(B, {x, x.bar})
    single = len(A) == 1 and len(B) == 1
    a_side = None if hit_a is None else ("f" if hit_a == y else "fbar")
    b_side = None if hit_b is None else ("e" if hit_b == x else "ebar")
    table = {
        (None, None): "aa",
        ("f", None): "bk", ("fbar", None): "cl",
        (None, "e"): "dm", (None, "ebar"): "en",
        ("f", "e"): "fo", ("f", "ebar"): "gp", ("fbar", "ebar"): "hq",
        ("fbar", "e"): "ir",
    }
    letter = table[(a_side, b_side)][0 if single else 1]
    return letter, i, j


def _rewrite_candidate(case, x, A, i, y, B, j):
    """Rewritten symbols and renaming for a case letter, or None."""
    if case == "a":
        return [SlideSymbol(y, B), SlideSymbol(x, A)], None
    if case in "bk":        # e/A f A' . f/B  =  f/B . e/A B f A'
        return [SlideSymbol(y, B), SlideSymbol(x, A[:i] + B + A[i:])], None
    if case in "cl":        # e/A f~ A' . f/B  =  f/B . e/A f~ B~ A'
        return [SlideSymbol(y, B), SlideSymbol(x, A[:i + 1] + _bar_path(B) + A[i + 1:])], None
    if case in "dm":        # e/A . f/B e B'  =  f/B A~ e B' . e/A
        return [SlideSymbol(y, B[:j] + _bar_path(A) + B[j:]), SlideSymbol(x, A)], None
    if case in "en":        # e/A . f/B e~ B'  =  f/B e~ A B' . e/A
        return [SlideSymbol(y, B[:j + 1] + A + B[j + 1:]), SlideSymbol(x, A)], None
    if case in "ir":        # e/A f~ A' . f/B e B' = f/A' . f~/A~ e . e/A . e~/B'
        a1, a2, b1, b2 = A[:i], A[i + 1:], B[:j], B[j + 1:]
        if a2 != b1:
            return None, None
        out = [SlideSymbol(y, a2), SlideSymbol(y.bar, _bar_path(a1) + (x,)),
               SlideSymbol(x, a1), SlideSymbol(x.bar, b2)]
        # the old x now sits where the new y is, and the old y where the new x~ is
        return [s for s in out if s.path], _match_from([(y, x), (x.bar, y)])
    raise AssertionError(case)


def _check(g, symbols, renaming, target):
    try:
        h = replay_symbols(g, symbols)
    except InvalidSequence:
        return None
    if renaming is None:
        return GraphMatch() if h.same(target) else None
    return renaming if apply_match(h, renaming).same(target) else None


def _end_path(ra, congruences, edge, start_label, goal_label, budget):
    """Slide path taking an end of ``edge`` from one label to another, or None."""
    if abs(start_label) == abs(goal_label):
        return ()
    steps = ra.steps_avoiding(edge)
    if ra.unit(abs(start_label)) != ra.unit(abs(goal_label)) or not steps:
        return None
    start, goal = ra.exps(abs(start_label)), ra.exps(abs(goal_label))
    if edge not in congruences:
        try:
            congruences[edge] = Congruence(steps)
        except RuntimeError:
            congruences[edge] = None
    cong = congruences[edge]
    if cong is not None and not cong.same_class(start, goal):
        return None
    path = find_path(start, goal, steps, budget.slack, budget.max_states)
    return None if path is None else tuple(path)


def _phase(g, edge, want, extra, budget):
    """Symbols sliding both ends of ``edge`` to the labels ``want`` (fwd, rev)."""
    ra = RoseArith(g, extra)
    out = []
    cong = {}
    for h, target in zip((HalfEdge(edge), HalfEdge(edge, True)), want):
        p = _end_path(ra, cong, edge, g.label(h), target, budget)
        if p is None:
            return None
        if p:
            out.append(SlideSymbol(h, p))
    return out


def _reach_candidate(g, x, y, target, budget):
    """Slides of y's edge, then of x's edge, reaching ``target`` up to renaming.

    Each end of a rose edge slides independently of the other end, so every
    phase splits into two exact reachability questions in exponent space.
    """
    E, F = x.edge, y.edge
    extra = [v for t in target.edges for v in (abs(t.label), abs(t.label_rev))]
    tl = {t.name: (t.label, t.label_rev) for t in target.edges}
    options = []
    for f_to, e_to in ((F, E), (E, F)):
        for rf in (False, True):
            for re_ in (False, True):
                options.append(((f_to, rf), (e_to, re_)))
    for (f_to, rf), (e_to, re_) in options:
        want_f = tl[f_to][::-1] if rf else tl[f_to]
        want_e = tl[e_to][::-1] if re_ else tl[e_to]
        first = _phase(g, F, want_f, extra, budget)
        if first is None:
            continue
        mid = replay_symbols(g, first)
        second = _phase(mid, E, want_e, extra, budget)
        if second is None:
            continue
        symbols = first + second
        h = replay_symbols(g, symbols)
        m = GraphMatch() if h.same(target) else graphs_equal_up_to_relabeling(h, target)
        if m is not None:
            return symbols, m
    return None


def _tagged(symbols, first, second):
    """Slides of the second slide's edge inherit its tag, the rest the first's."""
    out = []
    for s in symbols:
        tag = second.group if s.edge.edge == second.edge.edge else first.group
        out.append(SlideSymbol(s.edge, s.path, tag, s.source))
    return out


def commute_pair(g, first, second, mobile=None, budget=SearchBudget()):
    """Rewrite ``first . second`` so that the slide of the second edge comes first.

    ``mobile`` is the set of mobile edge names of g (computed when omitted); a
    forbidden shape is only reported when both edges are mobile, since the
    impossibility argument relies on it.
    """
    target = replay_symbols(g, [first, second])
    g1 = replay_symbols(g, [first])
    x, y = first.edge, second.edge
    A = tuple(remove_redundant_subcycles(g, first.path))
    B = tuple(remove_redundant_subcycles(g1, second.path))
    if x.edge == y.edge:
        if x == y:
            return Rearranged([SlideSymbol(x, A + B, first.group)], GraphMatch(), "merge")
        cand = [SlideSymbol(y, B), SlideSymbol(x, A)]
        m = _check(g, cand, None, target)
        if m is not None:
            return Rearranged(_tagged(cand, first, second), m, "j")
        raise InvalidSequence("opposite ends of one edge failed to commute")
    case, i, j = _classify(x, A, y, B)
    symbols = None
    if case not in "fghopq":
        # a None here means the middle segments of the two-graph rewrite differ
        symbols, renaming = _rewrite_candidate(case, x, A, i, y, B, j)
    if symbols is not None:
        m = _check(g, symbols, renaming, target)
        if m is not None:
            return Rearranged(_tagged(symbols, first, second), m, case)
    elif case in FORBIDDEN:
        if mobile is None:
            got = mobile_edges(g, budget)
            mobile = set(got.witness) if got.yes else set()
        if x.edge in mobile and y.edge in mobile:
            return Forbidden(case)
    found = _reach_candidate(g, x, y, target, budget)
    if found is None:
        raise InvalidSequence(f"no grouped rewrite found for case ({case})")
    return Rearranged(_tagged(found[0], first, second), found[1], case, "reach")


# -- whole sequences ----------------------------------------------------------

@dataclass
class Rearrangement:
    symbols: list
    renaming: GraphMatch                  # rearranged final graph -> original final graph
    steps: list = field(default_factory=list)     # (block index, [(case, method), ...])
    measures: list = field(default_factory=list)  # (before, after) complexity per rewrite


def _blocks(symbols):
    """Split into runs of one tag.  A run that slides a single geometric edge
    is normalized to one slide of the forward end followed by one of the
    backward end (the two ends of a rose edge slide independently)."""
    runs = []
    for s in symbols:
        if not s.path:
            continue
        if runs and runs[-1][0].group == s.group:
            runs[-1].append(s)
        else:
            runs.append([s])
    out = []
    for run in runs:
        tag, name = run[0].group, run[0].edge.edge
        block = []
        if all(s.edge.edge == name for s in run):
            for h in (HalfEdge(name), HalfEdge(name, True)):
                path = tuple(x for s in run if s.edge == h for x in s.path)
                if path:
                    block.append(SlideSymbol(h, path, tag))
        else:
            for s in run:
                if block and block[-1].edge == s.edge:
                    block[-1] = SlideSymbol(s.edge, block[-1].path + s.path, tag)
                else:
                    block.append(s)
        out.append(block)
    return out


def _flat(blocks):
    return [s for b in blocks for s in b]


def _rank_fn(order):
    rank = {name: i for i, name in enumerate(order)}
    return lambda s: rank.get(s.group, len(rank))


def complexity(symbols, order):
    """Out-of-order pairs of tag blocks, then the number of blocks."""
    rank = _rank_fn(order)
    ranks = [rank(b[0]) for b in _blocks(symbols)]
    inv = sum(1 for a in range(len(ranks)) for b in range(a + 1, len(ranks))
              if ranks[a] > ranks[b])
    return inv, len(ranks)


def _swap_blocks(g, left, right, rank, mobile, budget, log, max_steps=100):
    """Commute two adjacent blocks; returns (symbols, renaming)."""
    cur = list(left) + list(right)
    total = GraphMatch()
    for _ in range(max_steps):
        pos = next((k for k in range(len(cur) - 1) if rank(cur[k]) > rank(cur[k + 1])), None)
        if pos is None:
            return cur, total
        here = replay_symbols(g, cur[:pos])
        got = commute_pair(here, cur[pos], cur[pos + 1], mobile, budget)
        if isinstance(got, Forbidden):
            raise ForbiddenEncountered(got.case, pos)
        rest = cur[pos + 2:]
        if not is_identity(got.renaming):
            rest = [rename_symbol(s, got.renaming) for s in rest]
            total = compose(got.renaming, total)
        cur = _flat(_blocks(cur[:pos] + got.symbols + rest))
        log.append((got.case, got.method))
    raise GbsError("block swap did not settle")


def rearrange_by_edge(g, seq, edge_order, mobile=None, budget=SearchBudget(), max_steps=10_000):
    """Group a slide sequence by edge following ``edge_order``.

    Groups are by tag, the edge id before renamings; after a renaming a group
    may replay under a different current name.  Works block by block: the
    leftmost pair of adjacent out-of-order blocks is swapped through
    ``commute_pair``.  Renamings leave tags alone, so the count of
    out-of-order block pairs drops at every swap.
    """
    seq = list(seq)
    original_final = replay_symbols(g, seq)
    if mobile is None:
        got = mobile_edges(g, budget)
        mobile = set(got.witness) if got.yes else set()
    rank = _rank_fn(edge_order)
    blocks = _blocks(seq)
    total = GraphMatch()
    out = Rearrangement(_flat(blocks), total)
    for _ in range(max_steps):
        pos = next((k for k in range(len(blocks) - 1)
                    if rank(blocks[k][0]) > rank(blocks[k + 1][0])), None)
        if pos is None:
            break
        here = replay_symbols(g, _flat(blocks[:pos]))
        log = []
        try:
            swapped, m = _swap_blocks(here, blocks[pos], blocks[pos + 1], rank, mobile,
                                      budget, log)
        except ForbiddenEncountered as exc:
            raise ForbiddenEncountered(exc.case, len(_flat(blocks[:pos])) + exc.index) from None
        prefix, suffix = _flat(blocks[:pos]), _flat(blocks[pos + 2:])
        before = complexity(_flat(blocks), edge_order)
        if not is_identity(m):
            suffix = [rename_symbol(s, m) for s in suffix]
            total = compose(m, total)
        blocks = _blocks(prefix + swapped + suffix)
        after = complexity(_flat(blocks), edge_order)
        out.steps.append((pos, log))
        out.measures.append((before, after))
    else:
        raise GbsError("rearrangement did not terminate within the step budget")
    out.symbols, out.renaming = _flat(blocks), total
    final = replay_symbols(g, out.symbols)
    if not apply_match(final, total).same(original_final):
        raise GbsError("rearranged sequence does not reproduce the original result")
    return out
