"""Isomorphism of non-ascending rose GBS groups with at most three petals.

Pipeline: reduce and sign-normalize both graphs, reject on cheap invariants
(shape, modular image, mobile count), enumerate the graphs reachable by
sliding non-mobile edges only, then match mobile edges one geometric edge at
a time.  A Yes answer comes with a certificate that is replayed before it is
returned.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .arith import factor, factor_rational, hermite_rows, prime_basis, solve_integer_linear
from .ascending import is_ascending
from .decision import Yes, No, Inconclusive, SearchBudget
from .errors import (ElementaryGroup, GbsError, LabelTooLarge, NotMobile, SignObstruction,
                     UnsupportedClass)
from .graph import (GraphMatch, HalfEdge, Move, MoveSequence, apply_match,
                    graphs_equal_up_to_relabeling, half, normalize_signs, reduce, rose,
                    rose_key, rose_shape, sign_obstructed)
from .mobility import mobile_edges
from .moves import apply_move, apply_slide, slide_move
from .reach import Congruence, RoseArith, find_path
from .smc import has_smc
from .slide_algebra import SlideSymbol


# -- non-mobile part ----------------------------------------------------------

@dataclass
class NonMobileSubgraph:
    edges: tuple          # names of the retained (non-mobile) edges
    mobile: tuple
    graph: object = None  # the subgraph as a rose, None when empty

    def key(self):
        return rose_key(self.graph) if self.graph is not None else ()


def _sub_rose(g, names):
    if not names:
        return None
    return rose(*[(g.edge(n).label, g.edge(n).label_rev) for n in names], names=list(names))


def non_mobile_subgraph(g, budget=SearchBudget(), mobile=None):
    if mobile is None:
        got = mobile_edges(g, budget)
        if got.inconclusive:
            raise GbsError("mobility is undecided: " + got.reason)
        mobile = got.witness
    keep = tuple(e.name for e in g.edges if e.name not in set(mobile))
    return NonMobileSubgraph(keep, tuple(mobile), _sub_rose(g, keep))


@dataclass
class SnmEntry:
    graph: object
    moves: list           # slide Moves from the start graph


def enumerate_snm(g, cap=10_000, budget=SearchBudget(), mobile=None):
    """Graphs reachable by single-step slides of non-mobile edges, up to relabeling.

    Decision whose witness is the list of ``SnmEntry`` in discovery order.
    """
    if rose_shape(g) is None:
        raise UnsupportedClass("non-mobile slide enumeration is implemented for roses")
    if mobile is None:
        got = mobile_edges(g, budget)
        if got.inconclusive:
            return Inconclusive("mobility undecided: " + got.reason)
        mobile = got.witness
    movable = [e.name for e in g.edges if e.name not in set(mobile)]
    seen = {}
    out = []

    def add(h, moves):
        bucket = seen.setdefault(rose_key(h), [])
        if any(graphs_equal_up_to_relabeling(h, x) is not None for x in bucket):
            return False
        bucket.append(h)
        out.append(SnmEntry(h, moves))
        return True

    add(g, [])
    if len(out) > cap:
        return Inconclusive(f"more than {cap} graphs", collected=len(out))
    queue = deque([out[0]])
    while queue:
        cur = queue.popleft()
        h = cur.graph
        for name in movable:
            for end in (HalfEdge(name), HalfEdge(name, True)):
                for over in h.half_edges():
                    if over.edge == name or h.label(end) % h.label(over):
                        continue
                    try:
                        nxt, mv = slide_move(h, end, [over])
                    except LabelTooLarge:
                        return Inconclusive("labels outgrew the integer limit")
                    if add(nxt, cur.moves + [mv]):
                        if len(out) > cap:
                            return Inconclusive(f"more than {cap} graphs", collected=len(out))
                        queue.append(out[-1])
    return Yes(out)


# -- mobile edges -------------------------------------------------------------

def _end_to(g, h, goal, budget):
    """Decision(path) sliding end h of g to the label ``goal``."""
    start_label = g.label(h)
    if abs(start_label) == abs(goal):
        return Yes(())
    ra = RoseArith(g)
    target = factor(abs(goal), ra.basis)
    if target.unit != 1:
        return No(f"unit part {target.unit} of {goal} is out of reach", exhaustive=True)
    steps = ra.steps_avoiding(h.edge)
    if not steps:
        return No("no other petal to slide over", exhaustive=True)
    start = ra.vec[h]
    need = [b - a for a, b in zip(start, target.exps)]
    cols = []
    for f in g.edges:
        if f.name != h.edge:
            cols.append(factor_rational(Fraction(f.label_rev, f.label), ra.basis).exps)
    A = [[c[i] for c in cols] for i in range(len(ra.basis))]
    if solve_integer_linear(A, need).no:
        return No("exponent system has no integer solution", exhaustive=True)
    try:
        same = Congruence(steps).same_class(start, target.exps)
    except RuntimeError:
        same = None
    if same is False:
        return No("target label is not in the reachable class", exhaustive=True)
    path = find_path(start, target.exps, steps, budget.slack, budget.max_states)
    if path is None:
        return Inconclusive("no realizing path found within the budget")
    return Yes(tuple(path))


def match_mobile_edge(g, e, target, budget=SearchBudget(), mobile=None):
    """Slides of e and ē only that turn the label pair of e into ``target``
    (an unordered pair).  Decision whose witness is a list of SlideSymbol."""
    name = half(e).edge
    if mobile is None:
        got = mobile_edges(g, budget)
        mobile = got.witness if got.yes else None
    if mobile is not None and name not in mobile:
        raise NotMobile(f"{name} is not a mobile edge")
    a, b = target
    pending = False
    for want in ((a, b), (b, a)):
        paths = []
        for h, goal in zip((HalfEdge(name), HalfEdge(name, True)), want):
            got = _end_to(g, h, goal, budget)
            if not got.yes:
                pending |= got.inconclusive
                break
            paths.append((h, got.witness))
        else:
            return Yes([SlideSymbol(h, p) for h, p in paths if p])
    if pending:
        return Inconclusive("a label search ran out of budget")
    return No("neither orientation of the target pair is reachable", exhaustive=True)


# -- invariants -----------------------------------------------------------------

def modular_lattice(g, basis):
    """Hermite form of the modular image: exponent vectors of the petal moduli,
    with a final coordinate for the sign taken mod 2."""
    rows = []
    for e in g.edges:
        q = factor_rational(Fraction(e.label_rev, e.label), basis)
        if q.num_unit != 1 or q.den_unit != 1:
            raise GbsError("basis does not cover the labels")
        rows.append(list(q.exps) + [0 if q.sign > 0 else 1])
    rows.append([0] * len(basis) + [2])
    return hermite_rows(rows)


def same_modular_image(g1, g2):
    labels = [x for g in (g1, g2) for e in g.edges for x in (e.label, e.label_rev)]
    basis = prime_basis(*labels)
    return modular_lattice(g1, basis) == modular_lattice(g2, basis)


# -- certificates -------------------------------------------------------------

@dataclass
class IsoCertificate:
    reduce_a: MoveSequence
    reduce_b: MoveSequence
    signs_a: GraphMatch          # normalized A -> reduced A
    signs_b: GraphMatch
    non_mobile: list             # slide Moves
    mobile: list                 # list of lists of slide Moves, one per matched edge
    final: GraphMatch            # last graph -> normalized B
    info: dict = field(default_factory=dict)

    def slides(self):
        return list(self.non_mobile) + [m for group in self.mobile for m in group]

    def to_json(self):
        return {
            "schema": "gbs-cert/v1",
            "reduce_a": self.reduce_a.to_json(),
            "reduce_b": self.reduce_b.to_json(),
            "signs_a": self.signs_a.to_json(),
            "signs_b": self.signs_b.to_json(),
            "non_mobile": [m.to_json() for m in self.non_mobile],
            "mobile": [[m.to_json() for m in grp] for grp in self.mobile],
            "final": self.final.to_json(),
            "info": self.info,
        }

    @classmethod
    def from_json(cls, obj):
        return cls(MoveSequence.from_json(obj["reduce_a"]), MoveSequence.from_json(obj["reduce_b"]),
                   GraphMatch.from_json(obj["signs_a"]), GraphMatch.from_json(obj["signs_b"]),
                   [Move.from_json(m) for m in obj["non_mobile"]],
                   [[Move.from_json(m) for m in grp] for grp in obj["mobile"]],
                   GraphMatch.from_json(obj["final"]), dict(obj.get("info", {})))


def _unflip(match):
    """Sign flips are involutions; only the flip part of the match is used."""
    return GraphMatch(vertex_flips=match.vertex_flips, edge_flips=match.edge_flips)


def verify_certificate(ga, gb, cert):
    """Replay every recorded move; True when the end of the chain from ga is
    carried onto the normalized reduced form of gb by the final match."""
    try:
        a = ga
        for mv in cert.reduce_a.moves:
            a = apply_move(a, mv)
        b = gb
        for mv in cert.reduce_b.moves:
            b = apply_move(b, mv)
        a = apply_match(a, _unflip(cert.signs_a))
        b = apply_match(b, _unflip(cert.signs_b))
        for mv in cert.slides():
            if mv.kind != "slide":
                return False
            a = apply_slide(a, mv.edge, mv.path)
        return apply_match(a, cert.final).same(b)
    except (GbsError, KeyError, ValueError):
        return False


# -- the decision -------------------------------------------------------------

def _prepare(g, side):
    r, seq = reduce(g)
    if sign_obstructed(r):
        raise SignObstruction(f"graph {side} cannot be made all-positive by admissible sign changes")
    n, m = normalize_signs(r)
    return r, seq, n, m


def _slide_moves(g, symbols):
    moves = []
    for s in symbols:
        g, mv = slide_move(g, s.edge, s.path)
        moves.append(mv)
    return g, moves


def _match_all(start, order, targets, budget, mobile):
    """Match mobile edges of ``start`` in ``order`` to label pairs ``targets``.

    Returns Decision(list of (graph, moves per edge)).
    """
    cur = start
    groups = []
    for name, target in zip(order, targets):
        got = match_mobile_edge(cur, name, target, budget, mobile)
        if not got.yes:
            return got
        cur, moves = _slide_moves(cur, got.witness)
        groups.append(moves)
    return Yes((cur, groups))


def are_isomorphic(ga, gb, budget=SearchBudget()):
    """Decision whose Yes witness is an IsoCertificate."""
    try:
        _, seq_a, na, signs_a = _prepare(ga, "A")
    except ElementaryGroup:
        raise UnsupportedClass("graph A presents an elementary group") from None
    try:
        _, seq_b, nb, signs_b = _prepare(gb, "B")
    except ElementaryGroup:
        return No("graph B presents an elementary group, graph A does not", stage="reduce")
    shape = rose_shape(na)
    if shape is None or shape.n > 3:
        raise UnsupportedClass("graph A must reduce to a rose with at most three petals")
    asc = is_ascending(na, budget)
    if asc.inconclusive:
        return Inconclusive("ascending test undecided: " + asc.reason, stage="ascending")
    if asc.witness:
        raise UnsupportedClass("graph A presents an ascending group")
    shape_b = rose_shape(nb)
    if shape_b is None or shape_b.n != shape.n:
        return No("reduced shapes differ", stage="shape")
    if not same_modular_image(na, nb):
        return No("modular images differ", stage="modular-image")
    if has_smc(nb, budget).yes:
        return No("graph B presents an ascending group", stage="ascending")
    mob_a, mob_b = mobile_edges(na, budget), mobile_edges(nb, budget)
    if mob_a.inconclusive or mob_b.inconclusive:
        return Inconclusive("mobility undecided", stage="mobility")
    mob_a, mob_b = mob_a.witness, mob_b.witness
    if len(mob_a) != len(mob_b):
        return No("numbers of mobile edges differ", stage="mobility")
    nm_b = non_mobile_subgraph(nb, budget, mob_b)
    snm = enumerate_snm(na, budget.snm_cap, budget, mob_a)
    if snm.inconclusive:
        return Inconclusive(snm.reason, stage="snm")
    candidates = [c for c in snm.witness
                  if non_mobile_subgraph(c.graph, budget, mob_a).key() == nm_b.key()]
    if not candidates:
        return No("no non-mobile slide class matches", stage="snm", snm_size=len(snm.witness))
    targets = {n: (nb.edge(n).label, nb.edge(n).label_rev) for n in mob_b}
    pending = False
    for cand in candidates:
        for order in permutations(mob_a):
            for assign in permutations(mob_b):
                got = _match_all(cand.graph, order, [targets[t] for t in assign], budget, mob_a)
                if got.inconclusive:
                    pending = True
                if not got.yes:
                    continue
                final_graph, groups = got.witness
                final = graphs_equal_up_to_relabeling(final_graph, nb)
                if final is None:
                    continue
                cert = IsoCertificate(seq_a, seq_b, signs_a, signs_b, list(cand.moves), groups,
                                      final, {"order": list(order), "assignment": list(assign)})
                if not verify_certificate(ga, gb, cert):
                    pending = True
                    continue
                return Yes(cert, "slide sequence found", stage="match")
    if pending:
        return Inconclusive("some branch was cut off by a budget", stage="match")
    return No("every candidate and assignment was refuted", stage="match")
