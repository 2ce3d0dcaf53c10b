"""Label reachability for a single sliding end in a rose, in exponent space.

A half-edge sliding over the other petals of a rose only changes its own
label.  Over a prime basis that closes the labels, one step over a petal end
with label g (far end h) is the guarded vector move x -> x - v(g) + v(h),
allowed when x >= v(g).  Every such move is undone by the move over the
opposite end, so reachable sets are congruence classes.

Three tools live here:
  * bounded breadth-first search (minimal witnesses, explicit members),
  * backward coverability over minimal elements (exact "can we ever get
    componentwise above a target"),
  * completion of the commutative rewriting system (exact "is this exact
    vector reachable").
"""

from collections import deque
from dataclasses import dataclass, field

from .arith import prime_basis, factor
from .graph import HalfEdge


@dataclass(frozen=True)
class Step:
    over: HalfEdge   # the petal end being slid over
    guard: tuple
    delta: tuple


class RoseArith:
    """Exponent vectors for every label of a rose over a closed prime basis."""

    def __init__(self, g, extra=()):
        labels = [x for e in g.edges for x in (e.label, e.label_rev)]
        self.g = g
        self.basis = prime_basis(*labels, *extra)
        self.vec = {}
        for h in g.half_edges():
            self.vec[h] = factor(g.label(h), self.basis).exps

    def exps(self, n):
        return factor(n, self.basis).exps

    def unit(self, n):
        return factor(n, self.basis).unit

    def value(self, x):
        v = 1
        for p, k in zip(self.basis, x):
            v *= p**k
        return v

    def steps_avoiding(self, edge_name):
        """Single-step moves for an end of ``edge_name`` (over every other petal)."""
        out = []
        for h in self.g.half_edges():
            if h.edge == edge_name:
                continue
            g, t = self.vec[h], self.vec[h.bar]
            d = tuple(b - a for a, b in zip(g, t))
            if any(d):
                out.append(Step(h, g, d))
        return out


def fire(x, step):
    if all(a >= b for a, b in zip(x, step.guard)):
        return tuple(a + d for a, d in zip(x, step.delta))
    return None


def covers(x, m):
    return all(a >= b for a, b in zip(x, m))


# -- breadth-first exploration ------------------------------------------------

@dataclass
class Exploration:
    start: tuple
    parent: dict = field(default_factory=dict)     # state -> (prev state, step) or None
    order: list = field(default_factory=list)      # discovery order
    saturated: bool = True
    truncated_by_cap: bool = False
    found: tuple = None
    pumps: list = field(default_factory=list)      # (apex, direction, path-from-apex)

    def path_to(self, x):
        out = []
        while self.parent[x] is not None:
            prev, step = self.parent[x]
            out.append(step.over)
            x = prev
        return out[::-1]

    def ancestors(self, x):
        chain = [x]
        while self.parent[x] is not None:
            x = self.parent[x][0]
            chain.append(x)
        return chain


def explore(start, steps, box, max_states, goal=None, track_pumps=False):
    """Breadth-first search from ``start`` keeping every state inside ``box``.

    Steps are tried in the given order so the first path found to any state
    is the shortest one and, among those, the lexicographically least.
    Stops early when ``goal(state)`` holds.
    """
    ex = Exploration(start)
    ex.parent[start] = None
    ex.order.append(start)
    if goal is not None and goal(start):
        ex.found = start
        return ex
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for s in steps:
            y = fire(x, s)
            if y is None or y in ex.parent:
                continue
            if any(a > b for a, b in zip(y, box)):
                ex.saturated = False
                continue
            if len(ex.parent) >= max_states:
                ex.saturated = False
                ex.truncated_by_cap = True
                return ex
            ex.parent[y] = (x, s)
            ex.order.append(y)
            if track_pumps:
                for anc in ex.ancestors(x):
                    if covers(y, anc) and y != anc:
                        ex.pumps.append((anc, tuple(a - b for a, b in zip(y, anc))))
                        break
            if goal is not None and goal(y):
                ex.found = y
                return ex
            queue.append(y)
    return ex


# -- backward coverability ----------------------------------------------------

class _Node:
    __slots__ = ("vec", "step", "next", "alive")

    def __init__(self, vec, step, nxt):
        self.vec, self.step, self.next, self.alive = vec, step, nxt, True


def coverability(start, steps, targets, max_nodes=200_000):
    """Decide whether some state reachable from ``start`` covers a target.

    Returns (verdict, path) with verdict True/False, or None when
    ``max_nodes`` minimal elements were generated without reaching a fixpoint.
    The backward basis is finite by Dickson's lemma, so the fixpoint is
    always reached given enough room.
    """
    basis = []
    work = deque()
    for t in targets:
        n = _Node(tuple(t), None, None)
        if _insert(basis, n):
            work.append(n)
    hit = next((n for n in basis if covers(start, n.vec)), None)
    made = len(basis)
    while hit is None and work:
        m = work.popleft()
        if not m.alive:
            continue
        for s in steps:
            p = tuple(max(g, a - d) for g, a, d in zip(s.guard, m.vec, s.delta))
            n = _Node(p, s, m)
            if not _insert(basis, n):
                continue
            made += 1
            if covers(start, p):
                hit = n
                break
            work.append(n)
            if made > max_nodes:
                return None, None
    if hit is None:
        return False, None
    path = []
    x = start
    n = hit
    while n.step is not None:
        x = fire(x, n.step)
        assert x is not None
        path.append(n.step.over)
        n = n.next
    return True, path


def _insert(basis, node):
    for b in basis:
        if b.alive and covers(node.vec, b.vec):
            return False
    for b in basis:
        if b.alive and covers(b.vec, node.vec):
            b.alive = False
    basis[:] = [b for b in basis if b.alive]
    basis.append(node)
    return True


# -- exact reachability by completion -----------------------------------------

def _key(v):
    return (sum(v), v)


def _orient(a, b):
    return (a, b) if _key(a) > _key(b) else (b, a)


def normal_form(x, rules):
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            if covers(x, lhs):
                x = tuple(a - l + r for a, l, r in zip(x, lhs, rhs))
                changed = True
                break
    return x


def complete(relations, max_rules=5000):
    """Confluent rewriting system for the congruence generated by ``relations``.

    Relations are pairs of exponent vectors identified with each other.  The
    result is a list of (lhs, rhs) rules under a degree-then-lexicographic
    order; two vectors are congruent iff their normal forms agree.
    """
    rules = []
    for a, b in relations:
        if a != b:
            r = _orient(tuple(a), tuple(b))
            if r not in rules:
                rules.append(r)
    pairs = deque((i, j) for j in range(len(rules)) for i in range(j))
    while pairs:
        i, j = pairs.popleft()
        (l1, r1), (l2, r2) = rules[i], rules[j]
        m = tuple(max(a, b) for a, b in zip(l1, l2))
        if all(min(a, b) == 0 for a, b in zip(l1, l2)):
            continue  # disjoint supports never overlap critically
        a = normal_form(tuple(x - p + q for x, p, q in zip(m, l1, r1)), rules)
        b = normal_form(tuple(x - p + q for x, p, q in zip(m, l2, r2)), rules)
        if a != b:
            rules.append(_orient(a, b))
            k = len(rules) - 1
            pairs.extend((t, k) for t in range(k))
            if len(rules) > max_rules:
                raise RuntimeError("completion exceeded the rule budget")
    return rules


class Congruence:
    """Exact membership test for the reachable class of a sliding end."""

    def __init__(self, steps):
        rels = [(s.guard, tuple(g + d for g, d in zip(s.guard, s.delta))) for s in steps]
        self.rules = complete(rels)

    def same_class(self, x, y):
        return normal_form(tuple(x), self.rules) == normal_form(tuple(y), self.rules)


def find_path(start, goal, steps, slack=8, max_states=200_000):
    """Shortest-within-box path from start to goal, widening the box until found.

    Only call this when the goal is known to be reachable; returns None if
    the state budget runs out first.
    """
    base = [max(a, b, *(s.guard[i] for s in steps)) if steps else max(a, b)
            for i, (a, b) in enumerate(zip(start, goal))]
    while True:
        box = tuple(b + slack for b in base)
        ex = explore(start, steps, box, max_states, goal=lambda y: y == goal)
        if ex.found is not None:
            return ex.path_to(ex.found)
        if ex.truncated_by_cap or ex.saturated:
            return None
        slack *= 2
