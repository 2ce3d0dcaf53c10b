"""Deformation moves on labeled graphs and path bookkeeping."""

from fractions import Fraction

from .arith import factor_rational, prime_basis, check_label
from .errors import (BrokenPath, InvalidSlide, InvalidInduction, InvalidAMove, GbsError)
from .graph import (Edge, HalfEdge, LabeledGraph, Move, MoveSequence, half, collapse_edge,
                    collapsible_edges, rose_shape)


def _path(path):
    return [half(h) for h in path]


def check_consecutive(g, path):
    path = _path(path)
    for h in path:
        if not g.has_edge(h.edge):
            raise BrokenPath(f"unknown edge {h.edge}")
    for a, b in zip(path, path[1:]):
        if g.terminus(a) != g.origin(b):
            raise BrokenPath(f"{a} does not end where {b} starts")
    return path


def path_modulus(g, path):
    """Product of label(bar h) / label(h) over the path, as a Fraction."""
    q = Fraction(1)
    for h in check_consecutive(g, path):
        q *= Fraction(g.label(h.bar), g.label(h))
    return q


def modulus_of_path(g, path, basis=None):
    q = path_modulus(g, path)
    if basis is None:
        basis = prime_basis(*[x for e in g.edges for x in (e.label, e.label_rev)])
    return factor_rational(q, basis)


def first_failing_step(g, e, path):
    """Index of the first step violating the e-edge path conditions, or None.

    Returns -1 when the path does not start at the origin of e.
    """
    e = half(e)
    path = _path(path)
    if not path:
        return None
    if g.origin(path[0]) != g.origin(e):
        return -1
    value = Fraction(g.label(e))
    for i, h in enumerate(path):
        if h.edge == e.edge:
            return i
        if i and g.terminus(path[i - 1]) != g.origin(h):
            return i
        lab = g.label(h)
        if value.denominator != 1 or value.numerator % lab:
            return i
        value = value * g.label(h.bar) / lab
    return None


def is_e_edge_path(g, e, path):
    try:
        return first_failing_step(g, e, path) is None
    except KeyError:
        return False


def remove_redundant_subcycles(g, path):
    """Drop closed subpaths of modulus 1, innermost first then leftmost."""
    path = check_consecutive(g, path)
    while True:
        best = None
        for length in range(1, len(path) + 1):
            for i in range(0, len(path) - length + 1):
                sub = path[i:i + length]
                if g.origin(sub[0]) == g.terminus(sub[-1]) and path_modulus(g, sub) == 1:
                    best = (i, i + length)
                    break
            if best:
                break
        if not best:
            return path
        path = path[:best[0]] + path[best[1]:]


def apply_slide(g, e, path, reduce_path=True):
    """Slide the origin end of half-edge e along path.

    The label of e is multiplied by the modulus of the path and its origin
    moves to the end of the path.
    """
    e = half(e)
    if reduce_path:
        path = remove_redundant_subcycles(g, path)
    else:
        path = check_consecutive(g, path)
    if not path:
        return g
    bad = first_failing_step(g, e, path)
    if bad is not None:
        if bad == -1:
            raise InvalidSlide(f"path does not start at the origin of {e}")
        raise InvalidSlide(f"step {bad} ({path[bad]}) fails for {e}")
    q = path_modulus(g, path)
    new_label = g.label(e) * q
    assert new_label.denominator == 1
    new_origin = g.terminus(path[-1])
    edges = []
    for f in g.edges:
        if f.name == e.edge:
            if e.rev:
                f = Edge(f.name, f.origin, new_origin, f.label, check_label(int(new_label)))
            else:
                f = Edge(f.name, new_origin, f.terminus, check_label(int(new_label)), f.label_rev)
        edges.append(f)
    return LabeledGraph(g.vertices, tuple(edges))


def slide_move(g, e, path):
    """Apply a slide and return (new graph, Move record)."""
    e = half(e)
    red = remove_redundant_subcycles(g, path)
    h = apply_slide(g, e, red, reduce_path=False)
    form = "loop-slide" if g.edge(e.edge).is_loop else "end-slide"
    mv = Move("slide", str(e), tuple(str(x) for x in red),
              {"form": form, "before": g.label(e), "after": h.label(e)})
    return h, mv


def apply_induction(g, loop, l, inverse=False):
    loop = half(loop)
    edge = g.edge(loop.edge)
    if not edge.is_loop:
        raise InvalidInduction(f"{loop.edge} is not a loop")
    if abs(g.label(loop)) != 1:
        raise InvalidInduction(f"{loop} is not an ascending loop (label {g.label(loop)})")
    if l == 0 or g.label(loop.bar) % l:
        raise InvalidInduction(f"{l} does not divide {g.label(loop.bar)}")
    v = edge.origin
    edges = []
    for f in g.edges:
        a, b = f.label, f.label_rev
        if f.name != loop.edge:
            if f.origin == v:
                if inverse and a % l:
                    raise InvalidInduction(f"{l} does not divide label {a} of {f.name}")
                a = a // l if inverse else a * l
            if f.terminus == v:
                if inverse and b % l:
                    raise InvalidInduction(f"{l} does not divide label {b} of {f.name}")
                b = b // l if inverse else b * l
        edges.append(Edge(f.name, f.origin, f.terminus, check_label(a), check_label(b)))
    return LabeledGraph(g.vertices, tuple(edges))


def _fresh(existing, stem):
    i = 0
    while f"{stem}{i}" in existing:
        i += 1
    return f"{stem}{i}"


def apply_a_move(g, config, direction):
    """Trade a virtually ascending loop (k, klm) for a loop (1, lm) on a new vertex.

    plus: config = {"loop": half-edge carrying k, "l": l, optional "vertex",
    "edge" names for the new vertex and connecting edge}.
    minus: config = {"vertex": the vertex holding the loop (1, lm) and the
    connecting edge (l at that vertex, k at the other end)}.
    """
    if direction == "plus":
        loop = half(config["loop"])
        l = config["l"]
        e = g.edge(loop.edge)
        if not e.is_loop:
            raise InvalidAMove(f"{loop.edge} is not a loop")
        k, top = g.label(loop), g.label(loop.bar)
        if abs(k) == 1 or abs(l) == 1 or l == 0:
            raise InvalidAMove("need k, l different from ±1")
        if top % (k * l):
            raise InvalidAMove(f"{k}*{l} does not divide {top}")
        lm = top // k
        u = config.get("vertex") or _fresh(set(g.vertices), "u")
        c = config.get("edge") or _fresh({f.name for f in g.edges}, "c")
        if u in g.vertices or g.has_edge(c):
            raise InvalidAMove("new vertex or edge name already in use")
        v = e.origin
        edges = []
        for f in g.edges:
            if f.name == loop.edge:
                f = Edge(f.name, u, u, lm, 1) if loop.rev else Edge(f.name, u, u, 1, lm)
            edges.append(f)
        edges.append(Edge(c, u, v, l, k))
        return LabeledGraph(g.vertices + (u,), tuple(edges))
    if direction == "minus":
        u = config["vertex"]
        inc = [f for f in g.edges if u in (f.origin, f.terminus)]
        loops = [f for f in inc if f.is_loop]
        links = [f for f in inc if not f.is_loop]
        if len(loops) != 1 or len(links) != 1:
            raise InvalidAMove(f"vertex {u} must carry exactly one loop and one other edge")
        lp, c = loops[0], links[0]
        if abs(lp.label) == 1:
            rev, lm = False, lp.label_rev
        elif abs(lp.label_rev) == 1:
            rev, lm = True, lp.label
        else:
            raise InvalidAMove("the loop must be ascending")
        one = lp.label_rev if rev else lp.label
        l, k, v = (c.label, c.label_rev, c.terminus) if c.origin == u else \
            (c.label_rev, c.label, c.origin)
        if abs(k) == 1 or abs(l) == 1:
            raise InvalidAMove("need k, l different from ±1")
        if lm % l:
            raise InvalidAMove(f"{l} does not divide {lm}")
        lo, hi = k * one, k * lm
        edges = []
        for f in g.edges:
            if f.name == c.name:
                continue
            if f.name == lp.name:
                f = Edge(f.name, v, v, hi, lo) if rev else Edge(f.name, v, v, lo, hi)
            edges.append(f)
        return LabeledGraph(tuple(x for x in g.vertices if x != u), tuple(edges))
    raise InvalidAMove(f"unknown direction {direction!r}")


def apply_expansion(g, vertex, moved, labels, new_vertex, new_edge):
    """Inverse of a collapse: split ``moved`` half-edges off ``vertex``.

    The new edge runs from new_vertex (label labels[0], which is ±1) to
    vertex (label labels[1]); moved labels are divided by labels[0]*labels[1].
    """
    a, b = labels
    if abs(a) != 1:
        raise GbsError("expansion edge must carry ±1 at the new vertex")
    factor = a * b
    moved = {str(half(h)) for h in moved}
    edges = []
    for f in g.edges:
        o, t, x, y = f.origin, f.terminus, f.label, f.label_rev
        if str(HalfEdge(f.name)) in moved:
            if o != vertex or x % factor:
                raise GbsError(f"cannot move {f.name} in expansion")
            o, x = new_vertex, x // factor
        if str(HalfEdge(f.name, True)) in moved:
            if t != vertex or y % factor:
                raise GbsError(f"cannot move ~{f.name} in expansion")
            t, y = new_vertex, y // factor
        edges.append(Edge(f.name, o, t, x, y))
    edges.append(Edge(new_edge, new_vertex, vertex, a, b))
    return LabeledGraph(g.vertices + (new_vertex,), tuple(edges))


def is_reduced(g):
    return not collapsible_edges(g)


# -- replay -------------------------------------------------------------------

def collapse_move(g, name):
    e = g.edge(name)
    gone = e.origin if abs(e.label) == 1 else e.terminus
    moved = [str(h) for h in g.half_edges() if h.edge != name and g.origin(h) == gone]
    labels = [e.label, e.label_rev] if gone == e.origin else [e.label_rev, e.label]
    h = collapse_edge(g, name)
    keep = e.terminus if gone == e.origin else e.origin
    return h, Move("collapse", name, (), {"vertex": gone, "into": keep, "labels": labels,
                                          "moved": moved})


def apply_move(g, mv):
    if mv.kind == "slide":
        return apply_slide(g, mv.edge, mv.path)
    if mv.kind == "collapse":
        return collapse_edge(g, mv.edge)
    if mv.kind == "expansion":
        p = mv.params
        return apply_expansion(g, p["into"], p["moved"], p["labels"], p["vertex"], mv.edge)
    if mv.kind == "induction":
        return apply_induction(g, mv.edge, mv.params["l"], mv.params.get("inverse", False))
    if mv.kind == "a_plus":
        cfg = {"loop": mv.edge, "l": mv.params["l"], "vertex": mv.params.get("vertex"),
               "edge": mv.params.get("edge")}
        return apply_a_move(g, cfg, "plus")
    if mv.kind == "a_minus":
        return apply_a_move(g, {"vertex": mv.params["vertex"]}, "minus")
    raise GbsError(f"unknown move kind {mv.kind!r}")


def invert_move(g_before, mv):
    """The move undoing ``mv`` (which was applied to g_before)."""
    if mv.kind == "slide":
        e = half(mv.edge)
        back = tuple(str(half(h).bar) for h in reversed(mv.path))
        return Move("slide", str(e), back, {})
    if mv.kind == "collapse":
        p = mv.params
        if "moved" not in p:
            _, full = collapse_move(g_before, mv.edge)
            p = full.params
        return Move("expansion", mv.edge, (), {"vertex": p["vertex"], "into": p["into"],
                                               "labels": p["labels"], "moved": p["moved"]})
    if mv.kind == "expansion":
        return Move("collapse", mv.edge, (), {})
    if mv.kind == "induction":
        return Move("induction", mv.edge, (), {"l": mv.params["l"],
                                               "inverse": not mv.params.get("inverse", False)})
    if mv.kind == "a_plus":
        g_after = apply_move(g_before, mv)
        new_vertex = next(v for v in g_after.vertices if v not in g_before.vertices)
        return Move("a_minus", "", (), {"vertex": new_vertex})
    if mv.kind == "a_minus":
        u = mv.params["vertex"]
        lp = next(f for f in g_before.edges if f.is_loop and f.origin == u)
        c = next(f for f in g_before.edges if not f.is_loop and u in (f.origin, f.terminus))
        l = c.label if c.origin == u else c.label_rev
        loop = lp.name if abs(lp.label) == 1 else "~" + lp.name
        return Move("a_plus", loop, (), {"l": l, "vertex": u, "edge": c.name})
    raise GbsError(f"cannot invert {mv.kind!r}")


def replay(g, seq, require_reduced=False):
    moves = seq.moves if isinstance(seq, MoveSequence) else seq
    for i, mv in enumerate(moves):
        g = apply_move(g, mv)
        if require_reduced and not is_reduced(g):
            raise GbsError(f"move {i} leaves a collapsible edge")
    return g


def invert_sequence(g, seq):
    moves = seq.moves if isinstance(seq, MoveSequence) else seq
    states = [g]
    for mv in moves:
        states.append(apply_move(states[-1], mv))
    inv = [invert_move(states[i], mv) for i, mv in reversed(list(enumerate(moves)))]
    return MoveSequence(states[-1].fingerprint(), inv)


def require_rose(g):
    shape = rose_shape(g)
    if shape is None:
        raise GbsError("graph is not a rose")
    return shape
