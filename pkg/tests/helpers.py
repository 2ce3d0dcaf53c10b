"""Shared generators plus a standalone slide replayer.

The replayer works on plain label pairs and never imports gbs, so it can
serve as an independent check on paths and certificates produced by the
library.
"""

import random
from fractions import Fraction

LABELS = [2, 3, 4, 5, 6, 8, 9, 10, 12, 15, 18, 20, 24, 27, 30, 36, 45]


# -- standalone replayer ------------------------------------------------------

def petals_of(graph_json):
    """name -> [label at origin, label at terminus] for a one-vertex graph."""
    assert len(graph_json["vertices"]) == 1
    return {e["name"]: list(e["labels"]) for e in graph_json["edges"]}


def _end(token):
    rev = token.startswith("~")
    return token.lstrip("~"), (1 if rev else 0)


def slide_end(petals, end, path):
    """Slide one end of a petal along a path of petal ends; return the new
    labels or None when a divisibility step fails or the path uses the edge."""
    name, side = _end(end)
    cur = {k: list(v) for k, v in petals.items()}
    value = Fraction(cur[name][side])
    for tok in path:
        other, s = _end(tok)
        if other == name:
            return None
        here, there = cur[other][s], cur[other][1 - s]
        if value.denominator != 1 or value.numerator % here:
            return None
        value = value / here * there
    if value.denominator != 1:
        return None
    cur[name][side] = int(value)
    return cur


def canonical(petals):
    return sorted(tuple(sorted((abs(a), abs(b)))) + (((a < 0) == (b < 0)),)
                  for a, b in petals.values())


def replay_certificate(graph_a_json, graph_b_json, cert_json):
    """Replay the slides of an iso certificate for positive reduced roses and
    compare the result with graph B up to petal order and orientation."""
    for key in ("reduce_a", "reduce_b"):
        if cert_json[key]["moves"]:
            return None
    cur = petals_of(graph_a_json)
    slides = list(cert_json["non_mobile"]) + [m for grp in cert_json["mobile"] for m in grp]
    for mv in slides:
        if mv["kind"] != "slide":
            return None
        cur = slide_end(cur, mv["edge"], mv["path"])
        if cur is None:
            return False
    return canonical(cur) == canonical(petals_of(graph_b_json))


# -- generators (these use the library) ---------------------------------------

def random_rose(rng, sizes=(2, 3), labels=LABELS):
    from gbs.graph import rose
    k = rng.choice(sizes)
    return rose(*[(rng.choice(labels), rng.choice(labels)) for _ in range(k)])


def random_path(g, end, rng, length):
    value = Fraction(g.label(end))
    path = []
    for _ in range(length):
        opts = [h for h in g.half_edges()
                if h.edge != end.edge and value.denominator == 1 and value.numerator % g.label(h) == 0]
        if not opts:
            break
        h = rng.choice(opts)
        path.append(h)
        value = value * g.label(h.bar) / g.label(h)
    return tuple(path)


def random_slide(g, rng, exclude=None, max_len=3):
    from gbs.slide_algebra import SlideSymbol
    ends = [h for h in g.half_edges() if h.edge != exclude]
    for _ in range(50):
        end = rng.choice(ends)
        path = random_path(g, end, rng, rng.randint(1, max_len))
        if path:
            return SlideSymbol(end, path)
    return None


def non_ascending_rose(rng, sizes=(2, 3)):
    from gbs.smc import has_smc
    while True:
        g = random_rose(rng, sizes)
        if has_smc(g).no:
            return g


def rng_for(seed):
    return random.Random(seed)
