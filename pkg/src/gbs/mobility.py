"""Strict integer cycles and mobile edges."""

from dataclasses import dataclass
from fractions import Fraction

from .decision import Yes, No, Inconclusive, SearchBudget
from .graph import half, absolute, rose_shape
from .moves import is_e_edge_path, path_modulus
from .reach import RoseArith, explore, coverability, covers
from .smc import has_smc_with_last_edge


@dataclass
class IntegerCycleWitness:
    edge: object
    cycle: list
    modulus: Fraction

    @property
    def strict(self):
        return abs(self.modulus) != 1

    def to_json(self):
        return {"edge": str(self.edge), "cycle": [str(h) for h in self.cycle],
                "modulus": str(self.modulus)}


def verify_integer_cycle(g, w):
    if not w.cycle or not is_e_edge_path(g, w.edge, w.cycle):
        return False
    if g.origin(w.cycle[0]) != g.terminus(w.cycle[-1]):
        return False
    q = path_modulus(g, w.cycle)
    return q == w.modulus and q.denominator == 1 and abs(q) != 1


def find_strict_integer_cycle(g, e, budget=SearchBudget()):
    """A closed e-edge path whose modulus is an integer other than ±1."""
    e = half(e)
    if rose_shape(g) is None:
        return Inconclusive("integer-cycle search is only complete on roses")
    ga = absolute(g)
    ra = RoseArith(ga)
    steps = ra.steps_avoiding(e.edge)
    if not steps:
        return No("no other petal to slide over", exhaustive=True)
    x0 = ra.vec[e]
    targets = [tuple(s + (1 if i == l else 0) for i, s in enumerate(x0))
               for l in range(len(x0))]
    box = tuple(max(a, sum(s.guard[i] + abs(s.delta[i]) for s in steps)) + budget.slack
                for i, a in enumerate(x0))
    ex = explore(x0, steps, box, budget.max_states,
                 goal=lambda y: any(covers(y, t) for t in targets))
    path = None
    if ex.found is not None:
        path = ex.path_to(ex.found)
    elif ex.saturated:
        return No("reachable labels saturate without a proper multiple", exhaustive=True)
    else:
        verdict, path = coverability(x0, steps, targets, budget.max_states)
        if verdict is None:
            return Inconclusive("coverability search exceeded its budget")
        if not verdict:
            return No("no reachable label is a proper multiple", exhaustive=True)
    w = IntegerCycleWitness(e, list(path), path_modulus(g, path))
    assert verify_integer_cycle(g, w), w
    return Yes(w)


def classify_mobile(g, edge, budget=SearchBudget()):
    """Decision whose witness is True when the geometric edge is mobile."""
    name = half(edge).edge
    if rose_shape(g) is None:
        return Inconclusive("mobility is only decided on roses")
    fwd, bwd = half(name), half(name).bar
    pending = False
    for h in (fwd, bwd):
        got = has_smc_with_last_edge(g, h, budget)
        if got.yes:
            return Yes(True, "strict monotone cycle", evidence=got.witness)
        pending |= got.inconclusive
    for h in (fwd, bwd):
        got = find_strict_integer_cycle(g, h, budget)
        if got.yes:
            return Yes(True, "strict integer cycle", evidence=got.witness)
        pending |= got.inconclusive
    if pending:
        return Inconclusive("a sub-search was cut off")
    return Yes(False, "no strict monotone or integer cycle")


def mobile_edges(g, budget=SearchBudget()):
    """Decision with the list of mobile edge names (declaration order)."""
    out = []
    for e in g.edges:
        got = classify_mobile(g, e.name, budget)
        if got.inconclusive:
            return Inconclusive(f"mobility of {e.name} undecided")
        if got.witness:
            out.append(e.name)
    return Yes(out)
