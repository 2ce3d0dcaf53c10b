"""Strict monotone cycles in rose graphs.

A monotone cycle ending in e is an ē-edge path followed by e whose total
modulus is an integer.  In a rose every path is closed, so the question is
whether the end ē can slide (over the other petals) to a label that is a
proper multiple of the label of e.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import LinearConstraintSystem, Row, ilp_feasible, factor_rational
from .decision import Yes, No, Inconclusive, SearchBudget
from .errors import GbsError
from .graph import half, rose_shape
from .moves import is_e_edge_path, path_modulus
from .reach import RoseArith, explore, coverability, covers


@dataclass
class MonotoneCycleWitness:
    path: list          # ē-edge path
    last_edge: object   # e
    modulus: Fraction

    def to_json(self):
        return {"path": [str(h) for h in self.path], "last_edge": str(self.last_edge),
                "modulus": str(self.modulus)}


@dataclass
class PiSystem:
    edge: object
    basis: tuple
    sigma: tuple         # exponents of the label of e
    sigma_bar: tuple     # exponents of the label of ē
    petals: list         # other petals, in order
    alphas: list         # exponent vector of each other petal's modulus
    systems: list        # one LinearConstraintSystem per choice of strict row
    units_ok: bool = True


@dataclass
class ConeUnion:
    edge: object
    basis: tuple
    explicit: dict = field(default_factory=dict)   # exponent vector -> slide path of ē
    cones: list = field(default_factory=list)      # (apex, direction)
    saturated: bool = False
    box: tuple = ()

    def labels(self):
        out = {}
        for x, path in self.explicit.items():
            v = 1
            for p, k in zip(self.basis, x):
                v *= p**k
            out[v] = path
        return out


def _require_rose(g):
    if rose_shape(g) is None:
        raise GbsError("this operation needs a rose graph")


def _abs_rose(g):
    from .graph import absolute
    return absolute(g)


def monotone_modulus(g, path, e):
    e = half(e)
    return path_modulus(g, path) * Fraction(g.label(e.bar), g.label(e))


def verify_monotone_witness(g, w):
    """Re-check a witness straight from the definition."""
    e = half(w.last_edge)
    if w.path and not is_e_edge_path(g, e.bar, w.path):
        return False
    q = monotone_modulus(g, w.path, e)
    return q.denominator == 1 and abs(q) != 1 and q == w.modulus


def quick_loop_check(g):
    """A single petal that is already a strict (virtually) ascending loop."""
    _require_rose(g)
    for h in g.half_edges():
        a, b = abs(g.label(h)), abs(g.label(h.bar))
        if b % a == 0 and a != b:
            return MonotoneCycleWitness([], h, Fraction(g.label(h.bar), g.label(h)))
    return None


def compute_pi(g, e):
    """Integer systems whose solutions are the net slide counts over the other
    petals that would make the label of ē a proper multiple of the label of e."""
    _require_rose(g)
    e = half(e)
    g = _abs_rose(g)
    ra = RoseArith(g)
    sigma, sigma_bar = ra.vec[e], ra.vec[e.bar]
    petals = [f.name for f in g.edges if f.name != e.edge]
    alphas = [factor_rational(Fraction(f.label_rev, f.label), ra.basis).exps
              for f in g.edges if f.name != e.edge]
    r, d = len(ra.basis), len(petals)
    systems = []
    for strict in range(r):
        rows = []
        for l in range(r):
            coeffs = tuple(alphas[h][l] for h in range(d))
            rows.append(Row(coeffs, sigma[l] - sigma_bar[l] + (1 if l == strict else 0)))
        systems.append(LinearConstraintSystem(d, tuple(rows)))
    return PiSystem(e, ra.basis, sigma, sigma_bar, petals, alphas, systems)


def pi_feasible(pi):
    """Yes if some strict-row system has a lattice point, No if none does."""
    if not pi.systems:
        return No("no primes: labels are ±1")
    pending = False
    for s in pi.systems:
        got = ilp_feasible(s)
        if got.yes:
            return Yes(got.witness)
        if got.inconclusive:
            pending = True
    return Inconclusive("lattice search was bounded") if pending else No("every system is empty")


def _box(ra, e, steps, slack):
    sigma, sigma_bar = ra.vec[e], ra.vec[e.bar]
    out = []
    for l in range(len(ra.basis)):
        tot = sum(abs(s.delta[l]) + s.guard[l] for s in steps)
        out.append(max(sigma[l], sigma_bar[l], tot) + slack)
    return tuple(out)


def compute_lambda(g, e, budget=SearchBudget()):
    """Labels the end ē can reach by sliding over the other petals."""
    _require_rose(g)
    e = half(e)
    g = _abs_rose(g)
    ra = RoseArith(g)
    steps = ra.steps_avoiding(e.edge)
    box = _box(ra, e, steps, budget.slack)
    ex = explore(ra.vec[e.bar], steps, box, budget.max_states, track_pumps=True)
    lam = ConeUnion(e, ra.basis, box=box, saturated=ex.saturated)
    for x in ex.order:
        lam.explicit[x] = ex.path_to(x)
    seen = set()
    for apex, direction in ex.pumps:
        if direction not in seen:
            seen.add(direction)
            lam.cones.append((apex, direction))
    return lam


def has_smc_with_last_edge(g, e, budget=SearchBudget()):
    _require_rose(g)
    e = half(e)
    ga = _abs_rose(g)
    ra = RoseArith(ga)
    sigma = ra.vec[e]
    targets = [tuple(s + (1 if i == l else 0) for i, s in enumerate(sigma))
               for l in range(len(sigma))]

    def witness(path):
        w = MonotoneCycleWitness(list(path), e, monotone_modulus(g, path, e))
        assert verify_monotone_witness(g, w), w
        return w

    # s = 0: the loop itself
    if covers(ra.vec[e.bar], sigma) and ra.vec[e.bar] != sigma:
        return Yes(witness([]), "loop is strictly (virtually) ascending")
    if len(ga.edges) == 1:
        return No("a single petal admits no nonempty path", exhaustive=True)
    pi = compute_pi(ga, e)
    pf = pi_feasible(pi)
    if pf.no:
        return No("no slide counts can make the label a proper multiple", exhaustive=True)
    steps = ra.steps_avoiding(e.edge)
    box = _box(ra, e, steps, budget.slack)
    ex = explore(ra.vec[e.bar], steps, box, budget.max_states,
                 goal=lambda y: any(covers(y, t) for t in targets))
    if ex.found is not None:
        return Yes(witness(ex.path_to(ex.found)))
    if ex.saturated:
        return No("reachable labels saturate without a proper multiple", exhaustive=True)
    verdict, path = coverability(ra.vec[e.bar], steps, targets, budget.max_states)
    if verdict is None:
        return Inconclusive("coverability search exceeded its budget")
    if verdict:
        return Yes(witness(path))
    return No("no reachable label covers a proper multiple", exhaustive=True)


def has_smc(g, budget=SearchBudget()):
    _require_rose(g)
    w = quick_loop_check(g)
    if w is not None:
        return Yes(w, "strictly (virtually) ascending petal")
    pending = []
    for h in g.half_edges():
        got = has_smc_with_last_edge(g, h, budget)
        if got.yes:
            return got
        if got.inconclusive:
            pending.append(str(h))
    if pending:
        return Inconclusive("undecided for " + ", ".join(pending))
    return No("no petal end closes a strict monotone cycle", exhaustive=True)
