"""Ascending / non-ascending decision for small roses."""

from dataclasses import dataclass

from .decision import Yes, No, Inconclusive, SearchBudget
from .errors import UnsupportedClass, GbsError
from .graph import half, rose_shape, Move, MoveSequence
from .mobility import mobile_edges
from .moves import slide_move, apply_a_move, is_reduced
from .smc import has_smc


def count_mobile_edges(g, budget=SearchBudget()):
    got = mobile_edges(g, budget)
    if got.inconclusive:
        return got
    return Yes(len(got.witness), mobile=got.witness)


@dataclass
class AscendingLoop:
    """Moves turning the witness edge into a strict ascending loop."""
    graph: object
    moves: MoveSequence
    loop: str


def exhibit_ascending_loop(g, witness):
    """Slide ē along the witness path, then split off the loop when its small
    label is not ±1.  The resulting loop has labels (±1, m) with |m| >= 2."""
    e = half(witness.last_edge)
    seq = MoveSequence(g.fingerprint())
    cur = g
    if witness.path:
        cur, mv = slide_move(cur, e.bar, witness.path)
        seq.moves.append(mv)
    k, top = cur.label(e), cur.label(e.bar)
    if top % k or abs(top) == abs(k):
        raise GbsError("witness does not yield a strict virtually ascending loop")
    if abs(k) != 1:
        l = top // k
        before = set(cur.vertices)
        cur = apply_a_move(cur, {"loop": str(e), "l": l}, "plus")
        u = next(v for v in cur.vertices if v not in before)
        c = cur.edges[-1].name
        seq.moves.append(Move("a_plus", str(e), (), {"l": l, "vertex": u, "edge": c}))
    return AscendingLoop(cur, seq, e.edge)


def is_ascending(g, budget=SearchBudget()):
    """Decision(True/False); a True verdict carries the monotone-cycle witness
    and the ascending-loop exhibition in ``info``."""
    shape = rose_shape(g)
    if shape is None or not is_reduced(g):
        raise UnsupportedClass("ascending is decided for reduced roses only")
    if shape.n > 3:
        cnt = count_mobile_edges(g, budget)
        if cnt.inconclusive:
            return Inconclusive("mobile edge count undecided: " + cnt.reason)
        if cnt.witness != 1:
            raise UnsupportedClass(
                f"{shape.n}-rose with {cnt.witness} mobile edges is outside the decidable class")
    got = has_smc(g, budget)
    if got.inconclusive:
        return got
    if got.no:
        return Yes(False, "no strict monotone cycle", smc=got)
    return Yes(True, "strict monotone cycle", smc=got, cycle=got.witness,
               loop=exhibit_ascending_loop(g, got.witness))
