from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gbs.errors import InvalidAMove, InvalidInduction, InvalidSlide
from gbs.graph import half, parse_graph, rose
from gbs.moves import (apply_a_move, apply_induction, apply_move, apply_slide, invert_sequence,
                       is_e_edge_path, is_reduced, modulus_of_path, path_modulus,
                       remove_redundant_subcycles, replay, slide_move)

from helpers import LABELS, random_path


def P(*names):
    return tuple(half(n) for n in names)


def test_modulus_examples(e1, e2):
    assert path_modulus(e1, P("f3", "f2")) == 2
    assert path_modulus(e1, ()) == 1
    assert path_modulus(e2, P("f3", "f2", "f4", "f1")) == 3
    assert modulus_of_path(e1, P("f3", "f2")).value == 2


def test_e_edge_path_examples(e1, e2p):
    assert is_e_edge_path(e1, half("~f1"), P("f3", "f2"))
    assert not is_e_edge_path(e1, half("~f1"), P("f3", "f1"))
    assert is_e_edge_path(e2p, half("f1"), P("f4"))
    # the label of f1 after sliding over f4 is 14*21/14 = 21, not a multiple of 30
    assert 14 * Fraction(21, 14) % 30 != 0


def test_remove_redundant_subcycles(e1):
    g = rose((7, 30), (6, 15), (10, 8))
    assert tuple(remove_redundant_subcycles(g, P("f3", "~f3"))) == ()
    assert tuple(remove_redundant_subcycles(e1, P("f3", "f2"))) == P("f3", "f2")
    assert tuple(remove_redundant_subcycles(g, P("f2", "f3", "~f3", "f2"))) == P("f2", "f2")


def test_apply_slide_examples(e1, e2, e2p):
    assert apply_slide(e2, half("f4"), P("~f1")).same(e2p)
    assert apply_slide(e1, half("f1"), ()).same(e1)
    assert apply_slide(e1, half("~f1"), P("f3", "f2")).same(rose((7, 60), (6, 15), (10, 8)))
    with pytest.raises(InvalidSlide):
        apply_slide(e1, half("f2"), P("f1"))


def test_induction_examples():
    g = parse_graph("v0 v1; t: v0 v0 1 6; a: v0 v1 2 5; b: v1 v0 7 3")
    h = apply_induction(g, half("t"), 3)
    assert (h.edge("a").label, h.edge("b").label_rev) == (6, 9)
    assert apply_induction(g, half("t"), 1).same(g)
    with pytest.raises(InvalidInduction):
        apply_induction(rose((2, 6)), half("f1"), 3)


def test_a_move_examples():
    g = rose((2, 30), (4, 6))
    h = apply_a_move(g, {"loop": "f1", "l": 3, "vertex": "u", "edge": "c"}, "plus")
    assert (h.edge("f1").origin, h.edge("f1").label, h.edge("f1").label_rev) == ("u", 1, 15)
    c = h.edge("c")
    assert (c.origin, c.terminus, c.label, c.label_rev) == ("u", "v0", 3, 2)
    assert apply_a_move(h, {"vertex": "u"}, "minus").same(g)
    with pytest.raises(InvalidAMove):
        apply_a_move(rose((1, 30)), {"loop": "f1", "l": 3}, "plus")


def test_is_reduced(e1):
    assert is_reduced(e1)
    assert not is_reduced(parse_graph("v0 v1; e: v0 v1 1 5"))
    assert is_reduced(parse_graph("v0 v1; e: v0 v1 2 5"))


@settings(max_examples=80, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 3))
def test_slide_sequences_invert(rnd, n):
    g = rose(*[(rnd.choice(LABELS), rnd.choice(LABELS)) for _ in range(n)])
    start, moves = g, []
    for _ in range(rnd.randint(1, 6)):
        end = rnd.choice(list(g.half_edges()))
        path = random_path(g, end, rnd, rnd.randint(1, 3))
        if not path:
            continue
        before = g.label(end) * path_modulus(g, path)
        g, mv = slide_move(g, end, path)
        assert g.label(end) == before
        moves.append(mv)
    assert replay(start, moves).same(g)
    back = invert_sequence(start, moves)
    assert replay(g, back).same(start)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_redundant_subcycle_removal_keeps_the_effect(rnd):
    g = rose(*[(rnd.choice(LABELS), rnd.choice(LABELS)) for _ in range(3)])
    end = rnd.choice(list(g.half_edges()))
    path = random_path(g, end, rnd, 4)
    if not path:
        return
    i = rnd.randrange(len(path) + 1)
    h = rnd.choice([x for x in g.half_edges() if x.edge != end.edge])
    padded = path[:i] + (h, h.bar) + path[i:]
    if not is_e_edge_path(g, end, padded):
        return
    assert apply_slide(g, end, padded).same(apply_slide(g, end, path, reduce_path=False))
    assert apply_move(g, slide_move(g, end, padded)[1]).same(apply_slide(g, end, path))
