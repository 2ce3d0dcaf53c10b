import json

import pytest
from hypothesis import given, strategies as st

from gbs.errors import ElementaryGroup, GraphSyntaxError, ZeroLabel
from gbs.graph import (apply_match, format_gbs, graph_from_json, graph_to_json,
                       graphs_equal_up_to_relabeling, normalize_signs, parse_graph, reduce,
                       rose, rose_key, rose_shape, serialize_graph, sign_obstructed)

E1_TEXT = "v0; f1: v0 v0 7 30; f2: v0 v0 6 15; f3: v0 v0 10 8"


def test_parse_examples(e1):
    assert parse_graph(E1_TEXT).same(e1)
    g = parse_graph("v0; e: v0 v0 2 3")
    assert list(g.pairs()) == [(2, 3)]
    seg = parse_graph("v0 v1; e: v0 v1 1 5")
    assert seg.vertices == ("v0", "v1") and rose_shape(seg) is None


def test_parse_file_format_and_comments(e1):
    text = "# E1\nvertices: v0\nedge f1: v0 v0 7 30\nedge f2: v0 v0 6 15  # petal\nedge f3: v0 v0 10 8\n"
    assert parse_graph(text).same(e1)
    assert parse_graph(format_gbs(e1)).same(e1)


@pytest.mark.parametrize("text,exc", [
    ("v0; e: v0 v0 0 3", ZeroLabel),
    ("v0; e: v0 v1 2 3", GraphSyntaxError),
    ("v0; e: v0 v0 2", GraphSyntaxError),
    ("v0; e: v0 v0 2 x", GraphSyntaxError),
    ("e: v0 v0 2 3", GraphSyntaxError),
    ("v0; e: v0 v0 2 3; e: v0 v0 2 3", GraphSyntaxError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_graph(text)


def test_serialize_examples(e1):
    assert serialize_graph(rose((2, 3), names=["e"])) == "v0; e: v0 v0 2 3"
    assert serialize_graph(e1) == E1_TEXT
    assert "-2" in serialize_graph(rose((-2, 3)))


def test_json_mirror(e1):
    obj = json.loads(json.dumps(graph_to_json(e1)))
    assert graph_from_json(obj).same(e1)
    assert parse_graph(json.dumps(obj)).same(e1)


def test_normalize_signs_examples(e1):
    h, m = normalize_signs(e1)
    assert h.same(e1) and not m.vertex_flips and not m.edge_flips
    g = rose((-7, -30), (6, 15), (10, 8))
    h, m = normalize_signs(g)
    assert h.same(e1) and m.edge_flips == ("f1",)
    assert apply_match(h, m).same(g)
    seg = parse_graph("v0 v1; e: v0 v1 -2 -3")
    h, _ = normalize_signs(seg)
    assert (h.edges[0].label, h.edges[0].label_rev) == (2, 3)


def test_loop_sign_parity_is_an_obstruction():
    assert sign_obstructed(rose((-7, 30), (6, 15)))
    assert not sign_obstructed(rose((-7, -30), (6, 15)))


def test_reduce_examples(e1):
    g, seq = reduce(e1)
    assert g.same(e1) and len(seq) == 0
    g, seq = reduce(parse_graph("v0 v1; e: v0 v1 1 3; a: v0 v0 2 5; b: v1 v1 4 7"))
    assert sorted(g.pairs()) == [(4, 7), (6, 15)] and len(seq) == 1
    with pytest.raises(ElementaryGroup):
        reduce(parse_graph("v0 v1; e: v0 v1 1 1"))


def test_rose_shape(e1):
    assert rose_shape(e1).n == 3
    assert rose_shape(parse_graph("v0 v1; e: v0 v1 1 5")) is None
    assert rose_shape(parse_graph("v0")).n == 0


def test_graphs_equal_examples(e1):
    m = graphs_equal_up_to_relabeling(rose((2, 3)), rose((3, 2)))
    assert m is not None and m.edge_map["f1"][1] is True
    shuffled = rose((10, 8), (7, 30), (6, 15), names=["a", "b", "c"])
    m = graphs_equal_up_to_relabeling(e1, shuffled)
    assert m is not None and apply_match(e1, m).same(shuffled)
    assert graphs_equal_up_to_relabeling(rose((2, 3)), rose((2, 5))) is None


labels = st.integers(-60, 60).filter(lambda x: x != 0)
pairs = st.tuples(labels, labels)


@given(st.lists(pairs, min_size=0, max_size=4))
def test_text_and_json_round_trip(ps):
    g = rose(*ps)
    assert parse_graph(serialize_graph(g)).same(g)
    assert parse_graph(format_gbs(g)).same(g)
    assert graph_from_json(graph_to_json(g)).same(g)


@given(st.lists(pairs, min_size=1, max_size=4), st.randoms())
def test_relabeling_is_found_for_permuted_flipped_roses(ps, rnd):
    g = rose(*ps)
    perm = list(ps)
    rnd.shuffle(perm)
    perm = [(b, a) if rnd.random() < 0.5 else (a, b) for a, b in perm]
    h = rose(*perm, names=[f"x{i}" for i in range(len(perm))])
    m = graphs_equal_up_to_relabeling(g, h)
    assert m is not None and apply_match(g, m).same(h)
    assert rose_key(g) == rose_key(h)


@given(st.lists(pairs, min_size=1, max_size=4))
def test_normalize_signs_is_positive_unless_obstructed(ps):
    g = rose(*ps)
    h, m = normalize_signs(g)
    assert apply_match(h, m).same(g)
    if not sign_obstructed(g):
        assert all(e.label > 0 and e.label_rev > 0 for e in h.edges)
