import time

from hypothesis import given, settings, strategies as st

from gbs.decision import SearchBudget
from gbs.graph import half, rose
from gbs.moves import apply_slide, is_e_edge_path
from gbs.smc import (compute_lambda, compute_pi, has_smc, has_smc_with_last_edge, pi_feasible,
                     quick_loop_check, verify_monotone_witness)

from helpers import LABELS, random_path, slide_end


def brute_smc(pairs, depth=5):
    """Bounded search for a strict monotone cycle using plain label pairs."""
    petals = {f"f{i}": list(p) for i, p in enumerate(pairs)}
    for name, (a, b) in petals.items():
        for side in (0, 1):
            base = petals[name][side]
            others = [n for n in petals if n != name]
            ends = [n for n in others] + ["~" + n for n in others]
            end = ("~" if side == 0 else "") + name
            stack = [()]
            while stack:
                path = stack.pop()
                got = slide_end(petals, end, path)
                if got is not None:
                    top = got[name][1 - side]
                    if top % base == 0 and abs(top) != abs(base):
                        return True
                    if len(path) < depth:
                        stack.extend(path + (x,) for x in ends)
    return False


def test_quick_loop_check(e1):
    w = quick_loop_check(rose((2, 4)))
    assert w is not None and w.modulus == 2
    assert quick_loop_check(e1) is None
    assert quick_loop_check(rose((2, 3))) is None


def test_compute_pi_examples(e1):
    pi = compute_pi(e1, half("f1"))
    assert pi.basis == (2, 3, 5, 7)
    assert pi.sigma == (0, 0, 0, 1) and pi.sigma_bar == (1, 1, 1, 0)
    assert sorted(pi.alphas) == sorted([(-1, 0, 1, 0), (2, 0, -1, 0)])
    assert pi_feasible(pi).no
    assert pi_feasible(compute_pi(rose((2, 4)), half("f1"))).yes
    assert pi_feasible(compute_pi(rose((2, 3)), half("f1"))).no
    assert pi_feasible(compute_pi(rose((6, 6), (2, 3)), half("f1"))).no


def test_compute_lambda_examples(e1, e2p):
    lam = compute_lambda(e1, half("f1"))
    labels = lam.labels()
    assert {30, 60, 120} <= set(labels)
    assert any(d == (1, 0, 0, 0) for _, d in lam.cones)
    lam = compute_lambda(rose((2, 3)), half("f1"))
    assert lam.saturated and list(lam.labels()) == [3]
    lam = compute_lambda(e2p, half("~f1"))
    assert lam.saturated and set(lam.labels()) == {14, 21}
    assert not any(v % 30 == 0 for v in lam.labels())


def test_has_smc_with_last_edge_examples(e1, e2):
    assert has_smc_with_last_edge(e1, half("f1")).no
    got = has_smc_with_last_edge(e2, half("f1"))
    assert got.yes
    assert [str(h) for h in got.witness.path] == ["f3", "f2", "f4"] and got.witness.modulus == 3
    got = has_smc_with_last_edge(rose((2, 4)), half("f1"))
    assert got.yes and got.witness.path == [] and got.witness.modulus == 2


def test_has_smc_examples(e1, e2, e2p):
    assert has_smc(e2).yes and has_smc(e2).witness.modulus == 3
    got = has_smc(e2p)
    assert got.no and got.info.get("exhaustive")
    assert has_smc(e1).no
    assert has_smc(rose((2, 3), (5, 7))).no
    assert not brute_smc([(2, 3), (5, 7)], depth=6)


def test_four_rose_breaks_preservation(e2, e2p):
    assert apply_slide(e2, half("f4"), (half("~f1"),)).same(e2p)
    assert has_smc(e2).yes and has_smc(e2p).no


def test_one_rose_rule():
    for m in range(-12, 13):
        for n in range(-12, 13):
            if m and n:
                rule = (n % m == 0 or m % n == 0) and abs(m) != abs(n)
                assert has_smc(rose((m, n))).yes == rule, (m, n)


roses = st.lists(st.tuples(st.sampled_from(LABELS), st.sampled_from(LABELS)), min_size=1, max_size=3)


@settings(max_examples=120, deadline=None)
@given(roses)
def test_has_smc_agrees_with_bounded_brute_force(pairs):
    g = rose(*pairs)
    got = has_smc(g)
    assert not got.inconclusive
    if got.yes:
        assert verify_monotone_witness(g, got.witness)
        # independent replay of the witness on plain labels
        e = got.witness.last_edge
        petals = {x.name: [x.label, x.label_rev] for x in g.edges}
        after = slide_end(petals, str(e.bar), [str(h) for h in got.witness.path])
        top = after[e.edge][0 if e.rev else 1]
        assert top % g.label(e) == 0 and abs(top) != abs(g.label(e))
    if brute_smc(pairs, depth=4):
        assert got.yes


@settings(max_examples=60, deadline=None)
@given(roses.filter(lambda p: len(p) >= 2), st.randoms(use_true_random=False))
def test_smc_survives_slides_on_small_roses(pairs, rnd):
    g = rose(*pairs)
    if not has_smc(g).yes:
        return
    end = rnd.choice(list(g.half_edges()))
    path = random_path(g, end, rnd, rnd.randint(1, 3))
    if path:
        assert has_smc(apply_slide(g, end, path)).yes


def test_witness_edge_path(e2):
    w = has_smc(e2).witness
    assert is_e_edge_path(e2, w.last_edge.bar, w.path)


def test_budget_small_is_not_wrong(e1):
    tiny = SearchBudget(slack=0, max_states=5)
    got = has_smc(e1, tiny)
    assert got.verdict in ("no", "inconclusive")
