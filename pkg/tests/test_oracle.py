import itertools

import pytest

from conftest import corpus
from divcw import oracle
from divcw.graph import evaluate, gen_path, make_graph
from divcw.measures import div_min, div_sum, divstar, divsum_as_venn, venn_div
from divcw.mso import parse_formula

A = frozenset({"v1", "v3", "v5"})
B = frozenset({"v2", "v4"})
C = frozenset({"v2", "v5"})
D = frozenset({"v1", "v4"})
P5 = evaluate(gen_path(5))


def two_block_instance(s: int = 6):
    """Universe B, A_1..A_5 of size s each; solutions A_i plus one vertex of B."""
    Bset = [f"b{j}" for j in range(1, s + 1)]
    As = [[f"a{i}_{j}" for j in range(1, s + 1)] for i in range(1, 6)]
    universe = Bset + [v for part in As for v in part]
    sol = lambda i, j: frozenset(As[i - 1]) | {f"b{j}"}  # noqa: E731
    first = [sol(1, j) for j in range(1, 7)]
    second = [sol(i, i) for i in range(1, 6)] + [sol(1, 6)]
    return universe, first, second


def test_vc2_on_triangle():
    K3 = make_graph("abc", [("a", "b"), ("a", "c"), ("b", "c")])
    got = oracle.brute_solutions(oracle.VertexCover(2), K3)
    assert got == [frozenset("ab"), frozenset("ac"), frozenset("bc")]


def test_minimal_dominating_sets_of_p5():
    got = oracle.brute_solutions(oracle.MinimalDominatingSet(), P5)
    assert set(got) == {A, B, C, D} and len(got) == 4


def test_vc0_on_k2_is_empty():
    assert oracle.brute_solutions(oracle.VertexCover(0), make_graph("ab", [("a", "b")])) == []


def test_solutions_sorted():
    got = oracle.brute_solutions(oracle.DominatingSet(3), P5)
    assert got == sorted(got, key=lambda S: tuple(sorted(S)))


def test_min_vertex_cover_spec():
    got = oracle.brute_solutions(oracle.MinVertexCover(5), P5)
    assert got == [B]
    assert oracle.brute_solutions(oracle.MinVertexCover(1), P5) == []


def test_mso_spec_uses_naive_evaluator():
    phi = parse_formula("exists set S forall vertex x : x in S")
    assert oracle.brute_solutions(oracle.MsoFormula(phi), P5) == [frozenset(P5.vertices)]


def test_refusals():
    big = make_graph([f"x{i}" for i in range(21)], [])
    with pytest.raises(oracle.OracleRefused):
        oracle.brute_solutions(oracle.VertexCover(1), big)
    sols = [frozenset({f"x{i}"}) for i in range(21)]
    with pytest.raises(oracle.OracleRefused):
        oracle.brute_best_diversity([sols] * 6, divsum_as_venn(6), big.vertices)
    with pytest.raises(ValueError):
        oracle.brute_solutions(oracle.DominatingSet(-1), P5)
    with pytest.raises(ValueError):
        oracle.brute_best_diversity([[A]], oracle.MIN, P5.vertices)


def test_p5_minimal_ds_divsum():
    sols = oracle.brute_solutions(oracle.MinimalDominatingSet(), P5)
    best, tup = oracle.brute_best_diversity([sols] * 4, divsum_as_venn(4), P5.vertices)
    assert best == 20 and sorted(tup, key=sorted) == sorted([A, A, B, B], key=sorted)


def test_p5_minimal_ds_divstar_optimum():
    sols = oracle.brute_solutions(oracle.MinimalDominatingSet(), P5)
    best, tup = oracle.brute_best_diversity([sols] * 4, divstar(4), P5.vertices)
    assert venn_div(divstar(4), [A, B, C, D], P5.vertices) == 63
    assert best == 63 and set(tup) == {A, B, C, D}


def test_single_solution_divsum_zero():
    best, tup = oracle.brute_best_diversity([[A], [A]], divsum_as_venn(2), P5.vertices)
    assert best == 0 and tup == (A, A)


def test_empty_list_gives_no_tuple():
    assert oracle.brute_best_diversity([[A], []], divsum_as_venn(2), P5.vertices) == (None, None)


def test_ties_go_to_the_first_tuple():
    lists = [[A, B], [A, B]]
    best, tup = oracle.brute_best_diversity(lists, divsum_as_venn(2), P5.vertices)
    assert best == 5 and tup == (A, B)
    best, tup = oracle.brute_best_diversity(lists, oracle.MIN, P5.vertices)
    assert best == 5 and tup == (A, B)


def test_two_block_tuples():
    universe, first, second = two_block_instance(6)
    assert len(universe) == 36
    assert (div_min(first), div_sum(first)) == (2, 30)
    assert (div_min(second), div_sum(second)) == (2, 198)
    assert venn_div(divsum_as_venn(6), second, universe) == 198


@pytest.mark.parametrize("name,Dec", corpus(6), ids=lambda x: x if isinstance(x, str) else "")
def test_self_consistency_with_direct_divsum(name, Dec):
    G = evaluate(Dec)
    lists = [
        oracle.brute_solutions(oracle.VertexCover(3), G),
        oracle.brute_solutions(oracle.DominatingSet(2), G),
    ]
    best, _ = oracle.brute_best_diversity(lists, divsum_as_venn(2), G.vertices)
    direct = max((div_sum(t) for t in itertools.product(*lists)), default=None)
    assert best == direct
    mbest, _ = oracle.brute_best_diversity(lists, oracle.MIN, G.vertices)
    assert mbest == max((div_min(t) for t in itertools.product(*lists)), default=None)
