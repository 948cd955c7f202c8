import itertools
import random

import pytest
from hypothesis import given, strategies as st

from conftest import random_decomposition
from divcw import oracle
from divcw.engine import (
    CoreContractError,
    DpCore,
    TableTooLarge,
    check_witness,
    diverse_solve,
    extract_solution,
    iter_witnesses,
    kernels,
    min_diverse_solve,
    reachable_tables,
    root_key_tuples,
    solve_single,
)
from divcw.graph import Intro, evaluate, gen_clique, gen_path, parse_decomposition
from divcw.measures import VennMeasure, div_min, divstar, divsum_as_venn, random_measure, venn_div
from divcw.problems import ds_core, vc_core

K2 = parse_decomposition("intro n1 a 1\nintro n2 b 2\nunion n3 n1 n2\naddedges n4 n3 1 2\nroot n4\n")


class EmptyLeafCore(DpCore):
    def process(self, t):
        return [] if isinstance(self.D.nodes[t], Intro) else [(b"x",) + (b"x",) * len(self.D.children(t))]

    def accept(self):
        return frozenset({b"x"})

    def rho(self, w):
        return 0


class BadArityCore(EmptyLeafCore):
    def process(self, t):
        return [(b"x", b"x", b"x", b"x")]


def test_solve_single_vc_clique():
    K3 = gen_clique(3)
    assert solve_single(vc_core(2, K3)).feasible
    assert not solve_single(vc_core(1, K3)).feasible


def test_empty_leaf_process_is_infeasible():
    assert not solve_single(EmptyLeafCore(gen_path(3))).feasible


def test_bad_arity_is_contract_error():
    with pytest.raises(CoreContractError):
        solve_single(BadArityCore(gen_path(1)))


def test_extract_solution_k2():
    core = vc_core(2, K2)
    one_a = core.encode((1, 0))
    one_b = core.encode((0, 1))
    w = {"n1": one_a, "n2": one_b, "n3": core.encode((1, 1)), "n4": core.encode((1, 1))}
    assert check_witness(core, w)
    assert extract_solution(core, w) == {"a", "b"}
    empty = core.encode((0, 0))
    w0 = {t: empty for t in ("n1", "n2", "n3")}
    assert extract_solution(core, w0) == frozenset()


def test_extract_solution_rho_undefined():
    core = vc_core(1, K2)
    with pytest.raises(CoreContractError):
        extract_solution(core, {"n1": b"\x00\x00\x00", "n2": core.encode((0, 0))})


def test_extracted_vc_on_triangle_is_cover():
    K3 = gen_clique(3)
    res = solve_single(vc_core(2, K3))
    assert res.solution in oracle.brute_solutions(oracle.VertexCover(2), evaluate(K3))
    assert check_witness(vc_core(2, K3), res.witness)


def test_diverse_examples():
    K3 = gen_clique(3)
    res = diverse_solve([vc_core(2, K3)] * 2, divsum_as_venn(2))
    assert res.best_value == 2
    P5 = gen_path(5)
    res = diverse_solve([ds_core(2, P5), ds_core(2, P5)], divsum_as_venn(2), d=4)
    assert res.feasible and res.best_value == 4
    assert set(res.solutions) == {frozenset({"v2", "v5"}), frozenset({"v1", "v4"})}


def test_diverse_r1_is_best_single_influence_sum():
    P5 = gen_path(5)
    f = VennMeasure(1, (0, 3))
    res = diverse_solve([ds_core(3, P5)], f)
    sols = oracle.brute_solutions(oracle.DominatingSet(3), evaluate(P5))
    assert res.best_value == max(3 * len(S) for S in sols) == 9


def test_diverse_witnesses_are_valid():
    P5 = gen_path(5)
    cores = [ds_core(2, P5), vc_core(3, P5)]
    res = diverse_solve(cores, divstar(2))
    for core, w, S in zip(cores, res.witnesses, res.solutions):
        assert check_witness(core, w)
        assert extract_solution(core, w) == S
    assert venn_div(divstar(2), res.solutions, evaluate(P5).vertices) == res.best_value


def test_diverse_infeasible_core():
    K3 = gen_clique(3)
    res = diverse_solve([vc_core(1, K3), vc_core(2, K3)], divsum_as_venn(2))
    assert not res.feasible and res.best_value is None and res.solutions is None


def test_diverse_errors():
    P = gen_path(3)
    with pytest.raises(ValueError):
        diverse_solve([], divsum_as_venn(1))
    with pytest.raises(ValueError):
        diverse_solve([vc_core(1, P)], divsum_as_venn(2))
    with pytest.raises(ValueError):
        diverse_solve([vc_core(1, P)], divsum_as_venn(1), d=-1)
    with pytest.raises(ValueError):
        diverse_solve([vc_core(1, P), vc_core(1, gen_path(3))], divsum_as_venn(2))
    with pytest.raises(OverflowError):
        diverse_solve([vc_core(1, P)], VennMeasure(1, (2**63, 0)))
    with pytest.raises(TableTooLarge):
        diverse_solve([vc_core(3, P)] * 3, divsum_as_venn(3), max_cells=2)


def test_min_diverse_examples():
    P5 = gen_path(5)
    cores = [ds_core(2, P5), ds_core(2, P5)]
    res = min_diverse_solve(cores, 4)
    assert res.feasible and set(res.solutions) == {frozenset({"v2", "v5"}), frozenset({"v1", "v4"})}
    assert not min_diverse_solve(cores, 5).feasible


def test_min_diverse_d0():
    K3 = gen_clique(3)
    assert min_diverse_solve([vc_core(2, K3)] * 3, 0).feasible
    assert not min_diverse_solve([vc_core(2, K3), vc_core(1, K3)], 0).feasible


def test_min_diverse_errors():
    P = gen_path(3)
    with pytest.raises(ValueError):
        min_diverse_solve([vc_core(1, P)], 1)
    with pytest.raises(ValueError):
        min_diverse_solve([vc_core(1, P)] * 2, -1)


def test_min_diverse_solutions_are_d_diverse():
    P6 = gen_path(6)
    cores = [vc_core(4, P6)] * 3
    res = min_diverse_solve(cores, 2)
    assert res.feasible and div_min(res.solutions) >= 2
    for core, w in zip(cores, res.witnesses):
        assert check_witness(core, w)


@given(st.integers(0, 10**6))
def test_root_keys_are_product_of_single_tables(seed):
    rng = random.Random(seed)
    D = random_decomposition(rng, rng.randint(2, 5))
    cores = [vc_core(rng.randint(0, 3), D), ds_core(rng.randint(0, 3), D)]
    singles = [reachable_tables(c)[D.root].entries for c in cores]
    assert root_key_tuples(cores) == set(itertools.product(*singles))


@given(st.integers(0, 10**6))
def test_witness_enumeration_matches_accepting_root(seed):
    rng = random.Random(seed)
    D = random_decomposition(rng, rng.randint(1, 4))
    core = ds_core(rng.randint(0, 2), D)
    wits = list(iter_witnesses(core))
    assert all(check_witness(core, w) for w in wits)
    assert bool(wits) == solve_single(core).feasible


@pytest.mark.skipif("compiled" not in kernels.available_backends(), reason="extension not built")
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_backends_agree(seed, r):
    rng = random.Random(seed)
    D = random_decomposition(rng, rng.randint(2, 6))
    cores = [rng.choice([vc_core, ds_core])(rng.randint(1, 3), D) for _ in range(r)]
    f = random_measure(r, rng)
    try:
        kernels.use_backend("python")
        slow = diverse_solve(cores, f)
        kernels.use_backend("compiled")
        fast = diverse_solve(cores, f)
    finally:
        kernels.use_backend("compiled")
    assert (slow.best_value, slow.solutions, slow.witnesses) == (
        fast.best_value,
        fast.solutions,
        fast.witnesses,
    )


@given(st.integers(0, 10**6))
def test_threads_do_not_change_results(seed):
    rng = random.Random(seed)
    D = random_decomposition(rng, rng.randint(3, 7))
    cores = [vc_core(3, D), ds_core(3, D), vc_core(4, D)]
    f = random_measure(3, rng)
    one = diverse_solve(cores, f, threads=1)
    many = diverse_solve(cores, f, threads=4)
    assert (one.best_value, one.solutions, one.witnesses) == (
        many.best_value,
        many.solutions,
        many.witnesses,
    )


@given(st.integers(0, 10**6))
def test_diverse_matches_oracle_random(seed):
    rng = random.Random(seed)
    D = random_decomposition(rng, rng.randint(2, 6))
    G = evaluate(D)
    ks = [rng.randint(0, 3), rng.randint(0, 3)]
    cores = [vc_core(ks[0], D), ds_core(ks[1], D)]
    lists = [
        oracle.brute_solutions(oracle.VertexCover(ks[0]), G),
        oracle.brute_solutions(oracle.DominatingSet(ks[1]), G),
    ]
    f = rng.choice([divsum_as_venn(2), divstar(2), random_measure(2, rng)])
    res = diverse_solve(cores, f)
    best, _ = oracle.brute_best_diversity(lists, f, G.vertices)
    assert res.best_value == best
    if best is not None:
        assert venn_div(f, res.solutions, G.vertices) == best
        assert all(S in sols for S, sols in zip(res.solutions, lists))
    d = rng.randint(0, 4)
    mres = min_diverse_solve(cores, d)
    mbest, _ = oracle.brute_best_diversity(lists, oracle.MIN, G.vertices)
    assert mres.feasible == (mbest is not None and mbest >= d)


def test_deterministic_repeat():
    P6 = gen_path(6)
    cores = [vc_core(4, P6), ds_core(3, P6), vc_core(4, P6)]
    a = diverse_solve(cores, divstar(3))
    b = diverse_solve([vc_core(4, P6), ds_core(3, P6), vc_core(4, P6)], divstar(3))
    assert (a.best_value, a.solutions) == (b.best_value, b.solutions)
