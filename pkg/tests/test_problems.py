import pytest

from conftest import corpus
from divcw import oracle
from divcw.engine import reachable_tables, solve_single, witness_solutions
from divcw.graph import evaluate, gen_clique, gen_complete_bipartite, gen_path, parse_decomposition
from divcw.problems import ds_core, min_vc, min_vc_size, minvc_core, vc_core


def test_vc_intro_has_two_entries():
    D = gen_path(3)
    core = vc_core(2, D)
    for leaf in D.leaves:
        assert len(core.process(leaf.id)) == 2
        assert {core.rho(tup[0]) for tup in core.process(leaf.id)} == {0, 1}


def test_vc_addedges_filter():
    D = parse_decomposition(
        "intro n1 a 1\nintro n2 b 1\nunion n3 n1 n2\n"
        "intro n4 c 2\nintro n5 d 2\nunion n6 n4 n5\n"
        "union n7 n3 n6\nintro n8 e 3\nunion n9 n7 n8\naddedges n10 n9 1 2\nroot n10\n"
    )
    core = vc_core(3, D)
    kept = {core.decode(tup[0]) for tup in core.process("n10")}
    assert (1, 1, 0) not in kept
    assert (2, 0, 0) in kept and (0, 2, 0) in kept
    assert (1, 1, 0) in {core.decode(tup[0]) for tup in core.process("n9")}


def test_vc_triangle_bounds():
    K3 = gen_clique(3)
    assert not solve_single(vc_core(1, K3)).feasible
    assert solve_single(vc_core(2, K3)).feasible


def test_vc_negative_k():
    with pytest.raises(ValueError):
        vc_core(-1, gen_path(2))
    with pytest.raises(ValueError):
        ds_core(-1, gen_path(2))


def test_vc_encoding_is_fixed_width():
    core = vc_core(5, gen_path(4))
    widths = {len(w) for tab in reachable_tables(core).values() for w in tab.entries}
    assert widths == {core.nbytes}
    assert core.decode(core.encode((5, 0, 3))) == (5, 0, 3)


def test_ds_path5():
    P5 = gen_path(5)
    assert not solve_single(ds_core(1, P5)).feasible
    res = solve_single(ds_core(2, P5))
    assert res.feasible
    assert res.solution in [{"v2", "v4"}, {"v2", "v5"}, {"v1", "v4"}]


def test_ds_isolated_vertex_k0():
    assert not solve_single(ds_core(0, gen_path(1))).feasible
    assert solve_single(ds_core(1, gen_path(1))).feasible


def test_ds_rho_only_on_leaves():
    core = ds_core(3, gen_path(3))
    with pytest.raises(ValueError):
        core.rho(core.encode((2, 1, 0)))


def test_min_vc_examples():
    assert len(min_vc(gen_clique(3), 3)) == 2
    edgeless = parse_decomposition("intro n1 a 1\nintro n2 b 1\nunion n3 n1 n2\nroot n3\n")
    assert min_vc(edgeless, 2) == frozenset()
    assert min_vc(gen_path(5), 5) == {"v2", "v4"}
    assert min_vc(gen_clique(4), 2) is None
    assert min_vc_size(gen_complete_bipartite(2, 5), 7) == 2


def test_minvc_core_solutions_are_minimum_covers():
    D = gen_complete_bipartite(2, 3)
    got = witness_solutions(minvc_core(4, D))
    assert got == set(oracle.brute_solutions(oracle.MinVertexCover(4), evaluate(D)))


@pytest.mark.parametrize("name,D", corpus(6), ids=lambda x: x if isinstance(x, str) else "")
def test_vc_monotone_round_trip(name, D):
    G = evaluate(D)
    for k in range(0, min(G.n, 4) + 1):
        got = witness_solutions(vc_core(k, D))
        assert got == set(oracle.brute_solutions(oracle.VertexCover(k), G)), (name, k)


@pytest.mark.parametrize("name,D", corpus(6), ids=lambda x: x if isinstance(x, str) else "")
def test_ds_matches_oracle(name, D):
    G = evaluate(D)
    for k in range(0, 4):
        core = ds_core(k, D)
        expected = set(oracle.brute_solutions(oracle.DominatingSet(k), G))
        assert solve_single(core).feasible == bool(expected)
        assert witness_solutions(core) == expected, (name, k)


@pytest.mark.parametrize("name,D", corpus(8), ids=lambda x: x if isinstance(x, str) else "")
def test_vc_entry_count_bound(name, D):
    for k in (1, 3):
        core = vc_core(k, D)
        bound = 2 * (k + 1) ** (2 * D.width)
        assert all(len(core.process(t)) <= bound for t in D.order)
