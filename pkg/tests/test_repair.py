import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ncstorage.errors import (
    InsufficientShares,
    InsufficientSurvivors,
    MissingShare,
    NoUnusedVector,
    SingularSelection,
    TooManyFailures,
)
from ncstorage.galois import field_for_q, validate_field
from ncstorage.linalg import GfMatrix, vandermonde, vec_mat
from ncstorage.mdscodes import is_mds, sparsest_generator
from ncstorage.repair import (
    Method,
    RepairMode,
    build_repair_tree,
    choose_beta,
    multi_failure_repair,
    multi_share_repair,
    repair_node,
    solve_coefficients,
)
from ncstorage.simnet import assign_shares, random_source, random_topology
from ncstorage.storage import decode, encode, encode_vector
from ncstorage.topology import graph_topology

GF8 = validate_field(3, 0b1011)
NC, TRAD = Method.NC_ITERATIVE, Method.TRADITIONAL
EXACT, FUNC = RepairMode.EXACT, RepairMode.FUNCTIONAL


def chain(k):
    """Newcomer slot 0, survivors 1..k in a line."""
    return graph_topology([(i, i + 1) for i in range(k)])


def setup(topo, g, seed=0):
    data = random_source(g.spec, g.k, 5, seed)
    return data, assign_shares(topo, g, data)


def run(topo, g, failed, method, mode=EXACT):
    data, shares = setup(topo, g)
    out = repair_node(topo, shares, failed, g, mode, method)
    assert out.new_share.payload == encode_vector(out.new_share.coding_vector, data)
    return out


@pytest.mark.parametrize("k", range(2, 9))
def test_chain_counts(k):
    topo = chain(k)
    g = sparsest_generator(k + 1, k, field_for_q(16))
    nc = run(topo, g, 0, NC)
    tr = run(topo, g, 0, TRAD)
    assert nc.transmissions_total == k
    assert tr.transmissions_total == k * (k + 1) // 2
    assert [nc.energy.per_node_tx[u] for u in range(1, k + 1)] == [1] * k
    assert [tr.energy.per_node_tx[u] for u in range(1, k + 1)] == list(range(k, 0, -1))
    assert nc.energy.stddev_tx == 0
    assert nc.plan.tree.branch_free and nc.plan.tree.path == tuple(range(k, 0, -1))
    assert max(nc.max_buffer.values()) == 1


def test_triangle_shape_five_vs_three():
    # newcomer 0 - A(1); A - B(2); A - C(3); B - C
    topo = graph_topology([(0, 1), (1, 2), (1, 3), (2, 3)])
    g = sparsest_generator(4, 3, GF8)
    assert run(topo, g, 0, TRAD).transmissions_total == 5
    nc = run(topo, g, 0, NC)
    assert nc.transmissions_total == 3 and nc.plan.tree.path == (3, 2, 1)


def test_star_branches_attach_to_newcomer():
    topo = graph_topology([(0, 1), (0, 2), (0, 3)])
    g = sparsest_generator(4, 3, GF8)
    tree = build_repair_tree(topo.with_newcomer(0), 0, 3)
    assert tree.path == (1,)
    assert tree.branches == ((2, 0), (3, 0))
    nc = run(topo, g, 0, NC)
    assert nc.transmissions_total == 3
    assert nc.max_buffer[0] == 3
    assert run(topo, g, 0, TRAD).transmissions_total == 3


def test_branch_folds_at_attachment():
    # 0 - 1 - 2 and 4 hanging off 1: route (2, 1), branch 4 -> 1
    topo = graph_topology([(0, 1), (1, 2), (1, 3)])
    g = sparsest_generator(4, 3, GF8)
    nc = run(topo, g, 0, NC)
    assert nc.plan.tree.branches == ((3, 1),)
    assert nc.energy.per_node_tx == {1: 1, 2: 1, 3: 1}
    assert nc.max_buffer[1] == 2


def test_tree_prefers_full_route():
    topo = graph_topology([(0, 1), (0, 2), (1, 2), (2, 3)])
    tree = build_repair_tree(topo.with_newcomer(0), 0, 3)
    assert tree.branch_free and tree.path == (3, 2, 1)


def test_tree_errors():
    topo = graph_topology([(0, 1), (1, 2)])
    with pytest.raises(InsufficientSurvivors):
        build_repair_tree(topo.with_newcomer(0), 0, 3)


def _simple_path_exists(adj, start_set, hold, k):
    def go(path):
        if len(path) == k:
            return True
        return any(go(path + [v]) for v in adj[path[-1]] if v in hold and v not in path)

    return any(go([s]) for s in start_set)


@pytest.mark.parametrize("seed", range(20))
def test_tree_branch_free_iff_k_path_exists(seed):
    topo = random_topology(seed, storage_connected=True)
    failed = seed % 10
    view = topo.with_newcomer(failed)
    from ncstorage.topology import STORAGE_VIEW

    adj = view.adjacency(STORAGE_VIEW)
    hold = set(adj) - {failed}
    tree = build_repair_tree(view, failed, 7)
    starts = [v for v in adj[failed] if v in hold]
    assert tree.branch_free == _simple_path_exists(adj, starts, hold, 7)
    assert len(tree.members) == 7 == len(set(tree.members))


def test_solve_coefficients_examples():
    assert solve_coefficients(GF8, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], (4, 2, 7)) == (4, 2, 7)
    v = vandermonde(GF8, [1, 2, 3, 4], 3)
    x = solve_coefficients(GF8, v.data[:3], v.row(3))
    assert vec_mat(GF8, x, GfMatrix(GF8, v.data[:3])) == v.row(3)
    with pytest.raises(SingularSelection):
        solve_coefficients(GF8, [(1, 0, 0), (1, 0, 0), (0, 0, 1)], (1, 1, 1))


def test_choose_beta_exact_and_functional():
    g = sparsest_generator(5, 3, GF8)
    assert choose_beta(EXACT, g, 3) == g.rows[3]
    live = [r for i, r in enumerate(g.rows) if i != 3]
    beta = choose_beta(FUNC, g, 3, live)
    # the t = 6 Vandermonde row, in the sparse basis
    expected = vec_mat(GF8, vandermonde(GF8, [6], 3).row(0), g.transform)
    assert beta == expected
    assert beta not in g.rows
    assert is_mds(GfMatrix(GF8, tuple(live) + (beta,)))


def test_no_unused_vector():
    spec = field_for_q(2)
    g = sparsest_generator(3, 2, spec)  # uses all q+1 = 3 rows
    with pytest.raises(NoUnusedVector):
        choose_beta(FUNC, g, 0, g.rows[1:])


@pytest.mark.parametrize("method", [NC, TRAD])
def test_functional_repair_keeps_mds(method):
    g = sparsest_generator(6, 3, field_for_q(8))
    topo = chain(5)
    out = run(topo, g, 2, method, FUNC)
    assert out.new_share.coding_vector != g.rows[2]


def test_multi_failure_two_of_five():
    g = sparsest_generator(5, 3, GF8)
    topo = graph_topology([(i, i + 1) for i in range(4)] + [(0, 4)])
    data, shares = setup(topo, g)
    outs = multi_failure_repair(topo, [1, 3], g, shares)
    assert len(outs) == 2
    for o in outs:
        shares[o.new_share.index] = o.new_share
    for sub in itertools.combinations(shares.values(), 3):
        assert decode(sub) == data


def test_multi_failure_limits():
    g = sparsest_generator(5, 3, GF8)
    topo = chain(4)
    _, shares = setup(topo, g)
    assert multi_failure_repair(topo, [], g, shares) == []
    with pytest.raises(TooManyFailures):
        multi_failure_repair(topo, [0, 1, 2], g, shares)


def test_missing_share():
    g = sparsest_generator(5, 3, GF8)
    topo = chain(4)
    _, shares = setup(topo, g)
    del shares[0]
    with pytest.raises(MissingShare):
        repair_node(topo, shares, 0, g)


# -- several shares per node ---------------------------------------------------


def hub_case():
    """Hub server 1 (two shares); leaves 2, 3 (one each) and 4 (two)."""
    spec = field_for_q(8)
    g = sparsest_generator(6, 4, spec)
    data = random_source(spec, 4, 6, 3)
    sh = encode(g, data)
    assignment = {1: [sh[0], sh[1]], 2: [sh[2]], 3: [sh[3]], 4: [sh[4], sh[5]]}
    topo = graph_topology([(1, 2), (1, 3), (1, 4)])
    return g, data, assignment, topo


def test_hub_single_share_failure():
    g, data, assignment, topo = hub_case()
    out = multi_share_repair(assignment, 2, g, topo)
    assert out.transmissions_total == 2
    assert out.new_share.payload == encode_vector(g.rows[2], data)


def test_hub_double_share_failure():
    g, data, assignment, topo = hub_case()
    nc = multi_share_repair(assignment, 4, g, topo)
    tr = multi_share_repair(assignment, 4, g, topo, method=TRAD)
    assert nc.transmissions_total == 4
    assert tr.transmissions_total == 6
    for out in (nc, tr):
        for s, j in zip(out.new_shares, (4, 5)):
            assert s.payload == encode_vector(g.rows[j], data)


def test_multi_share_full_mesh():
    g, data, assignment, _ = hub_case()
    assert multi_share_repair(assignment, 2, g).transmissions_total == 2
    assert multi_share_repair(assignment, 4, g).transmissions_total == 4
    assert multi_share_repair(assignment, 4, g, method=TRAD).transmissions_total == 4


def test_multi_share_one_per_node_matches_iterative():
    g = sparsest_generator(4, 3, GF8)
    topo = chain(3)
    data, shares = setup(topo, g)
    out = multi_share_repair({u: [s] for u, s in shares.items()}, 0, g, topo)
    assert out.transmissions_total == run(topo, g, 0, NC).transmissions_total == 3
    assert out.new_share.payload == encode_vector(g.rows[0], data)


def test_multi_share_insufficient():
    g, _, assignment, topo = hub_case()
    small = {1: assignment[1], 2: assignment[2]}
    with pytest.raises(InsufficientShares):
        multi_share_repair(small, 2, g, topo)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(3, 8), st.sampled_from([EXACT, FUNC]),
       st.sampled_from([NC, TRAD]))
def test_random_repair_bit_exact(seed, k, mode, method):
    topo = random_topology(seed, storage_connected=True)
    g = sparsest_generator(10, k, field_for_q(16))
    out = run(topo, g, seed % 10, method, mode)
    if method is NC:
        assert out.transmissions_total >= k
        tr = run(topo, g, seed % 10, TRAD, mode)
        assert out.transmissions_total <= tr.transmissions_total
