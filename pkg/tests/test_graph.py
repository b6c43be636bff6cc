import numpy as np
import pytest

import softmod as sm
from softmod.graph import Partition, relabel_contiguous

from conftest import random_graph, random_partition

from oracles import modularity_naive


def test_single_edge():
    g = sm.build_graph([(0, 1)], np.eye(2))
    assert g.n == 2
    assert g.two_m == 2
    assert g.num_edges == 1
    assert list(g.degrees) == [1, 1]


def test_dedup_symmetrize_and_self_loop_drop():
    with pytest.warns(UserWarning, match="self-loop"):
        g = sm.build_graph([(0, 1), (1, 0), (0, 0)], np.eye(2))
    assert g.num_edges == 1
    assert g.dropped_self_loops == 1
    dense = g.adj.toarray()
    assert np.array_equal(dense, dense.T)
    assert dense[0, 0] == 0 and dense[1, 1] == 0


def test_two_triangles_degrees():
    from conftest import TRIANGLE_EDGES
    g = sm.build_graph(TRIANGLE_EDGES, np.ones((6, 1)))
    assert list(g.degrees) == [2] * 6
    assert g.two_m == 12


def test_out_of_range_edge_rejected():
    with pytest.raises(sm.DataError, match="out of range"):
        sm.build_graph([(0, 5)], np.eye(2))
    with pytest.raises(sm.DataError, match="out of range"):
        sm.build_graph([(-1, 0)], np.eye(2))


def test_empty_edge_set_rejected():
    with pytest.raises(sm.DataError, match="no edges"):
        sm.build_graph([], np.eye(3))
    with pytest.warns(UserWarning):
        with pytest.raises(sm.DataError, match="no edges"):
            sm.build_graph([(0, 0)], np.eye(2))


def test_label_validation():
    g = sm.build_graph([(0, 1)], np.eye(2), labels=[0, 1])
    assert list(g.labels) == [0, 1]
    with pytest.raises(sm.DataError, match="length"):
        sm.build_graph([(0, 1)], np.eye(2), labels=[0, 1, 1])
    with pytest.raises(sm.DataError, match="contiguous"):
        sm.build_graph([(0, 1)], np.eye(2), labels=[0, 2])


def test_partition_validation():
    Partition(assign=np.array([0, 1, 0]), num_communities=2)
    with pytest.raises(ValueError):
        Partition(assign=np.array([0, 2]), num_communities=2)
    with pytest.raises(ValueError):
        Partition(assign=np.array([1, 1]), num_communities=1)
    with pytest.raises(ValueError):
        Partition(assign=np.array([], dtype=np.int64), num_communities=0)


def test_relabel_contiguous():
    assign, t = relabel_contiguous(np.array([5, 2, 5, 9]))
    assert t == 3
    assert list(assign) == [1, 0, 1, 2]


def test_modularity_one_community_is_zero():
    rng = np.random.default_rng(0)
    g = random_graph(rng, 15)
    p = Partition(assign=np.zeros(15, dtype=np.int64), num_communities=1)
    assert sm.modularity_hard(g, p) == pytest.approx(0.0, abs=1e-12)


def test_modularity_two_triangles(triangles):
    p = Partition(assign=np.array([0, 0, 0, 1, 1, 1]), num_communities=2)
    assert sm.modularity_hard(triangles, p) == pytest.approx(0.5, abs=1e-12)


def test_modularity_k2_singletons():
    g = sm.build_graph([(0, 1)], np.eye(2))
    p = Partition(assign=np.array([0, 1]), num_communities=2)
    assert sm.modularity_hard(g, p) == pytest.approx(-0.5, abs=1e-12)


def test_modularity_matches_naive_double_loop():
    rng = np.random.default_rng(7)
    for _ in range(40):
        n = int(rng.integers(4, 31))
        g = random_graph(rng, n)
        p = random_partition(rng, n, int(rng.integers(1, 6)))
        q = sm.modularity_hard(g, p)
        q_ref = modularity_naive(g.adj.toarray(), p.assign)
        assert q == pytest.approx(q_ref, abs=1e-12)
        assert -0.5 - 1e-12 <= q <= 1.0 + 1e-12


def test_modularity_relabel_invariant():
    rng = np.random.default_rng(3)
    g = random_graph(rng, 20)
    p = random_partition(rng, 20, 4)
    q = sm.modularity_hard(g, p)
    perm = rng.permutation(p.num_communities)
    shuffled = Partition(assign=perm[p.assign], num_communities=p.num_communities)
    assert sm.modularity_hard(g, shuffled) == pytest.approx(q, abs=1e-14)


def test_modularity_length_mismatch_rejected():
    g = sm.build_graph([(0, 1)], np.eye(2))
    with pytest.raises(ValueError, match="covers"):
        sm.modularity_hard(g, Partition(assign=np.array([0, 0, 0]),
                                        num_communities=1))
