import networkx as nx
import numpy as np
import pytest

import softmod as sm
from softmod.graph import Partition

TRIANGLE_EDGES = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]


def random_graph(rng, n, p=0.2, m_feat=4) -> sm.AttributedGraph:
    """Erdos-Renyi draw with at least one edge and Gaussian features."""
    while True:
        mask = np.triu(rng.random((n, n)) < p, k=1)
        u, v = np.nonzero(mask)
        if u.size:
            break
    return sm.build_graph(np.stack([u, v], axis=1),
                          rng.standard_normal((n, m_feat)))


def random_partition(rng, n, max_t) -> Partition:
    raw = rng.integers(0, max_t, size=n)
    uniq, assign = np.unique(raw, return_inverse=True)
    return Partition(assign=assign.astype(np.int64), num_communities=len(uniq))


def one_hot(p: Partition) -> np.ndarray:
    P = np.zeros((len(p), p.num_communities))
    P[np.arange(len(p)), p.assign] = 1.0
    return P


@pytest.fixture(scope="session")
def karate() -> sm.AttributedGraph:
    kg = nx.karate_club_graph()
    return sm.build_graph(list(kg.edges()),
                          np.ones((kg.number_of_nodes(), 1)))


@pytest.fixture(scope="session")
def triangles() -> sm.AttributedGraph:
    return sm.build_graph(TRIANGLE_EDGES, np.ones((6, 1)))


@pytest.fixture(scope="session")
def sbm_graph() -> sm.AttributedGraph:
    spec = sm.SbmSpec(blocks=(50, 50, 50), p_in=0.5, p_out=0.01,
                      feature_dim=16, center_separation=4.0,
                      noise_sigma=0.5, seed=11)
    return sm.generate_sbm(spec)
