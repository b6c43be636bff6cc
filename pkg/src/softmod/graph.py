"""Sparse undirected attributed graph and the hard modularity score."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DataError


@dataclass(frozen=True)
class AttributedGraph:
    """Immutable undirected graph with node features and optional labels.

    The adjacency is a symmetric CSR matrix with unit weights, no stored
    self-loops and no duplicate edges.  ``two_m`` is the total degree,
    i.e. twice the number of undirected edges.
    """

    n: int
    adj: sp.csr_matrix
    degrees: np.ndarray
    two_m: int
    features: np.ndarray
    labels: np.ndarray | None = None
    dropped_self_loops: int = 0

    @property
    def num_edges(self) -> int:
        return self.two_m // 2


@dataclass(frozen=True)
class Partition:
    """Hard assignment of every node to one of ``num_communities`` contiguous ids.

    ``raw`` optionally keeps the pre-relabeling column indices when the
    partition came out of a membership-matrix argmax (some columns may have
    received no nodes, so raw ids need not be contiguous).
    """

    assign: np.ndarray
    num_communities: int
    raw: np.ndarray | None = None

    def __post_init__(self):
        assign = np.asarray(self.assign, dtype=np.int64)
        object.__setattr__(self, "assign", assign)
        if assign.ndim != 1 or assign.size == 0:
            raise ValueError("partition must be a nonempty 1-d assignment vector")
        used = np.unique(assign)
        if used[0] != 0 or used[-1] != self.num_communities - 1 or used.size != self.num_communities:
            raise ValueError("community ids must be contiguous 0..t-1 with every id used")

    def __len__(self) -> int:
        return self.assign.size


def relabel_contiguous(labels: np.ndarray) -> tuple[np.ndarray, int]:
    """Map arbitrary integer labels onto 0..t-1, ordered by ascending old label."""
    uniq, inverse = np.unique(np.asarray(labels, dtype=np.int64), return_inverse=True)
    return inverse.astype(np.int64), int(uniq.size)


def community_labels(p, n: int | None = None) -> np.ndarray:
    """Coerce a Partition or raw label vector to an int64 array, checking length."""
    labels = np.asarray(p.assign if isinstance(p, Partition) else p, dtype=np.int64)
    if labels.ndim != 1:
        raise ValueError("labels must be one-dimensional")
    if n is not None and labels.size != n:
        raise ValueError(f"partition covers {labels.size} nodes, graph has {n}")
    return labels


def build_graph(edges, features, labels=None) -> AttributedGraph:
    """Validate and assemble an AttributedGraph from an edge list.

    Duplicate edges are collapsed, self-loops dropped (with a warning), and
    the adjacency symmetrized.  Node count is the feature row count; edges
    referencing nodes outside 0..n-1 are rejected, as is an empty edge set
    (modularity is undefined on a graph with no edges).
    """
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] < 1:
        raise DataError("features must be a 2-d matrix with at least one column")
    n = features.shape[0]

    edges = np.asarray(edges, dtype=np.int64)
    if edges.size == 0:
        raise DataError("graph has no edges")
    edges = edges.reshape(-1, 2)
    if edges.min() < 0 or edges.max() >= n:
        raise DataError(
            f"edge endpoint out of range: node ids must lie in 0..{n - 1}"
        )

    loop_mask = edges[:, 0] == edges[:, 1]
    dropped = int(loop_mask.sum())
    if dropped:
        warnings.warn(f"dropped {dropped} self-loop(s) from edge list")
        edges = edges[~loop_mask]
    if edges.shape[0] == 0:
        raise DataError("graph has no edges after dropping self-loops")

    # Symmetrize, then deduplicate via a scalar key per directed pair.
    both = np.concatenate([edges, edges[:, ::-1]], axis=0)
    keys = both[:, 0] * n + both[:, 1]
    uniq = np.unique(keys)
    rows = uniq // n
    cols = uniq % n
    adj = sp.csr_matrix(
        (np.ones(uniq.size, dtype=np.float64), (rows, cols)), shape=(n, n)
    )

    degrees = np.asarray(adj.sum(axis=1)).ravel().astype(np.int64)
    degrees.setflags(write=False)
    two_m = int(degrees.sum())

    if labels is not None:
        labels = np.asarray(labels, dtype=np.int64)
        if labels.shape != (n,):
            raise DataError(f"labels must have length {n}, got {labels.shape}")
        uniq_labels = np.unique(labels)
        expected = np.arange(uniq_labels.size)
        if not np.array_equal(uniq_labels, expected):
            raise DataError("label ids must be contiguous 0..L-1")
        labels.setflags(write=False)

    return AttributedGraph(
        n=n,
        adj=adj,
        degrees=degrees,
        two_m=two_m,
        features=features,
        labels=labels,
        dropped_self_loops=dropped,
    )


def modularity_hard(g: AttributedGraph, p) -> float:
    """Hard modularity of a partition in O(|E| + n + t).

    Per community c: e_c is twice the intra-community edge count and D_c the
    sum of member degrees, giving Q = sum_c e_c/2M - (D_c/2M)^2.
    """
    assign = community_labels(p, g.n)
    if g.two_m <= 0:
        raise ValueError("modularity undefined on a graph with no edges")
    t = int(assign.max()) + 1
    coo = g.adj.tocoo()
    same = assign[coo.row] == assign[coo.col]
    e_c = np.bincount(assign[coo.row[same]], minlength=t).astype(np.float64)
    d_c = np.bincount(assign, weights=g.degrees.astype(np.float64), minlength=t)
    two_m = float(g.two_m)
    return float(np.sum(e_c / two_m - (d_c / two_m) ** 2))
