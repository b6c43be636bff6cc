"""Structural pre-detection: seeded Louvain and the size-threshold filter.

Louvain here is the plain two-phase greedy: local moving until no single-node
move gains more than GAIN_EPS, then aggregation of communities into
super-nodes, repeated until a level produces no move.  The filter keeps the
communities whose size clears mean + coef * stddev and thereby fixes the
number of centers k downstream.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import NumericalError
from .graph import AttributedGraph, Partition, relabel_contiguous

# accepted moves must beat staying put by this much modularity
GAIN_EPS = 1e-7


@dataclass(frozen=True)
class FilterResult:
    """Surviving communities of the size filter, in ascending original id order.

    ``member_lists[i]`` holds the node ids of the community ``kept_ids[i]``;
    that position i is the community index used by centers and memberships.
    """

    kept_ids: np.ndarray
    k: int
    threshold: float
    mean: float
    stddev: float
    member_lists: list[np.ndarray]
    sizes: np.ndarray  # sizes of all t pre-detected communities


def _local_phase(adj: sp.csr_matrix, selfw: np.ndarray, deg: np.ndarray,
                 tw: float, rng: np.random.Generator) -> tuple[np.ndarray, bool]:
    """Greedy node moving on one level graph.

    Gain of placing node i (already detached) into community c is
    2*k_ic/tw - 2*tot_c*d_i/tw^2; terms constant across candidates cancel.
    Visit order is one seeded shuffle, reused across passes; ties go to the
    smallest community id via ascending candidate iteration.
    """
    n = deg.size
    indptr, indices, weights = adj.indptr, adj.indices, adj.data
    comm = np.arange(n)
    comm_tot = deg.copy()
    order = rng.permutation(n)
    tw2 = tw * tw
    moved_any = False
    while True:
        moves = 0
        for i in order:
            ci = comm[i]
            d_i = deg[i]
            comm_tot[ci] -= d_i
            links: dict[int, float] = {}
            for idx in range(indptr[i], indptr[i + 1]):
                j = indices[idx]
                if j != i:
                    cj = comm[j]
                    links[cj] = links.get(cj, 0.0) + weights[idx]
            gain_stay = 2.0 * links.get(ci, 0.0) / tw - 2.0 * comm_tot[ci] * d_i / tw2
            best_c, best_gain = ci, gain_stay
            for c in sorted(links):
                if c == ci:
                    continue
                gain = 2.0 * links[c] / tw - 2.0 * comm_tot[c] * d_i / tw2
                if gain > best_gain:
                    best_c, best_gain = c, gain
            if best_c != ci and best_gain - gain_stay > GAIN_EPS:
                comm[i] = best_c
                comm_tot[best_c] += d_i
                moves += 1
            else:
                comm_tot[ci] += d_i
        if moves == 0:
            break
        moved_any = True
    return comm, moved_any


def _aggregate(adj: sp.csr_matrix, selfw: np.ndarray, comm: np.ndarray,
               t: int) -> tuple[sp.csr_matrix, np.ndarray]:
    """Collapse communities into super-nodes, folding internal weight into selfw."""
    n = adj.shape[0]
    proj = sp.csr_matrix(
        (np.ones(n), (np.arange(n), comm)), shape=(n, t)
    )
    agg = (proj.T @ adj @ proj).tocoo()
    on_diag = agg.row == agg.col
    new_selfw = np.bincount(agg.row[on_diag], weights=agg.data[on_diag], minlength=t)
    new_selfw += np.bincount(comm, weights=selfw, minlength=t)
    off = ~on_diag
    new_adj = sp.csr_matrix(
        (agg.data[off], (agg.row[off], agg.col[off])), shape=(t, t)
    )
    return new_adj, new_selfw


def louvain_detect(g: AttributedGraph, seed: int,
                   level_log: list | None = None) -> Partition:
    """Two-phase Louvain over the unit-weight graph, deterministic per seed.

    Level graphs carry off-diagonal weights in CSR plus a self-weight array
    holding each super-node's internal (both-direction) weight, so the total
    strength stays 2M across levels and gains compare against plain
    modularity throughout.  When ``level_log`` is a list, the partition of
    the original nodes after each completed level is appended to it.
    """
    if g.two_m <= 0:
        raise ValueError("pre-detection needs a graph with at least one edge")
    rng = np.random.default_rng(seed)
    adj = g.adj.astype(np.float64)
    selfw = np.zeros(g.n)
    node_comm = np.arange(g.n)
    tw = float(g.two_m)
    while True:
        deg = np.asarray(adj.sum(axis=1)).ravel() + selfw
        comm, moved = _local_phase(adj, selfw, deg, tw, rng)
        if not moved:
            break
        comm, t = relabel_contiguous(comm)
        node_comm = comm[node_comm]
        if level_log is not None:
            level_log.append(Partition(assign=node_comm.copy(), num_communities=t))
        adj, selfw = _aggregate(adj, selfw, comm, t)
    assign, t = relabel_contiguous(node_comm)
    return Partition(assign=assign, num_communities=t)


def filter_communities(p: Partition, n: int, coef: float = 0.5) -> FilterResult:
    """Keep communities of size >= mean + coef * stddev (population stddev).

    Zero survivors is an error; exactly one survivor is allowed with a
    warning, since a single center makes the membership softmax degenerate.
    """
    if len(p) != n:
        raise ValueError(f"partition covers {len(p)} nodes, expected {n}")
    t = p.num_communities
    sizes = np.bincount(p.assign, minlength=t)
    mean = n / t
    stddev = float(np.sqrt(np.mean((sizes - mean) ** 2)))
    threshold = mean + coef * stddev
    kept = np.flatnonzero(sizes >= threshold)
    if kept.size == 0:
        raise NumericalError("no structural communities above threshold")
    if kept.size == 1:
        warnings.warn(
            "only one community above the size threshold; memberships are degenerate"
        )
    member_lists = [np.flatnonzero(p.assign == c) for c in kept]
    return FilterResult(
        kept_ids=kept,
        k=int(kept.size),
        threshold=float(threshold),
        mean=float(mean),
        stddev=stddev,
        member_lists=member_lists,
        sizes=sizes,
    )
