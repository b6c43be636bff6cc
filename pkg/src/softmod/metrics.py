"""Clustering evaluation: NMI, mapped accuracy, macro F1, ARI, and DBI."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import community_labels, relabel_contiguous


def _pair(pred, truth) -> tuple[np.ndarray, np.ndarray]:
    a = community_labels(pred)
    b = community_labels(truth)
    if a.size != b.size:
        raise ValueError(f"partition lengths differ: {a.size} vs {b.size}")
    if a.size == 0:
        raise ValueError("empty partitions")
    return relabel_contiguous(a)[0], relabel_contiguous(b)[0]


def contingency(pred, truth) -> np.ndarray:
    """r x s matrix of co-occurrence counts between predicted and true ids."""
    a, b = _pair(pred, truth)
    r = int(a.max()) + 1
    s = int(b.max()) + 1
    return np.bincount(a * s + b, minlength=r * s).reshape(r, s)


def nmi(pred, truth) -> float:
    """Mutual information over sqrt of the entropy product, natural logs.

    Two single-cluster partitions agree perfectly (1.0); when exactly one
    side is a single cluster the MI is 0 and so is the score.
    """
    ct = contingency(pred, truth)
    n = ct.sum()
    # integer marginals keep single-cluster entropies exactly zero
    ai = ct.sum(axis=1)
    bj = ct.sum(axis=0)
    pi = ai / n
    pj = bj / n
    h_pred = -np.sum(pi[pi > 0] * np.log(pi[pi > 0]))
    h_truth = -np.sum(pj[pj > 0] * np.log(pj[pj > 0]))
    if h_pred == 0.0 and h_truth == 0.0:
        return 1.0
    if h_pred == 0.0 or h_truth == 0.0:
        return 0.0
    nz = ct > 0
    mi = np.sum((ct[nz] / n) * np.log(ct[nz] * n / np.outer(ai, bj)[nz]))
    return float(min(max(mi / np.sqrt(h_pred * h_truth), 0.0), 1.0))


def optimal_mapping(ct: np.ndarray) -> np.ndarray:
    """Injective predicted-id -> true-id map maximizing the matched count.

    Hungarian assignment on the negated table, padded square with zeros;
    predicted ids matched to a padding column come back as -1.
    """
    r, s = ct.shape
    size = max(r, s)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[:r, :s] = ct
    rows, cols = linear_sum_assignment(-padded)
    mapping = np.full(r, -1, dtype=np.int64)
    for i, j in zip(rows, cols):
        if i < r and j < s:
            mapping[i] = j
    return mapping


def acc(pred, truth) -> float:
    """Fraction of nodes whose mapped predicted id equals the true id."""
    ct = contingency(pred, truth)
    mapping = optimal_mapping(ct)
    real = mapping >= 0
    matched = ct[np.flatnonzero(real), mapping[real]].sum()
    return float(matched / ct.sum())


def f1(pred, truth) -> float:
    """Macro F1 over true classes after the optimal mapping.

    Nodes whose predicted cluster got no true id (surplus clusters) predict
    nothing, so they count as misses only; classes never predicted score 0.
    """
    a, b = _pair(pred, truth)
    ct = contingency(a, b)
    mapping = optimal_mapping(ct)
    mapped = mapping[a]
    s = int(b.max()) + 1
    scores = np.zeros(s)
    for c in range(s):
        tp = np.count_nonzero((mapped == c) & (b == c))
        fp = np.count_nonzero((mapped == c) & (b != c))
        fn = np.count_nonzero((mapped != c) & (b == c))
        if tp == 0:
            continue
        precision = tp / (tp + fp)
        recall = tp / (tp + fn)
        scores[c] = 2.0 * precision * recall / (precision + recall)
    return float(scores.mean())


def ari(pred, truth) -> float:
    """Pair-counting agreement corrected for chance, via the contingency table."""
    ct = contingency(pred, truth)
    n = int(ct.sum())
    if n < 2:
        raise ValueError("adjusted Rand index needs at least two nodes")

    def comb2(x):
        return x * (x - 1) / 2.0

    index = comb2(ct).sum()
    a = comb2(ct.sum(axis=1)).sum()
    b = comb2(ct.sum(axis=0)).sum()
    expected = a * b / comb2(n)
    max_index = (a + b) / 2.0
    if max_index == expected:
        # both partitions degenerate the same way (all-singletons or one cluster)
        return 1.0
    return float((index - expected) / (max_index - expected))


def dbi(H: np.ndarray, pred) -> float:
    """Davies-Bouldin index of the predicted partition over embedding rows.

    Mean over communities of the worst (scatter_i + scatter_j) / center
    distance; coincident centers make the ratio meaningless, so that case
    returns +inf rather than a huge finite artifact.
    """
    labels = community_labels(pred, H.shape[0])
    labels, k = relabel_contiguous(labels)
    if k < 2:
        raise ValueError("DBI needs at least two communities")
    centroids = np.empty((k, H.shape[1]))
    scatter = np.empty(k)
    for c in range(k):
        members = H[labels == c]
        centroids[c] = members.mean(axis=0)
        scatter[c] = np.linalg.norm(members - centroids[c], axis=1).mean()
    diff = centroids[:, None, :] - centroids[None, :, :]
    dist = np.linalg.norm(diff, axis=2)
    off = ~np.eye(k, dtype=bool)
    if np.any(dist[off] < 1e-12):
        return float("inf")
    # the diagonal divides by zero (0/0 for singleton scatter); it is
    # overwritten before the max, so both float warnings are noise here
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (scatter[:, None] + scatter[None, :]) / dist
    ratio[~off] = -np.inf
    return float(np.max(ratio, axis=1).mean())
