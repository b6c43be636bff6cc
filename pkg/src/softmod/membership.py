"""Community centers, similarity softmax memberships, and soft modularity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .graph import AttributedGraph, Partition, relabel_contiguous
from .predetect import FilterResult

CENTER_EPS = 1e-12
ROWSUM_TOL = 1e-6

SIM_MODES = ("cosine", "dot")
SIGNS = ("plus", "minus")


@dataclass(frozen=True)
class SoftModularityValue:
    q_prime: float
    loss: float


def compute_centers(H: np.ndarray, fr: FilterResult) -> np.ndarray:
    """Center u_i is the mean of the H rows of kept community i."""
    U = np.empty((fr.k, H.shape[1]), dtype=H.dtype)
    for i, members in enumerate(fr.member_lists):
        if len(members) == 0:
            raise ValueError(f"kept community {fr.kept_ids[i]} has no members")
        U[i] = H[members].mean(axis=0)
    return U


def similarity(H: np.ndarray, U: np.ndarray, mode: str = "cosine") -> np.ndarray:
    """Node-center similarity matrix, n x k.

    H rows are unit vectors, so cosine needs only the center norms in the
    denominator; dot mode keeps the raw inner products (the two agree exactly
    when centers are unit-norm).
    """
    if mode not in SIM_MODES:
        raise ValueError(f"unknown similarity mode {mode!r}")
    sim = H @ U.T
    if mode == "cosine":
        norms = np.linalg.norm(U, axis=1)
        if np.any(norms <= CENTER_EPS):
            raise NumericalError("degenerate center: zero norm under cosine similarity")
        sim /= norms
    return sim


def soft_assign(sim: np.ndarray, delta: float = 30.0, sign: str = "plus") -> np.ndarray:
    """Row softmax of s * delta * sim with max-subtraction stabilization.

    sign=plus (s = +1) sends high similarity to high probability; sign=minus
    (s = -1) keeps the inverted variant available for comparison runs.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if sign not in SIGNS:
        raise ValueError(f"unknown sign {sign!r}")
    s = 1.0 if sign == "plus" else -1.0
    logits = s * delta * sim
    logits -= logits.max(axis=1, keepdims=True)
    e = np.exp(logits)
    return e / e.sum(axis=1, keepdims=True)


def hard_assign(P: np.ndarray) -> Partition:
    """Row argmax of the membership matrix; ties go to the smaller column.

    Ids are relabeled contiguously (columns that win no row disappear); the
    winning column indices are kept in ``raw`` for center bookkeeping.
    """
    raw = np.argmax(P, axis=1).astype(np.int64)
    assign, t = relabel_contiguous(raw)
    return Partition(assign=assign, num_communities=t, raw=raw)


def soft_modularity(g: AttributedGraph, P: np.ndarray,
                    alpha: float = 0.001) -> SoftModularityValue:
    """Q' = tr(P^T A P)/2M - ||P^T d||^2/(2M)^2, and the loss -alpha * Q'.

    The trace term touches only stored edges; the null-model term collapses
    to one k-vector through the degree vector, so nothing dense in n is built.
    """
    if P.shape[0] != g.n:
        raise ValueError(f"membership has {P.shape[0]} rows, graph has {g.n} nodes")
    if g.two_m <= 0:
        raise ValueError("soft modularity undefined on a graph with no edges")
    row_err = np.abs(P.sum(axis=1) - 1.0).max()
    if row_err > ROWSUM_TOL:
        raise ValueError(f"membership rows must sum to 1 (max deviation {row_err:.3e})")
    two_m = float(g.two_m)
    trace = float(np.sum((g.adj @ P) * P))
    pd = P.T @ g.degrees.astype(np.float64)
    q_prime = trace / two_m - float(pd @ pd) / (two_m * two_m)
    return SoftModularityValue(q_prime=q_prime, loss=-alpha * q_prime)
