"""Single-layer graph convolution: propagation matrix, encoding, row normalization."""

from __future__ import annotations

import warnings

import numpy as np
import scipy.sparse as sp

from .graph import AttributedGraph

NORM_EPS = 1e-12


def relu(s):
    return np.maximum(s, 0.0)


def relu_grad(s):
    return (s > 0.0).astype(s.dtype)


def tanh_grad(s):
    t = np.tanh(s)
    return 1.0 - t * t


def identity(s):
    return s


def identity_grad(s):
    return np.ones_like(s)


# name -> (f, df/ds evaluated at the pre-activation)
ACTIVATIONS = {
    "relu": (relu, relu_grad),
    "tanh": (np.tanh, tanh_grad),
    "identity": (identity, identity_grad),
}


def build_propagation(g: AttributedGraph) -> sp.csr_matrix:
    """Symmetrically normalized adjacency with self-loops.

    With A_hat = A + I and d_hat its row sums, returns
    D_hat^{-1/2} A_hat D_hat^{-1/2}.  Scaling each stored entry by
    s[i]*s[j] keeps the result bitwise symmetric.
    """
    a_hat = (g.adj + sp.identity(g.n, format="csr", dtype=np.float64)).tocoo()
    d_hat = np.asarray(a_hat.sum(axis=1)).ravel()
    scale = 1.0 / np.sqrt(d_hat)
    data = a_hat.data * scale[a_hat.row] * scale[a_hat.col]
    return sp.csr_matrix((data, (a_hat.row, a_hat.col)), shape=(g.n, g.n))


def init_weights(m: int, l: int, seed: int) -> np.ndarray:
    """Seeded uniform init in +-sqrt(6/(m+l))."""
    bound = np.sqrt(6.0 / (m + l))
    return np.random.default_rng(seed).uniform(-bound, bound, size=(m, l))


def encode(pm: sp.csr_matrix, X, W: np.ndarray, activation: str = "relu") -> np.ndarray:
    """Z = f(pm @ (X @ W)).  X may be dense or sparse; result is dense n x l."""
    if X.shape[1] != W.shape[0]:
        raise ValueError(
            f"feature dim {X.shape[1]} does not match weight rows {W.shape[0]}"
        )
    if pm.shape[1] != X.shape[0]:
        raise ValueError(
            f"propagation is {pm.shape[0]}x{pm.shape[1]} but features have {X.shape[0]} rows"
        )
    f, _ = ACTIVATIONS[activation]
    xw = X @ W
    if sp.issparse(xw):
        xw = xw.toarray()
    return f(pm @ xw)


def l2_normalize(Z: np.ndarray) -> np.ndarray:
    """Scale each row to unit Euclidean norm, h = z / max(||z||, eps).

    Zero rows survive as zero (the eps branch) and are reported via a warning
    rather than an error; downstream center computation decides whether that
    matters.
    """
    norms = np.linalg.norm(Z, axis=1)
    zero_rows = int(np.count_nonzero(norms <= NORM_EPS))
    if zero_rows:
        warnings.warn(f"l2_normalize: {zero_rows} zero row(s) passed through")
    return Z / np.maximum(norms, NORM_EPS)[:, None]
