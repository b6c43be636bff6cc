"""End-to-end optimization of the soft-modularity loss.

One training run is: Louvain pre-detection and size filter (once), then a
fixed number of full-batch iterations.  Each iteration re-encodes the graph,
recomputes centers from the current embeddings, forms memberships, and takes
one Adam step on the encoder weights.  The backward pass is written out by
hand (the model is one layer deep) and validated against central finite
differences; gradients flow through the centers, which are means over the
fixed structural communities.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .encoder import ACTIVATIONS, NORM_EPS, build_propagation, init_weights
from .errors import NumericalError
from .graph import AttributedGraph, Partition, modularity_hard
from .membership import (
    CENTER_EPS,
    SIGNS,
    SIM_MODES,
    compute_centers,
    hard_assign,
    soft_assign,
    soft_modularity,
)
from .metrics import acc, ari, dbi, f1, nmi
from .predetect import FilterResult, filter_communities, louvain_detect

BETA1 = 0.9
BETA2 = 0.999
ADAM_EPS = 1e-8

# below this nonzero fraction the feature matrix is worth keeping sparse
SPARSE_DENSITY = 0.25


@dataclass(frozen=True)
class TrainConfig:
    delta: float = 30.0
    alpha: float = 0.001
    lr: float = 0.001
    weight_decay: float = 0.005
    iters: int = 300
    eval_interval: int = 10
    dim: int = 512
    seed: int = 0
    activation: str = "relu"
    sim_mode: str = "cosine"
    sign: str = "plus"
    precision: str = "f64"
    threshold_coef: float = 0.5

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.lr <= 0:
            raise ValueError("lr must be positive")
        if self.weight_decay < 0:
            raise ValueError("weight_decay must be nonnegative")
        if self.iters < 0:
            raise ValueError("iters must be nonnegative")
        if self.eval_interval < 1:
            raise ValueError("eval_interval must be >= 1")
        if self.iters >= 1 and self.eval_interval > self.iters:
            raise ValueError("eval_interval must not exceed iters")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.sim_mode not in SIM_MODES:
            raise ValueError(f"unknown similarity mode {self.sim_mode!r}")
        if self.sign not in SIGNS:
            raise ValueError(f"unknown sign {self.sign!r}")
        if self.precision not in ("f32", "f64"):
            raise ValueError(f"unknown precision {self.precision!r}")
        if self.threshold_coef < 0:
            raise ValueError("threshold_coef must be nonnegative")

    @property
    def dtype(self):
        return np.float64 if self.precision == "f64" else np.float32


@dataclass(frozen=True)
class AdamState:
    m: np.ndarray
    v: np.ndarray
    step: int = 0

    @classmethod
    def init(cls, shape, dtype=np.float64) -> "AdamState":
        return cls(m=np.zeros(shape, dtype=dtype), v=np.zeros(shape, dtype=dtype))


@dataclass(frozen=True)
class EvalRecord:
    iteration: int
    loss: float
    q_prime: float
    q: float
    dbi: float | None
    nmi: float | None
    acc: float | None
    f1: float | None
    ari: float | None
    wall_s: float


@dataclass(frozen=True)
class TrainHistory:
    records: list[EvalRecord]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        its = [r.iteration for r in self.records]
        if any(b <= a for a, b in zip(its, its[1:])):
            raise ValueError("record iterations must be strictly increasing")


@dataclass(frozen=True)
class Forward:
    """Every intermediate the backward pass needs, plus the scalar outputs."""

    S: np.ndarray       # pre-activation, n x l
    Z: np.ndarray       # activated embedding
    norms: np.ndarray   # row norms of Z
    H: np.ndarray       # row-normalized embedding
    U: np.ndarray       # raw centers, k x l
    r: np.ndarray | None  # center norms (cosine mode only)
    Un: np.ndarray      # centers as used by the similarity
    sim: np.ndarray     # n x k
    P: np.ndarray       # memberships
    q_prime: float
    loss: float


def _forward(g: AttributedGraph, pm: sp.csr_matrix, X, W: np.ndarray,
             fr: FilterResult, cfg: TrainConfig) -> Forward:
    f, _ = ACTIVATIONS[cfg.activation]
    xw = X @ W
    if sp.issparse(xw):
        xw = xw.toarray()
    S = pm @ xw
    Z = f(S)
    norms = np.linalg.norm(Z, axis=1)
    H = Z / np.maximum(norms, NORM_EPS)[:, None]
    U = compute_centers(H, fr)
    if cfg.sim_mode == "cosine":
        r = np.linalg.norm(U, axis=1)
        if np.any(r <= CENTER_EPS):
            raise NumericalError("degenerate center: zero norm under cosine similarity")
        Un = U / r[:, None]
    else:
        r = None
        Un = U
    sim = H @ Un.T
    P = soft_assign(sim, cfg.delta, cfg.sign)
    sv = soft_modularity(g, P, cfg.alpha)
    if not np.isfinite(sv.loss):
        raise NumericalError(
            f"non-finite loss (q_prime={sv.q_prime}, |W|_max={np.abs(W).max()})"
        )
    return Forward(S=S, Z=Z, norms=norms, H=H, U=U, r=r, Un=Un, sim=sim, P=P,
                   q_prime=sv.q_prime, loss=sv.loss)


def _artifacts(fw: Forward) -> dict:
    return {"Z": fw.Z, "H": fw.H, "U": fw.U, "sim": fw.sim, "P": fw.P,
            "q_prime": fw.q_prime}


def loss_and_grad(g: AttributedGraph, pm: sp.csr_matrix, X, W: np.ndarray,
                  fr: FilterResult, cfg: TrainConfig):
    """Loss, dL/dW, and the forward artifacts {Z, H, U, sim, P, q_prime}.

    Reverse order of the forward chain: soft modularity -> softmax ->
    similarity (into both the embeddings and the centers) -> center means ->
    row normalization -> activation -> the convolution into W.
    """
    fw = _forward(g, pm, X, W, fr, cfg)
    dtype = W.dtype
    _, df = ACTIVATIONS[cfg.activation]

    two_m = float(g.two_m)
    d = g.degrees.astype(np.float64)
    ap = g.adj @ fw.P
    pd = fw.P.T @ d
    # dL/dP = -(alpha/M) (A P - d (d^T P) / 2M), with M the edge count
    G_P = (-cfg.alpha / (two_m / 2.0)) * (ap - np.outer(d, pd) / two_m)
    G_P = G_P.astype(dtype, copy=False)

    # softmax with logits s*delta*sim
    inner = np.sum(G_P * fw.P, axis=1, keepdims=True)
    G_logits = fw.P * (G_P - inner)
    s = 1.0 if cfg.sign == "plus" else -1.0
    G_sim = (s * cfg.delta) * G_logits

    # sim = H Un^T touches both operands
    G_H = G_sim @ fw.Un
    G_Un = G_sim.T @ fw.H

    if cfg.sim_mode == "cosine":
        # Un_j = U_j / r_j
        dots = np.sum(G_Un * fw.Un, axis=1, keepdims=True)
        G_U = (G_Un - dots * fw.Un) / fw.r[:, None]
    else:
        G_U = G_Un

    # centers are means over fixed member lists
    for j, members in enumerate(fr.member_lists):
        G_H[members] += G_U[j] / len(members)

    # H = Z / max(||Z_row||, eps); below eps the map is linear in Z
    safe = fw.norms > NORM_EPS
    dots = np.sum(G_H * fw.H, axis=1, keepdims=True)
    projected = (G_H - dots * fw.H) / np.maximum(fw.norms, NORM_EPS)[:, None]
    G_Z = np.where(safe[:, None], projected, G_H / NORM_EPS)

    G_S = G_Z * df(fw.S)
    # S = pm (X W); pm is symmetric
    G_XW = pm @ G_S
    G_W = X.T @ G_XW

    if not np.all(np.isfinite(G_W)):
        raise NumericalError(
            f"non-finite gradient (loss={fw.loss}, |G_W|_max={np.abs(G_W).max()})"
        )
    return fw.loss, G_W, _artifacts(fw)


def adam_step(W: np.ndarray, gradW: np.ndarray, state: AdamState,
              lr: float, weight_decay: float):
    """One bias-corrected Adam update with L2 decay folded into the gradient."""
    g = gradW + weight_decay * W
    step = state.step + 1
    m = BETA1 * state.m + (1.0 - BETA1) * g
    v = BETA2 * state.v + (1.0 - BETA2) * (g * g)
    m_hat = m / (1.0 - BETA1 ** step)
    v_hat = v / (1.0 - BETA2 ** step)
    W_new = W - lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
    return W_new, AdamState(m=m, v=v, step=step)


def check_gradient(g: AttributedGraph, pm: sp.csr_matrix, X, W: np.ndarray,
                   fr: FilterResult, cfg: TrainConfig, samples: int = 20,
                   seed: int = 0) -> float:
    """Worst relative error of dL/dW against central finite differences.

    Samples entries of W without replacement; the step scales with the entry
    magnitude.  Relative error uses max(|analytic|, |numeric|, 1e-10) so tiny
    derivatives do not explode the ratio.
    """
    _, grad, _ = loss_and_grad(g, pm, X, W, fr, cfg)
    rng = np.random.default_rng(seed)
    chosen = rng.choice(W.size, size=min(samples, W.size), replace=False)
    worst = 0.0
    for flat in chosen:
        i, j = divmod(int(flat), W.shape[1])
        h = 1e-6 * (1.0 + abs(W[i, j]))
        Wp = W.copy()
        Wp[i, j] += h
        Wm = W.copy()
        Wm[i, j] -= h
        fd = (_forward(g, pm, X, Wp, fr, cfg).loss
              - _forward(g, pm, X, Wm, fr, cfg).loss) / (2.0 * h)
        a = float(grad[i, j])
        rel = abs(a - fd) / max(abs(a), abs(fd), 1e-10)
        worst = max(worst, rel)
    return worst


def prepare_features(features: np.ndarray, dtype) -> np.ndarray | sp.csr_matrix:
    """Cast features and switch to CSR when they are sparse enough to pay off."""
    X = features.astype(dtype)
    if np.count_nonzero(X) / X.size < SPARSE_DENSITY:
        return sp.csr_matrix(X)
    return X


def train(g: AttributedGraph, cfg: TrainConfig):
    """Full pipeline; returns (TrainHistory, final H, final P, final Partition).

    Pre-detection runs once; metrics are logged at iteration 0, every
    eval_interval updates, and after the last update (each log point is a
    fresh forward pass at the then-current weights).  iters=0 skips training
    and returns the state under the initial weights with an empty history.
    """
    t_total = time.perf_counter()
    pre = louvain_detect(g, cfg.seed)
    fr = filter_communities(pre, g.n, cfg.threshold_coef)
    louvain_ms = (time.perf_counter() - t_total) * 1e3

    dtype = cfg.dtype
    pm = build_propagation(g).astype(dtype)
    X = prepare_features(g.features, dtype)
    W = init_weights(g.features.shape[1], cfg.dim, cfg.seed).astype(dtype)
    state = AdamState.init(W.shape, dtype)

    records: list[EvalRecord] = []
    t_train = time.perf_counter()

    def log_point(iteration: int, loss: float, art: dict):
        part = hard_assign(art["P"])
        q = modularity_hard(g, part)
        dbi_val = dbi(art["H"], part) if part.num_communities >= 2 else None
        if g.labels is not None:
            nmi_v = nmi(part, g.labels)
            acc_v = acc(part, g.labels)
            f1_v = f1(part, g.labels)
            ari_v = ari(part, g.labels)
        else:
            nmi_v = acc_v = f1_v = ari_v = None
        records.append(EvalRecord(
            iteration=iteration, loss=float(loss), q_prime=float(art["q_prime"]),
            q=q, dbi=dbi_val, nmi=nmi_v, acc=acc_v, f1=f1_v, ari=ari_v,
            wall_s=time.perf_counter() - t_train,
        ))

    for it in range(cfg.iters):
        loss, gradW, art = loss_and_grad(g, pm, X, W, fr, cfg)
        if it % cfg.eval_interval == 0:
            log_point(it, loss, art)
        W, state = adam_step(W, gradW, state, cfg.lr, cfg.weight_decay)

    fw = _forward(g, pm, X, W, fr, cfg)
    if cfg.iters > 0:
        log_point(cfg.iters, fw.loss, _artifacts(fw))

    train_ms = (time.perf_counter() - t_train) * 1e3
    history = TrainHistory(records=records, meta={
        "louvain_communities": pre.num_communities,
        "k": fr.k,
        "threshold": fr.threshold,
        "louvain_ms": louvain_ms,
        "train_ms": train_ms,
        "total_ms": (time.perf_counter() - t_total) * 1e3,
    })
    partition = hard_assign(fw.P)
    return history, fw.H, fw.P, partition
