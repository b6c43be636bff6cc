"""Dataset files, synthetic block-model graphs, and results serialization.

File grammar (all plain text, '#' starts a comment anywhere on a line):
  edges     one "u v" pair per line, 0-based node ids
  features  header line "n m", then n lines of m reals
  labels    n lines of one integer each (also the partition format)
Results go to JSON with config echo, per-interval records, final metrics,
and wall-clock timings.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DataError
from .graph import AttributedGraph, Partition, build_graph
from .training import TrainConfig, TrainHistory

# known corpus shapes: name -> (nodes, undirected edges, features, classes);
# mismatches warn rather than fail because public copies disagree on edge
# counting conventions
KNOWN_SHAPES = {
    "acm": (3025, 13128, 1870, 3),
    "amac": (7650, 245861, 767, 10),
    "amap": (13752, 119081, 745, 8),
    "citeseer": (3327, 4552, 3703, 6),
    "cocs": (18333, 81894, 6805, 15),
    "cora": (2708, 5278, 1433, 7),
    "film": (7600, 15009, 932, 5),
    "pubmed": (19717, 44324, 500, 3),
    "uat": (1190, 13599, 239, 4),
}


@dataclass(frozen=True)
class DatasetBundle:
    edges_path: str
    features_path: str
    labels_path: str | None = None
    name: str | None = None


@dataclass(frozen=True)
class SbmSpec:
    blocks: tuple
    p_in: float
    p_out: float
    feature_dim: int = 16
    center_separation: float = 4.0
    noise_sigma: float = 0.5
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))
        if len(self.blocks) == 0 or any(b < 1 for b in self.blocks):
            raise DataError("block sizes must all be >= 1")
        if not (0.0 <= self.p_out < self.p_in <= 1.0):
            raise DataError("need 0 <= p_out < p_in <= 1")
        if self.feature_dim < 1:
            raise DataError("feature_dim must be >= 1")
        if self.noise_sigma < 0 or self.center_separation < 0:
            raise DataError("separation and noise must be nonnegative")


def _content_lines(path):
    """Yield (line_number, stripped_text) skipping blanks and comments."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.readlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(raw, start=1):
        text = line.split("#", 1)[0].strip()
        if text:
            yield lineno, text


def read_edges(path) -> np.ndarray:
    edges = []
    for lineno, text in _content_lines(path):
        parts = text.split()
        if len(parts) != 2:
            raise DataError(f"{path}:{lineno}: expected 'u v', got {text!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise DataError(f"{path}:{lineno}: non-integer node id in {text!r}")
    return np.asarray(edges, dtype=np.int64).reshape(-1, 2)


def read_features(path) -> np.ndarray:
    lines = _content_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise DataError(f"{path}: empty feature file")
    parts = header.split()
    if len(parts) != 2:
        raise DataError(f"{path}:{lineno}: expected header 'n m', got {header!r}")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise DataError(f"{path}:{lineno}: non-integer header {header!r}")
    if n < 1 or m < 1:
        raise DataError(f"{path}:{lineno}: header dimensions must be positive")
    out = np.empty((n, m), dtype=np.float64)
    count = 0
    for lineno, text in lines:
        if count >= n:
            raise DataError(f"{path}:{lineno}: more than {n} feature rows")
        parts = text.split()
        if len(parts) != m:
            raise DataError(
                f"{path}:{lineno}: expected {m} values, got {len(parts)}"
            )
        try:
            out[count] = [float(p) for p in parts]
        except ValueError:
            raise DataError(f"{path}:{lineno}: non-numeric feature value")
        count += 1
    if count != n:
        raise DataError(f"{path}: header promised {n} rows, file has {count}")
    return out


def read_labels(path) -> np.ndarray:
    values = []
    for lineno, text in _content_lines(path):
        parts = text.split()
        if len(parts) != 1:
            raise DataError(f"{path}:{lineno}: expected one integer, got {text!r}")
        try:
            values.append(int(parts[0]))
        except ValueError:
            raise DataError(f"{path}:{lineno}: non-integer label {text!r}")
    if not values:
        raise DataError(f"{path}: empty label file")
    return np.asarray(values, dtype=np.int64)


def load_dataset(bundle: DatasetBundle) -> AttributedGraph:
    """Parse the bundle into a graph, warning when a known corpus shape differs."""
    edges = read_edges(bundle.edges_path)
    features = read_features(bundle.features_path)
    labels = None
    if bundle.labels_path is not None:
        labels = read_labels(bundle.labels_path)
        if labels.size != features.shape[0]:
            raise DataError(
                f"{bundle.labels_path} has {labels.size} labels but "
                f"{bundle.features_path} has {features.shape[0]} rows"
            )
    g = build_graph(edges, features, labels)
    if bundle.name and bundle.name.lower() in KNOWN_SHAPES:
        n, m_edges, m_feat, classes = KNOWN_SHAPES[bundle.name.lower()]
        actual = (
            g.n,
            g.num_edges,
            g.features.shape[1],
            int(g.labels.max()) + 1 if g.labels is not None else classes,
        )
        if actual != (n, m_edges, m_feat, classes):
            warnings.warn(
                f"{bundle.name}: loaded shape {actual} differs from the "
                f"published ({n}, {m_edges}, {m_feat}, {classes})"
            )
    return g


def generate_sbm(spec: SbmSpec) -> AttributedGraph:
    """Planted-block graph with Gaussian features around per-block centers.

    Edge draws are Bernoulli per pair (p_in within a block, p_out across);
    an empty draw restarts with a fresh seed-derived stream, so every spec
    yields at least one edge and the same spec reproduces the same graph.
    """
    sizes = np.asarray(spec.blocks, dtype=np.int64)
    n = int(sizes.sum())
    labels = np.repeat(np.arange(sizes.size), sizes)
    starts = np.concatenate([[0], np.cumsum(sizes)])
    for attempt in range(1000):
        rng = np.random.default_rng([spec.seed, attempt])
        rows, cols = [], []
        for a in range(sizes.size):
            for b in range(a, sizes.size):
                p = spec.p_in if a == b else spec.p_out
                draw = rng.random((int(sizes[a]), int(sizes[b]))) < p
                if a == b:
                    draw = np.triu(draw, k=1)
                r, c = np.nonzero(draw)
                rows.append(r + starts[a])
                cols.append(c + starts[b])
        u = np.concatenate(rows)
        v = np.concatenate(cols)
        if u.size == 0:
            continue
        edges = np.stack([u, v], axis=1)
        if sizes.size <= spec.feature_dim:
            centers = np.eye(sizes.size, spec.feature_dim)
        else:
            centers = rng.standard_normal((sizes.size, spec.feature_dim))
            centers /= np.linalg.norm(centers, axis=1, keepdims=True)
        features = (
            spec.center_separation * centers[labels]
            + spec.noise_sigma * rng.standard_normal((n, spec.feature_dim))
        )
        return build_graph(edges, features, labels)
    raise DataError("edge probabilities too small: no edges after 1000 attempts")


def write_edges(path, g: AttributedGraph):
    coo = g.adj.tocoo()
    keep = coo.row < coo.col
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in zip(coo.row[keep], coo.col[keep]):
            fh.write(f"{u} {v}\n")


def write_features(path, features: np.ndarray):
    n, m = features.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{n} {m}\n")
        for row in features:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def write_labels(path, labels):
    with open(path, "w", encoding="utf-8") as fh:
        for x in np.asarray(labels).ravel():
            fh.write(f"{int(x)}\n")


def write_results(history: TrainHistory, partition: Partition, H: np.ndarray,
                  config: TrainConfig, path, embedding_path=None,
                  partition_path=None):
    """Serialize one run to JSON, optionally dumping H and the partition as text.

    ``final`` repeats the last record's metrics (null on an empty history);
    timing values live only under ``timing`` and in each record's wall_s, so
    determinism comparisons can drop them wholesale.
    """
    records = [asdict(r) for r in history.records]
    final = None
    if records:
        last = records[-1]
        final = {key: last[key]
                 for key in ("q", "q_prime", "dbi", "nmi", "acc", "f1", "ari")}
    timing = {key: history.meta.get(key)
              for key in ("louvain_ms", "train_ms", "total_ms")}
    predetect = {key: value for key, value in history.meta.items()
                 if not key.endswith("_ms")}
    doc = {
        "config": asdict(config),
        "predetect": predetect,
        "records": records,
        "final": final,
        "timing": timing,
    }
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        if embedding_path is not None:
            write_features(embedding_path, H)
        if partition_path is not None:
            write_labels(partition_path, partition.assign)
    except OSError as exc:
        raise DataError(f"cannot write results to {path}: {exc}") from exc
