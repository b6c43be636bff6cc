"""Command-line front end: detect, louvain, eval, synth, sweep."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import data
from .errors import DataError, NumericalError
from .graph import build_graph, modularity_hard
from .metrics import acc, ari, dbi, f1, nmi
from .predetect import louvain_detect
from .training import TrainConfig, train

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p: _Parser, list_valued=False):
    # sweep takes comma lists for the two swept flags, same single-value default
    if list_valued:
        p.add_argument("--delta", type=str, default="30.0")
        p.add_argument("--alpha", type=str, default="0.001")
    else:
        p.add_argument("--delta", type=float, default=30.0)
        p.add_argument("--alpha", type=float, default=0.001)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--weight-decay", type=float, default=0.005)
    p.add_argument("--iters", type=int, default=300)
    p.add_argument("--dim", type=int, default=512)
    p.add_argument("--eval-interval", type=int, default=10)
    p.add_argument("--threshold-coef", type=float, default=0.5)
    p.add_argument("--activation", choices=("relu", "tanh", "identity"),
                   default="relu")
    p.add_argument("--sim", choices=("cosine", "dot"), default="cosine")
    p.add_argument("--sign", choices=("plus", "minus"), default="plus")
    p.add_argument("--precision", choices=("f64", "f32"), default="f64")
    p.add_argument("--seed", type=int, default=0)


def _add_input_flags(p: _Parser):
    p.add_argument("--edges", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--labels", default=None)
    p.add_argument("--name", default=None,
                   help="dataset name, checked against known corpus shapes")


def _config_from(args, **overrides) -> TrainConfig:
    base = dict(
        delta=args.delta, alpha=args.alpha, lr=args.lr,
        weight_decay=args.weight_decay, iters=args.iters,
        eval_interval=args.eval_interval, dim=args.dim, seed=args.seed,
        activation=args.activation, sim_mode=args.sim, sign=args.sign,
        precision=args.precision, threshold_coef=args.threshold_coef,
    )
    base.update(overrides)
    return TrainConfig(**base)


def _load(args):
    bundle = data.DatasetBundle(
        edges_path=args.edges, features_path=args.features,
        labels_path=args.labels, name=args.name,
    )
    return data.load_dataset(bundle)


def _fmt(x) -> str:
    return "na" if x is None else f"{x:.6f}"


def _print_history(history):
    meta = history.meta
    print(f"pre-detection: {meta['louvain_communities']} communities, "
          f"k={meta['k']} kept (threshold {meta['threshold']:.4f})")
    for r in history.records:
        print(f"it={r.iteration:d} loss={r.loss:.6e} q_prime={r.q_prime:.6f} "
              f"q={r.q:.6f} dbi={_fmt(r.dbi)} nmi={_fmt(r.nmi)} "
              f"acc={_fmt(r.acc)} f1={_fmt(r.f1)} ari={_fmt(r.ari)}")


def _run_detect(args):
    g = _load(args)
    cfg = _config_from(args)
    history, H, P, partition = train(g, cfg)
    data.write_results(history, partition, H, cfg, args.out,
                       embedding_path=args.embedding_out,
                       partition_path=args.partition_out)
    _print_history(history)
    print(f"wrote {args.out}")


def _run_louvain(args):
    edges = data.read_edges(args.edges)
    if args.features is not None:
        features = data.read_features(args.features)
    else:
        if edges.size == 0:
            raise DataError(f"{args.edges}: no edges")
        features = np.ones((int(edges.max()) + 1, 1))
    g = build_graph(edges, features)
    partition = louvain_detect(g, args.seed)
    q = modularity_hard(g, partition)
    if args.out is not None:
        data.write_labels(args.out, partition.assign)
    print(f"communities={partition.num_communities} q={q:.6f}")
    if args.out is not None:
        print(f"wrote {args.out}")


def _run_eval(args):
    pred = data.read_labels(args.pred)
    truth = data.read_labels(args.truth)
    print(f"nmi={nmi(pred, truth):.6f}")
    print(f"acc={acc(pred, truth):.6f}")
    print(f"f1={f1(pred, truth):.6f}")
    print(f"ari={ari(pred, truth):.6f}")
    if args.embedding is not None:
        H = data.read_features(args.embedding)
        print(f"dbi={dbi(H, pred):.6f}")


def _run_synth(args):
    spec = data.SbmSpec(
        blocks=tuple(int(b) for b in args.blocks.split(",")),
        p_in=args.p_in, p_out=args.p_out, feature_dim=args.feature_dim,
        center_separation=args.separation, noise_sigma=args.noise,
        seed=args.seed,
    )
    g = data.generate_sbm(spec)
    data.write_edges(args.out_prefix + ".edges", g)
    data.write_features(args.out_prefix + ".features", g.features)
    data.write_labels(args.out_prefix + ".labels", g.labels)
    print(f"n={g.n} edges={g.num_edges} blocks={len(spec.blocks)}")
    print(f"wrote {args.out_prefix}.{{edges,features,labels}}")


def _parse_list(text: str):
    try:
        values = [float(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise ValueError(f"bad numeric list {text!r}")
    if not values:
        raise ValueError(f"empty numeric list {text!r}")
    return values


def _run_sweep(args):
    alphas = _parse_list(args.alpha)
    deltas = _parse_list(args.delta)
    if len(alphas) > 1 and len(deltas) > 1:
        raise ValueError("sweep varies alpha or delta, not both")
    if len(deltas) > 1:
        axis, values = "delta", deltas
    else:
        axis, values = "alpha", alphas
    g = _load(args)
    best = None
    for value in values:
        overrides = {"alpha": alphas[0], "delta": deltas[0], axis: value}
        cfg = _config_from(args, **overrides)
        history, H, P, partition = train(g, cfg)
        out = f"{args.out_prefix}_{axis}{value:g}.json"
        data.write_results(history, partition, H, cfg, out)
        final_q = history.records[-1].q if history.records else float("nan")
        print(f"{axis}={value:g} q={final_q:.6f} -> {out}")
        if best is None or final_q > best[1]:
            best = (value, final_q)
    print(f"best {axis}={best[0]:g} (q={best[1]:.6f})")


def build_parser() -> _Parser:
    parser = _Parser(prog="softmod",
                     description="Attributed-graph community detection by "
                                 "soft-modularity optimization")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("detect", help="full pipeline, results to JSON")
    _add_input_flags(p)
    _add_config_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--embedding-out", default=None)
    p.add_argument("--partition-out", default=None)
    p.set_defaults(func=_run_detect)

    p = sub.add_parser("louvain", help="structural pre-detection only")
    p.add_argument("--edges", required=True)
    p.add_argument("--features", default=None,
                   help="optional; node count comes from edge ids if omitted")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="partition file to write")
    p.set_defaults(func=_run_louvain)

    p = sub.add_parser("eval", help="score a partition against ground truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--embedding", default=None,
                   help="embedding file enables DBI")
    p.set_defaults(func=_run_eval)

    p = sub.add_parser("synth", help="generate a planted-block dataset")
    p.add_argument("--blocks", required=True, help="comma list, e.g. 50,50,50")
    p.add_argument("--p-in", type=float, required=True)
    p.add_argument("--p-out", type=float, required=True)
    p.add_argument("--feature-dim", type=int, default=16)
    p.add_argument("--separation", type=float, default=4.0)
    p.add_argument("--noise", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=_run_synth)

    p = sub.add_parser("sweep", help="repeat detect over alpha or delta values")
    _add_input_flags(p)
    _add_config_flags(p, list_valued=True)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=_run_sweep)

    return parser


def run(argv=None) -> int:
    """Parse and dispatch; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
        return EXIT_OK
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
