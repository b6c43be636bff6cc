"""Sweep the loss weight alpha and watch the final modularity respond.

alpha only rescales the objective, but through Adam's step normalization it
behaves like a second learning rate, so the best setting is data-dependent:
small dense synthetics tolerate aggressive values, while sparse graphs tend
to favor small ones.  The `softmod sweep` subcommand runs the same loop from
the shell.
"""

import statistics

import softmod as sm
from softmod.training import TrainConfig


def main():
    spec = sm.SbmSpec(blocks=(60, 60, 60), p_in=0.2, p_out=0.02,
                      feature_dim=16, center_separation=2.5,
                      noise_sigma=1.0, seed=5)
    g = sm.generate_sbm(spec)
    print(f"n={g.n} edges={g.num_edges}")
    print(f"\n{'alpha':>8} {'median q':>9} {'median nmi':>11}")

    results = {}
    for alpha in (1.0, 0.1, 0.01, 0.001):
        finals = []
        for seed in range(3):
            cfg = TrainConfig(alpha=alpha, iters=80, eval_interval=20,
                              dim=24, seed=seed)
            history, _, _, _ = sm.train(g, cfg)
            finals.append(history.records[-1])
        med_q = statistics.median(r.q for r in finals)
        med_nmi = statistics.median(r.nmi for r in finals)
        results[alpha] = med_q
        print(f"{alpha:>8g} {med_q:>9.5f} {med_nmi:>11.4f}")

    best = max(results, key=results.get)
    print(f"\nbest final q at alpha={best:g}")


if __name__ == "__main__":
    main()
