"""How fast do edges outgrow vertices?

Samples each of the five model families at increasing sizes and compares
the degree-based tail-index estimate (NSVR) with the size-based one (CR)
and with the true value.  Dense models sit at sigma = 0; the sparse ones
approach their sigma as the graph grows.
"""
import numpy as np

from graphex import estimate_sigma_nsvr, make_model, sample_unipartite
from graphex.estimators import estimate_sigma_cr

MODELS = ["dense", "almost-dense", "sparse-sep:sigma=0.3", "sparse-nonsep:sigma=0.3", "ggp:sigma=0.5"]
SIZES = [25, 50, 100, 200]


def main(reps=20):
    for key in MODELS:
        model = make_model(key)
        print(f"\n{model.key()}  (true sigma = {model.sigma})")
        print(f"{'size':>6} {'|V|':>8} {'|E|':>9} {'nsvr':>8} {'cr':>8}")
        for size in SIZES:
            graphs = [sample_unipartite(model, size, seed=s) for s in range(reps)]
            v = np.mean([g.num_vertices for g in graphs])
            e = np.mean([g.num_edges for g in graphs])
            nsvr = np.mean([estimate_sigma_nsvr(g).sigma_hat for g in graphs])
            cr = np.mean([estimate_sigma_cr(g) for g in graphs])
            print(f"{size:>6} {v:>8.1f} {e:>9.1f} {nsvr:>8.3f} {cr:>8.3f}")


if __name__ == "__main__":
    main()
