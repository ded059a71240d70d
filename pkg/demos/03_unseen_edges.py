"""Predicting how many edges a graph will have once it has grown.

We observe a graph at size alpha, learn only the vertex count of the larger
graph at size beta = 2 alpha, and predict its edge count.  The dense
exponent (sigma = 0) badly over-predicts for sparse graphs; plugging in the
NSVR estimate fixes most of that.
"""
import numpy as np

from graphex import make_model, p_sample, predict_edges, sample_unipartite
from graphex.estimators import estimate_sigma_cr, estimate_sigma_nsvr


def main(beta=100.0, reps=100):
    model = make_model("ggp:sigma=0.5,pair_rate=2,weight_floor=1e-5")
    errs = {"nsvr": [], "cr": [], "zero": [], "oracle": []}
    for s in range(reps):
        g_beta = sample_unipartite(model, beta, seed=s)
        # the size-alpha graph is a half-sample of the vertices of G_beta
        g_alpha = p_sample(g_beta, 0.5, seed=s)
        sig = {"nsvr": estimate_sigma_nsvr(g_alpha).sigma_hat, "cr": estimate_sigma_cr(g_alpha),
               "zero": 0.0, "oracle": model.sigma}
        for name, value in sig.items():
            pred = predict_edges(g_alpha, g_beta.num_vertices, value)
            errs[name].append((pred - g_beta.num_edges) / g_beta.num_edges)
    print(f"GGP sigma=0.5, beta={beta:g}, {reps} replicates")
    for name, e in errs.items():
        e = np.asarray(e)
        print(f"  {name:<7} mean relative error {e.mean():+.3f}   normalized RMSE {np.sqrt(np.mean(e ** 2)):.4f}")


if __name__ == "__main__":
    main()
