"""Tail-index of one side of a bipartite graph.

For a bipartite graphex the left-side degrees carry the left tail-index.
The estimator below uses p = 1/2.  The variant without the final "-1"
converges to 1 + sigma, which the last column makes visible.
"""
import numpy as np

from graphex import BipartiteModelSpec, estimate_sigma_bipartite, sample_bipartite
from graphex.theory import expected_Dk


def main(reps=20):
    for sv in (0.3, 0.5, 0.7):
        bm = BipartiteModelSpec("ggp", sv, 0.5)
        print(f"\n{bm.key()}")
        for size in (25.0, 100.0, 400.0):
            graphs = [sample_bipartite(bm, 10.0, size, seed=s) for s in range(reps)]
            est = np.mean([estimate_sigma_bipartite(g).sigma_hat for g in graphs])
            lit = np.mean([estimate_sigma_bipartite(g, paper_literal=True).sigma_hat for g in graphs])
            print(f"  alpha={size:>5.0f}  sigma_hat {est:.3f}   without -1: {lit:.3f}")
        r = expected_Dk(bm, 1.0, 800.0, 2) / expected_Dk(bm, 1.0, 800.0, 1)
        print(f"  E D_2 / E D_1 at alpha=800: {r:.4f}  (limit (1 - sigma)/2 = {(1 - sv) / 2:.4f})")


if __name__ == "__main__":
    main()
