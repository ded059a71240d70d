"""Exact expectations versus simulation.

The expected smoothed vertex count E N_p has a one-dimensional integral
form.  Here it is evaluated by quadrature and compared with a Monte Carlo
average; then the bias of the estimator is traced across sizes, together
with the second-order quantity Gamma that controls it.
"""
import math

import numpy as np

from graphex import count_N_p, make_model, sample_unipartite
from graphex.theory import expected_N_p, gamma_diagnostic


def monte_carlo(model, size, p, reps=400):
    vals = np.array([count_N_p(sample_unipartite(model, size, seed=s), p) for s in range(reps)])
    return vals.mean(), vals.std(ddof=1) / math.sqrt(reps)


def main():
    print("E N_p at size 40: quadrature vs Monte Carlo (400 graphs)")
    for key in ("dense", "sparse-sep:sigma=0.3", "ggp:sigma=0.5"):
        model = make_model(key)
        for p in (0.5, 1.0):
            m, se = monte_carlo(model, 40.0, p)
            q = expected_N_p(model, p, 40.0)
            print(f"  {model.key():<24} p={p:<4} quad {q:9.3f}   mc {m:9.3f} +- {se:.3f}")

    print("\nbias b and Gamma across sizes (p = 0.5)")
    sizes = [2.0 ** k for k in range(4, 13, 2)]
    for key in ("dense", "almost-dense", "ggp:sigma=0.5"):
        d = gamma_diagnostic(make_model(key), 0.5, sizes)
        print(f"  {key}: fitted log-log slope of Gamma = {d.slope:.3f}")
        for size, g, b in d.rows():
            print(f"    size {size:>6.0f}  Gamma {g:.3e}  bias {b:+.3e}")


if __name__ == "__main__":
    main()
