"""Graphex random graphs: simulation, tail-index estimation and unseen-edge prediction."""

__version__ = "0.1.0"

from .graph import (BipartiteGraph, DegreeSummary, UndirectedGraph, count_self_loops,
                    degree_summary, graph_from_pairs, non_self_degree)
from .models import (GGP, AlmostDense, BipartiteModelSpec, Dense, ModelSpec, SparseNonSeparable,
                     SparseSeparable, eval_mu, eval_nu, make_model, truncation_bounds)
from .sampler import p_sample, sample_bipartite, sample_unipartite
from .estimators import (EstimateReport, count_N_p, estimate_sigma_bipartite, estimate_sigma_cr,
                         estimate_sigma_nsvr)
from .prediction import normalized_rmse, predict_edges
from .theory import (BiasDiagnostics, bias_b, expected_Dk, expected_M, expected_N_p,
                     gamma_diagnostic)
