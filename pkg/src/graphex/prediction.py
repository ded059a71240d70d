"""Predicting the number of edges of a larger graph from an observed smaller one."""
from __future__ import annotations

import math

import numpy as np

from .graph import UndirectedGraph, count_self_loops


def predict_edges_from_counts(v_alpha: int, e_alpha: int, self_loops: int,
                              v_beta: float, sigma_hat: float) -> float:
    if v_alpha < 1:
        raise ValueError("the observed graph has no vertices")
    if not sigma_hat > -1.0:
        raise ValueError("sigma_hat must exceed -1")
    if v_beta <= 0:
        raise ValueError("v_beta_count must be positive")
    return (v_beta / v_alpha) ** (2.0 / (1.0 + sigma_hat)) * (e_alpha - self_loops)


def predict_edges(graph_at_alpha: UndirectedGraph, v_beta_count: float, sigma_hat: float) -> float:
    """(|V_beta| / |V_alpha|)^(2 / (1 + sigma_hat)) * (|E_alpha| - #self-loops)."""
    return predict_edges_from_counts(graph_at_alpha.num_vertices, graph_at_alpha.num_edges,
                                     count_self_loops(graph_at_alpha), v_beta_count, sigma_hat)


def normalized_rmse(pairs) -> float:
    """sqrt(mean((prediction - truth)^2 / truth^2)) over (prediction, truth) pairs."""
    arr = np.asarray(list(pairs), dtype=float).reshape(-1, 2)
    if len(arr) == 0:
        raise ValueError("no (prediction, truth) pairs given")
    pred, truth = arr[:, 0], arr[:, 1]
    if np.any(truth <= 0):
        raise ValueError("truth values must be positive")
    return math.sqrt(float(np.mean(((pred - truth) / truth) ** 2)))
