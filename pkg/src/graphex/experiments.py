"""Monte Carlo harness for risk tables, unseen-edge tables and real-graph evaluation.

Replicates are independent: replicate ``i`` at grid value ``s`` draws from the
generator keyed by ``(seed, tag, round(s * 1e6), i)``, so results do not
depend on how the work is split across processes.  Per-replicate values are
collected in replicate order before any reduction.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from . import __version__
from .estimators import (CR_EDGE_COUNTS, UndefinedEstimateError, estimate_sigma_nsvr,
                         n_p_from_degrees, sigma_cr_from_counts, cr_edge_count)
from .graph import UndirectedGraph, count_self_loops
from .io import Trace
from .models import make_model
from .prediction import predict_edges_from_counts
from .sampler import TAGS, make_rng, p_sample, sample_unipartite

KINDS = ("risk-table", "species-table", "real-eval", "trace-eval")
ESTIMATORS = ("nsvr", "cr", "zero", "oracle")

# replicate counts: the published tables versus a laptop-scale check
PRESETS = {
    "paper": {"risk-table": 10_000, "species-table": 1000, "real-eval": 1000},
    "ci": {"risk-table": 2000, "species-table": 500, "real-eval": 1000},
}


class ReplicateError(RuntimeError):
    def __init__(self, message, seed, size, replicate):
        self.seed, self.size, self.replicate = seed, size, replicate
        super().__init__(f"{message} (seed={seed}, size={size}, replicate={replicate})")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    model: str = "ggp"
    sigma: Optional[float] = None
    sizes: tuple = (25.0, 50.0, 100.0)
    alpha_ratio: float = 0.5
    estimators: tuple = ("nsvr", "cr")
    replicates: int = 2000
    seed: int = 0
    budget: float = 1e-3
    p: float = 0.5
    r: float = 0.5
    cr_edge_count: str = "unordered"
    threads: Optional[int] = None
    output: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if any(not s > 0 for s in self.sizes):
            raise ValueError("sizes must be positive")
        if self.kind == "species-table" and not 0 < self.alpha_ratio < 1:
            raise ValueError("species tables need alpha < beta")
        unknown = set(self.estimators) - set(ESTIMATORS)
        if unknown:
            raise ValueError(f"unknown estimators {sorted(unknown)}")
        if self.cr_edge_count not in CR_EDGE_COUNTS:
            raise ValueError(f"cr_edge_count must be one of {CR_EDGE_COUNTS}")
        object.__setattr__(self, "sizes", tuple(float(s) for s in self.sizes))
        object.__setattr__(self, "estimators", tuple(self.estimators))

    @classmethod
    def from_preset(cls, kind: str, preset: str, **kw):
        return cls(kind=kind, replicates=PRESETS[preset][kind], **kw)

    def build_model(self):
        return make_model(self.model, sigma=self.sigma)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sizes"] = list(self.sizes)
        d["estimators"] = list(self.estimators)
        return d


@dataclass
class ResultTable:
    """Long-format results: one row per (key, estimator, metric)."""

    rows: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    version: str = __version__

    COLUMNS = ("size", "estimator", "metric", "value", "stderr", "n_reps")

    def add(self, key, estimator, metric, value, stderr=float("nan"), n_reps=0):
        self.rows.append({"size": key, "estimator": estimator, "metric": metric,
                          "value": float(value), "stderr": float(stderr), "n_reps": int(n_reps)})

    def value(self, key, estimator, metric):
        for r in self.rows:
            if r["size"] == key and r["estimator"] == estimator and r["metric"] == metric:
                return r["value"]
        raise KeyError((key, estimator, metric))

    def row(self, key, estimator, metric):
        for r in self.rows:
            if r["size"] == key and r["estimator"] == estimator and r["metric"] == metric:
                return r
        raise KeyError((key, estimator, metric))

    def to_csv(self, stream=None) -> str:
        buf = _io.StringIO() if stream is None else stream
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.COLUMNS)
        for r in self.rows:
            w.writerow([_fmt(r[c]) for c in self.COLUMNS])
        return buf.getvalue() if stream is None else ""

    def to_json(self) -> str:
        doc = {"version": self.version, "config": self.config, "rows": self.rows}
        return json.dumps(doc, indent=2, sort_keys=True, default=_json_default)

    def save(self, path: str) -> None:
        """Write ``path`` as CSV, or JSON when it ends in ``.json``; CSV also gets a JSON sidecar."""
        if path.endswith(".json"):
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(self.to_json())
            return
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            self.to_csv(fh)
        with open(os.path.splitext(path)[0] + ".json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_json())


def _fmt(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("nan" if v != v else ("inf" if v > 0 else "-inf"))
    return str(v)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    raise TypeError(type(o))


# ---------------------------------------------------------------------------
# statistics


def _mean_se(x):
    x = np.asarray(x, float)
    n = len(x)
    se = float(np.std(x, ddof=1) / math.sqrt(n)) if n > 1 else float("nan")
    return float(np.mean(x)), se


def _root_mean_square(err):
    """sqrt(mean(err^2)) with a delta-method standard error."""
    sq = np.asarray(err, float) ** 2
    m, se = _mean_se(sq)
    root = math.sqrt(m)
    return root, (se / (2 * root) if root > 0 else 0.0)


# ---------------------------------------------------------------------------
# replicate workers


def _stream(seed, kind_tag, size, rep):
    return make_rng(seed, TAGS["replicate"], kind_tag, int(round(size * 1e6)), rep)


def _sigma_hats(graph: UndirectedGraph, cfg: ExperimentConfig, true_sigma):
    out = []
    for est in cfg.estimators:
        if est == "nsvr":
            deg = graph.nonself_degrees
            n1, npv = n_p_from_degrees(deg, 1.0), n_p_from_degrees(deg, cfg.p)
            out.append(0.0 if npv < 1 else (math.log(n1) - math.log(npv)) / (-math.log(cfg.p)) - 1.0)
        elif est == "cr":
            try:
                out.append(sigma_cr_from_counts(graph.num_vertices, cr_edge_count(graph, cfg.cr_edge_count)))
            except UndefinedEstimateError:
                out.append(float("nan"))
        elif est == "zero":
            out.append(0.0)
        else:
            out.append(float(true_sigma))
    return out


def _risk_block(cfg: ExperimentConfig, size: float, start: int, stop: int):
    model = cfg.build_model()
    rows = []
    for rep in range(start, stop):
        try:
            g = sample_unipartite(model, size, cfg.budget, rng=_stream(cfg.seed, 0, size, rep))
            rows.append(_sigma_hats(g, cfg, model.sigma) + [g.num_vertices, g.num_edges])
        except Exception as exc:  # noqa: BLE001 - re-raised with the replicate's coordinates
            raise ReplicateError(repr(exc), cfg.seed, size, rep) from exc
    return np.asarray(rows, float).reshape(-1, len(cfg.estimators) + 2)


def _species_block(cfg: ExperimentConfig, beta: float, start: int, stop: int):
    model = cfg.build_model()
    rows = []
    for rep in range(start, stop):
        try:
            rng = _stream(cfg.seed, 1, beta, rep)
            gb = sample_unipartite(model, beta, cfg.budget, rng=rng)
            ga = p_sample(gb, cfg.alpha_ratio, rng=rng)
            rows.append(_prediction_row(ga, gb, cfg, model.sigma))
        except Exception as exc:  # noqa: BLE001
            raise ReplicateError(repr(exc), cfg.seed, beta, rep) from exc
    return np.asarray(rows, float).reshape(-1, len(cfg.estimators) + 4)


def _prediction_row(ga, gb, cfg, true_sigma):
    preds = []
    loops = count_self_loops(ga)
    for s in _sigma_hats(ga, cfg, true_sigma):
        if ga.num_vertices == 0 or not s > -1:
            preds.append(float("nan"))
        else:
            preds.append(predict_edges_from_counts(ga.num_vertices, ga.num_edges, loops,
                                                   gb.num_vertices, s))
    return preds + [ga.num_vertices, gb.num_vertices, ga.num_edges, gb.num_edges]


def _real_block(cfg: ExperimentConfig, graph: UndirectedGraph, start: int, stop: int):
    rows = []
    for rep in range(start, stop):
        try:
            sub = p_sample(graph, cfg.r, rng=_stream(cfg.seed, 2, cfg.r, rep))
            small = n_p_from_degrees(sub.nonself_degrees, cfg.p) < 1.0
            rows.append(_prediction_row(sub, graph, cfg, float("nan")) + [float(small)])
        except Exception as exc:  # noqa: BLE001
            raise ReplicateError(repr(exc), cfg.seed, cfg.r, rep) from exc
    return np.asarray(rows, float).reshape(-1, len(cfg.estimators) + 5)


def _blocks(n, block):
    return [(a, min(a + block, n)) for a in range(0, n, block)]


def _run(fn, tasks, threads):
    """Evaluate ``fn(*task)`` for every task, preserving task order."""
    if threads is None:
        threads = os.cpu_count() or 1
    if threads <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, *t) for t in tasks]
        return [f.result() for f in futures]


def _replicate_matrix(fn, cfg, lead_args, block=50):
    tasks = [(*lead_args, a, b) for a, b in _blocks(cfg.replicates, block)]
    return np.vstack(_run(fn, tasks, cfg.threads))


# ---------------------------------------------------------------------------
# public runners


def run_risk_table(config: ExperimentConfig) -> ResultTable:
    """RMSE of each tail-index estimator at each size."""
    if config.kind != "risk-table":
        raise ValueError("config.kind must be 'risk-table'")
    sigma = config.build_model().sigma
    table = ResultTable(config=config.to_dict())
    for size in config.sizes:
        data = _replicate_matrix(_risk_block, config, (config, size))
        n = len(data)
        for j, est in enumerate(config.estimators):
            col = data[:, j]
            ok = np.isfinite(col)
            if ok.sum() == 0:
                continue
            rmse, se = _root_mean_square(col[ok] - sigma)
            table.add(size, est, "rmse", rmse, se, int(ok.sum()))
            m, mse = _mean_se(col[ok])
            table.add(size, est, "mean", m, mse, int(ok.sum()))
            if ok.sum() < n:
                table.add(size, est, "undefined", n - ok.sum(), 0.0, n)
        for k, name in enumerate(("mean_v", "mean_e")):
            m, se = _mean_se(data[:, len(config.estimators) + k])
            table.add(size, "graph", name, m, se, n)
    _maybe_save(table, config)
    return table


def _prediction_table(table, key, data, estimators, prefix=("alpha", "beta")):
    n = len(data)
    k = len(estimators)
    truth = data[:, k + 3]
    for j, est in enumerate(estimators):
        pred = data[:, j]
        ok = np.isfinite(pred) & (truth > 0)
        if ok.sum() == 0:
            continue
        r, se = _root_mean_square((pred[ok] - truth[ok]) / truth[ok])
        table.add(key, est, "nrmse", r, se, int(ok.sum()))
        m, mse = _mean_se(pred[ok])
        table.add(key, est, "mean_prediction", m, mse, int(ok.sum()))
    a, b = prefix
    for c, name in enumerate((f"mean_v_{a}", f"mean_v_{b}", f"mean_e_{a}", f"mean_e_{b}")):
        m, se = _mean_se(data[:, k + c])
        table.add(key, "graph", name, m, se, n)


def run_species_table(config: ExperimentConfig) -> ResultTable:
    """Normalized prediction risk of |E_beta| from G_alpha, alpha = alpha_ratio * beta."""
    if config.kind != "species-table":
        raise ValueError("config.kind must be 'species-table'")
    model = config.build_model()
    if model.kind != "ggp":
        warnings.warn("species tables are calibrated for the GGP model", stacklevel=2)
    table = ResultTable(config=config.to_dict())
    for beta in config.sizes:
        data = _replicate_matrix(_species_block, config, (config, beta))
        _prediction_table(table, beta, data, config.estimators)
    _maybe_save(table, config)
    return table


def run_real_eval(graph: UndirectedGraph, r: float = 0.5, replicates: int = 1000, seed: int = 0,
                  estimators=("nsvr", "cr", "zero"), threads=None, key="graph",
                  cr_edge_count: str = "unordered") -> ResultTable:
    """Treat ``graph`` as G_beta, r-sample it to G_alpha and score edge predictions."""
    if graph.num_vertices == 0:
        raise ValueError("graph is empty")
    if not 0 < r <= 1:
        raise ValueError("r must lie in (0, 1]")
    cfg = ExperimentConfig(kind="real-eval", model="dense", sizes=(1.0,), r=r, replicates=replicates,
                           seed=seed, estimators=tuple(e for e in estimators if e != "oracle"),
                           threads=threads, cr_edge_count=cr_edge_count)
    data = _replicate_matrix(_real_block, cfg, (cfg, graph))
    table = ResultTable(config={**cfg.to_dict(), "graph_vertices": graph.num_vertices,
                                "graph_edges": graph.num_edges})
    _prediction_table(table, key, data, cfg.estimators, prefix=("sub", "full"))
    # replicates where N_p < 1 fell back to sigma_hat = 0
    table.add(key, "nsvr", "np_below_one", int(data[:, -1].sum()), 0.0, len(data))
    return table


def run_trace_eval(trace: Trace, snapshot_times, final_time: float, p: float = 0.5) -> ResultTable:
    """Predict the final number of distinct edges from each snapshot (no randomness)."""
    times = [float(t) for t in snapshot_times]
    if times and final_time < max(times):
        raise ValueError("final_time must not precede the snapshots")
    final = trace.snapshot(final_time)
    table = ResultTable(config={"kind": "trace-eval", "snapshot_times": times,
                                "final_time": float(final_time), "p": p})
    table.add(float(final_time), "graph", "final_v", final.num_vertices, 0.0, 1)
    table.add(float(final_time), "graph", "final_e", final.num_edges, 0.0, 1)
    for t in times:
        g = trace.snapshot(t)
        if g.num_vertices == 0:
            warnings.warn(f"snapshot at t={t} is empty; row skipped", stacklevel=2)
            continue
        table.add(t, "graph", "v", g.num_vertices, 0.0, 1)
        table.add(t, "graph", "e", g.num_edges, 0.0, 1)
        sig = {"nsvr": estimate_sigma_nsvr(g, p).sigma_hat, "zero": 0.0}
        try:
            sig["cr"] = sigma_cr_from_counts(g.num_vertices, g.num_edges)
        except UndefinedEstimateError:
            warnings.warn(f"CR estimate undefined at t={t}", stacklevel=2)
        loops = count_self_loops(g)
        for name in ("nsvr", "cr", "zero"):
            if name not in sig:
                continue
            table.add(t, name, "sigma_hat", sig[name], 0.0, 1)
            nhat = predict_edges_from_counts(g.num_vertices, g.num_edges, loops,
                                             final.num_vertices, sig[name])
            table.add(t, name, "nhat", nhat, 0.0, 1)
    return table


def _maybe_save(table: ResultTable, config: ExperimentConfig):
    if config.output:
        table.save(config.output)
