"""Command-line entry point: ``graphex <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data or parse error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from . import __version__
from .estimators import CR_EDGE_COUNTS, cr_edge_count, estimate_sigma_nsvr, sigma_cr_from_counts
from .experiments import (ESTIMATORS, PRESETS, ExperimentConfig, ReplicateError, run_real_eval,
                          run_risk_table, run_species_table, run_trace_eval)
from .io import ParseError, read_edge_list, read_trace, save_edge_list
from .models import make_model
from .sampler import sample_unipartite
from .theory import gamma_diagnostic

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def parse_grid(text: str) -> list:
    """``"16..4096"`` doubles from 16 up to 4096; ``"25,50,100"`` is a plain list."""
    text = text.strip()
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = float(lo_s), float(hi_s)
        if not (0 < lo <= hi):
            raise ValueError(f"bad range {text!r}")
        out, v = [], lo
        while v <= hi * (1 + 1e-12):
            out.append(v)
            v *= 2
        return out
    return [float(x) for x in text.split(",") if x.strip()]


def _default_seed():
    raw = os.environ.get("GRAPHEX_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"GRAPHEX_SEED must be an integer, got {raw!r}") from None


def _emit(doc: dict, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _model_args(p, sizes_default=None):
    p.add_argument("--model", default="ggp", help="dense, almost-dense, sparse-sep, sparse-nonsep or ggp "
                   "(optionally with inline parameters, e.g. ggp:sigma=0.5,pair_rate=2)")
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--budget", type=float, default=1e-3, help="expected number of omitted edges per graph")


def _experiment_args(p, kind):
    _model_args(p)
    p.add_argument("--sizes", default="25,50,100" if kind == "risk-table" else "50..800")
    p.add_argument("--estimators", default="nsvr,cr" if kind == "risk-table" else "nsvr,cr,zero,oracle")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--cr-edge-count", choices=CR_EDGE_COUNTS, default="unordered")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV path (a JSON sidecar is written next to it)")
    if kind == "species-table":
        p.add_argument("--alpha-ratio", type=float, default=0.5)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("simulate", help="sample a graph and write its edge list")
    _model_args(p)
    p.add_argument("--size", type=float, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("estimate", help="estimate the tail-index of an edge list")
    p.add_argument("--input", required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--estimator", choices=("nsvr", "cr"), default="nsvr")
    p.add_argument("--clamp", action="store_true")
    p.add_argument("--cr-edge-count", choices=CR_EDGE_COUNTS, default="unordered")

    _experiment_args(sub.add_parser("risk-table", help="Monte Carlo risk of the estimators"), "risk-table")
    _experiment_args(sub.add_parser("species-table", help="Monte Carlo risk of edge prediction"),
                     "species-table")

    p = sub.add_parser("real-eval", help="subsample a real graph and score edge predictions")
    p.add_argument("--input", required=True)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--reps", type=int, default=PRESETS["ci"]["real-eval"])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--estimators", default="nsvr,cr,zero")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("trace-eval", help="predict final edge counts from trace snapshots")
    p.add_argument("--input", required=True)
    p.add_argument("--times", required=True, help="comma-separated snapshot times")
    p.add_argument("--final", type=float, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--out", default=None)

    p = sub.add_parser("theory", help="bias and second-order diagnostics by quadrature")
    p.add_argument("--model", default="ggp")
    p.add_argument("--sigma", default=None, help="value or grid (lo..hi doubles, or a comma list)")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--sizes", default="16..4096")
    p.add_argument("--out", default=None)
    return parser


def _estimators(text):
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = [n for n in names if n not in ESTIMATORS]
    if bad:
        raise UsageError(f"unknown estimators: {', '.join(bad)}")
    return names


def _write_table(table, out):
    if out:
        table.save(out)
        _emit({"output": out, "config": table.config, "version": table.version})
    else:
        table.to_csv(sys.stdout)


def _cmd_simulate(a):
    seed = a.seed if a.seed is not None else _default_seed()
    model = make_model(a.model, sigma=a.sigma)
    g = sample_unipartite(model, a.size, a.budget, seed)
    save_edge_list(g, a.out)
    _emit({"command": "simulate", "model": model.key(), "size": a.size, "budget": a.budget,
           "seed": seed, "out": a.out, "v_count": g.num_vertices, "e_count": g.num_edges})


def _cmd_estimate(a):
    g = read_edge_list(a.input)
    if a.estimator == "nsvr":
        if not 0 < a.p < 1:
            raise UsageError("--p must lie in (0, 1)")
        rep = estimate_sigma_nsvr(g, a.p, clamp=a.clamp).to_dict()
    else:
        e = cr_edge_count(g, a.cr_edge_count)
        s = sigma_cr_from_counts(g.num_vertices, e)
        rep = {"estimator": "cr", "sigma_hat": s, "v_count": g.num_vertices, "e_count": g.num_edges,
               "cr_edge_count": a.cr_edge_count, "clamped": a.clamp,
               "sigma_hat_clamped": min(max(s, 0.0), 1.0) if a.clamp else None}
    rep.update({"input": a.input})
    _emit(rep)


def _experiment_config(a, kind):
    reps = a.reps
    if reps is None:
        reps = PRESETS[a.preset or "ci"][kind]
    extra = {"alpha_ratio": a.alpha_ratio} if kind == "species-table" else {}
    cfg = ExperimentConfig(kind=kind, model=a.model, sigma=a.sigma, sizes=tuple(parse_grid(a.sizes)),
                           estimators=_estimators(a.estimators), replicates=reps,
                           seed=a.seed if a.seed is not None else _default_seed(), budget=a.budget,
                           p=a.p, cr_edge_count=a.cr_edge_count, threads=a.threads, **extra)
    cfg.build_model()  # validate early so bad parameters are usage errors
    return cfg


def _cmd_risk(a):
    try:
        cfg = _experiment_config(a, "risk-table")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write_table(run_risk_table(cfg), a.out)


def _cmd_species(a):
    try:
        cfg = _experiment_config(a, "species-table")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write_table(run_species_table(cfg), a.out)


def _cmd_real(a):
    if not 0 < a.r <= 1:
        raise UsageError("--r must lie in (0, 1]")
    g = read_edge_list(a.input)
    seed = a.seed if a.seed is not None else _default_seed()
    table = run_real_eval(g, a.r, a.reps, seed, estimators=_estimators(a.estimators),
                          threads=a.threads, key=os.path.basename(a.input))
    table.config["input"] = a.input
    _write_table(table, a.out)


def _cmd_trace(a):
    try:
        times = [float(t) for t in a.times.split(",") if t.strip()]
    except ValueError:
        raise UsageError("--times must be comma-separated numbers") from None
    trace = read_trace(a.input)
    table = run_trace_eval(trace, times, a.final, a.p)
    table.config["input"] = a.input
    _write_table(table, a.out)


def _cmd_theory(a):
    try:
        sizes = parse_grid(a.sizes)
        sigmas = [None] if a.sigma is None else parse_grid(a.sigma)
        models = [make_model(a.model, sigma=s) for s in sigmas]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows, summary = [], []
    for m in models:
        d = gamma_diagnostic(m, a.p, sizes)
        summary.append({"model": m.key(), "sigma": m.sigma, "slope": d.slope})
        rows += [(m.sigma, s, gv, b) for s, gv, b in d.rows()]
    header = ("sigma", "size", "gamma", "bias")
    if a.out:
        with open(a.out, "w", encoding="utf-8", newline="\n") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows([[repr(float(v)) for v in r] for r in rows])
        _emit({"command": "theory", "p": a.p, "sizes": sizes, "out": a.out, "diagnostics": summary})
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows([[repr(float(v)) for v in r] for r in rows])


COMMANDS = {"simulate": _cmd_simulate, "estimate": _cmd_estimate, "risk-table": _cmd_risk,
            "species-table": _cmd_species, "real-eval": _cmd_real, "trace-eval": _cmd_trace,
            "theory": _cmd_theory}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"graphex: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (ParseError, OSError, UnicodeDecodeError) as exc:
        print(f"graphex: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ArithmeticError, ReplicateError) as exc:
        print(f"graphex: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"graphex: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
