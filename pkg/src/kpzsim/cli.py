"""Command-line interface.

Subcommands:

* ``simulate``    -- run one trajectory and dump its state(s)
* ``moments``     -- q-moment contour values as CSV
* ``dist``        -- limit-law CDF tables as CSV (+ figure)
* ``experiment``  -- full regime experiment from a JSON config (+ figures)
* ``check``       -- acceptance suite, one PASS/FAIL line per criterion

Config files are JSON objects with the fields of `harness.ExperimentConfig`;
command-line flags override file values.  Common flags: --seed, --threads,
--out.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys

import numpy as np

from . import __version__, acceptance, asep, harness, limits, qmoment, rng, sixvertex
from .scaling import AsepParams, BernoulliBoundary, SixVertexParams


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="root seed (default 1)")
    p.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--out", type=str, default=None, help="output base path")


def _seed(args) -> int:
    return 1 if args.seed is None else args.seed


def _cmd_simulate(args) -> int:
    if args.model == "six_vertex":
        params = SixVertexParams(args.delta1, args.delta2)
        boundary = BernoulliBoundary.uniform(args.m, args.b) if args.m else BernoulliBoundary.step()
        g = rng.stream(_seed(args), "simulate")
        bits = sixvertex.sample_boundary(boundary, params.q, args.rows, g)
        traj = sixvertex.run_six_vertex(params, bits, args.rows, g)
        lines = [state.to_text() for state in traj]
    else:
        params = AsepParams(args.rate_left, args.rate_right)
        boundary = BernoulliBoundary.uniform(args.m, args.b) if args.m else BernoulliBoundary.step()
        g = rng.stream(_seed(args), "simulate")
        n_bits = asep.CutoffPolicy().n_boundary_bits(params, args.time, 0.0)
        bits = sixvertex.sample_boundary(boundary, params.q, n_bits, g)
        state = asep.simulate(asep.init_from_boundary(bits), params, args.time, g)
        lines = [
            f"time={state.time} left_cutoff={state.left_cutoff}",
            "positions=" + ",".join(str(int(p)) for p in state.positions),
        ]
    text = "\n".join(lines) + "\n"
    if args.out:
        pathlib.Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_moments(args) -> int:
    params = SixVertexParams(args.delta1, args.delta2)
    boundary = BernoulliBoundary.uniform(args.m, args.b) if args.m else None
    rows = ["k,x,t,value,imag_residual,nodes"]
    for k in range(1, args.kmax + 1):
        for x in args.x:
            for t in args.t:
                res = qmoment.qmoment(k, x, t, params, boundary)
                rows.append(f"{k},{x},{t},{res.value!r},{res.imag_residual!r},{res.node_count}")
    text = "\n".join(rows) + "\n"
    if args.out:
        pathlib.Path(args.out).with_suffix(".csv").write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_dist(args) -> int:
    s_grid = np.arange(args.smin, args.smax + 1e-9, args.step)
    columns: dict = {}
    shifts = tuple(args.bbp_shifts) if args.bbp_shifts else ()
    for name in args.which:
        if name == "tw":
            columns["F_TW"] = [limits.tracy_widom_cdf(float(s)) for s in s_grid]
        elif name == "bbp":
            columns[f"F_BBP;c={list(shifts)}"] = [
                limits.bbp_cdf(float(s), shifts) for s in s_grid
            ]
        elif name == "gm":
            for m in args.gm:
                columns[f"G_{m}"] = [
                    limits.gue_finite_cdf(float(s), m).quadrature for s in s_grid
                ]
        else:
            raise SystemExit(f"unknown table {name!r}")
    rows = ["s," + ",".join(columns)]
    for i, s in enumerate(s_grid):
        rows.append(f"{float(s)!r}," + ",".join(f"{float(v[i])!r}" for v in columns.values()))
    text = "\n".join(rows) + "\n"
    if args.out:
        base = pathlib.Path(args.out)
        base.with_suffix(".csv").write_text(text)
        if not args.no_figures:
            from . import report

            fig = report.dist_figure(s_grid, columns, base)
            print(f"wrote {base.with_suffix('.csv')} and {fig}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_experiment(args) -> int:
    data = {}
    if args.config:
        data = json.loads(pathlib.Path(args.config).read_text())
    for key in ("model", "regime", "b", "m", "eta", "delta1", "delta2",
                "rate_left", "rate_right", "d", "n_samples"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    if args.t_ladder:
        data["t_ladder"] = args.t_ladder
    if args.seed is not None:
        data["seed"] = args.seed
    cfg = harness.ExperimentConfig.from_dict(data)
    target = harness.target_cdf(cfg)
    result = harness.run_experiment(cfg, threads=args.threads, target=target)
    base = pathlib.Path(args.out or "experiment")
    json_path, csv_path = harness.persist(result, base)
    written = [json_path, csv_path]
    if not args.no_figures:
        from . import report

        written += report.experiment_figures(result, target[0], base)
    for e in result.entries:
        print(f"T={e.t:6d}  x={e.x:7d}  KS={e.ks:.4f}  (n={len(e.raw)})")
    print(f"target {result.target_label}; wrote " + ", ".join(str(p) for p in written))
    return 0


def _cmd_check(args) -> int:
    results = acceptance.run_criteria(args.only, threads=args.threads)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kpzsim", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=f"kpzsim {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run and dump one trajectory")
    p.add_argument("--model", choices=("six_vertex", "asep"), default="six_vertex")
    p.add_argument("--delta1", type=float, default=0.25)
    p.add_argument("--delta2", type=float, default=0.5)
    p.add_argument("--rate-left", dest="rate_left", type=float, default=0.5)
    p.add_argument("--rate-right", dest="rate_right", type=float, default=1.5)
    p.add_argument("--rows", type=int, default=16, help="six-vertex rows")
    p.add_argument("--time", type=float, default=8.0, help="asep time horizon")
    p.add_argument("-m", type=int, default=1, help="boundary columns (0 = step data)")
    p.add_argument("-b", type=float, default=0.5, help="boundary density")
    _add_common(p)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("moments", help="q-moment contour values as CSV")
    p.add_argument("--delta1", type=float, default=0.25)
    p.add_argument("--delta2", type=float, default=0.5)
    p.add_argument("-m", type=int, default=0)
    p.add_argument("-b", type=float, default=0.5)
    p.add_argument("--kmax", type=int, default=2)
    p.add_argument("-x", type=int, nargs="+", default=[1, 2, 3, 4])
    p.add_argument("-t", type=int, nargs="+", default=[1, 2, 3])
    _add_common(p)
    p.set_defaults(fn=_cmd_moments)

    p = sub.add_parser("dist", help="limit-law CDF tables")
    p.add_argument("--which", nargs="+", default=["tw", "gm"],
                   choices=["tw", "bbp", "gm"])
    p.add_argument("--bbp-shifts", type=float, nargs="*", default=[])
    p.add_argument("--gm", type=int, nargs="+", default=[1, 2, 3])
    p.add_argument("--smin", type=float, default=-6.0)
    p.add_argument("--smax", type=float, default=4.0)
    p.add_argument("--step", type=float, default=0.25)
    p.add_argument("--no-figures", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_dist)

    p = sub.add_parser("experiment", help="full regime experiment")
    p.add_argument("--config", type=str, default=None, help="JSON config file")
    p.add_argument("--model", choices=("six_vertex", "asep"))
    p.add_argument("--regime", choices=("tw", "bbp", "gaussian"))
    p.add_argument("--eta", type=float)
    p.add_argument("-b", type=float)
    p.add_argument("-m", type=int)
    p.add_argument("--delta1", type=float)
    p.add_argument("--delta2", type=float)
    p.add_argument("--rate-left", dest="rate_left", type=float)
    p.add_argument("--rate-right", dest="rate_right", type=float)
    p.add_argument("-d", type=float)
    p.add_argument("--t-ladder", type=int, nargs="+")
    p.add_argument("--n-samples", dest="n_samples", type=int)
    p.add_argument("--no-figures", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_experiment)

    p = sub.add_parser("check", help="run the acceptance suite")
    p.add_argument("--only", nargs="+", default=None,
                   help="criteria to run (1..7; default all)")
    _add_common(p)
    p.set_defaults(fn=_cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
