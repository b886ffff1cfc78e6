"""Command-line interface.

Exit codes: 0 on success, 2 for invalid configuration or arguments,
3 for generation or numerical failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .experiments import (
    EXPERIMENT_NAMES,
    ExperimentSpec,
    SweepTable,
    _fmt_cell,
    default_spec,
    load_spec,
    rebase_seeds,
    run_experiment,
    write_table,
)
from .graph import max_cod, laplacian_split, read_graph, ring_lattice, erdos_renyi, watts_strogatz, designate_uncertain, write_graph
from .margin import DynamicsParams, check_mss, optimal_gain, saddle_gain
from .sim import PHI_KINDS, XI_DISTRIBUTIONS, NonlinearityKind, SimConfig, run_ensemble
from .spectral import SpectralSummary, spectral_summary


def _print_kv(key: str, value) -> None:
    print(f"{key} = {_fmt_cell(value) if value is not None else 'undefined'}")


def _summary_from_args(args) -> tuple[SpectralSummary, float]:
    """Spectral summary and dispersion either from a graph file or from
    explicit extremes."""
    if args.graph is not None:
        graph = read_graph(args.graph)
        summary = spectral_summary(laplacian_split(graph))
        return summary, max_cod(graph)
    missing = [f for f in ("lambda2", "lambdaN") if getattr(args, f) is None]
    if missing:
        raise ValueError(
            "give either --graph or explicit extremes (--lambda2, --lambdaN); "
            f"missing {', '.join('--' + m for m in missing)}"
        )
    summary = SpectralSummary.from_extremes(args.lambda2, args.lambdaN, args.tau)
    return summary, args.cod


def _cmd_margin(args) -> int:
    summary, cod = _summary_from_args(args)
    params = DynamicsParams(a=args.a, delta=args.delta, g=args.g, omega2=args.omega2)
    rep = check_mss(summary, params, cod)
    _print_kv("lambda2", summary.lambda2)
    _print_kv("lambdaN", summary.lambdaN)
    _print_kv("tau", summary.tau)
    _print_kv("cod", cod)
    _print_kv("a0", rep.a0)
    _print_kv("lambda_sup", rep.lambda_sup)
    _print_kv("hat_a", rep.hat_a)
    _print_kv("sigma_eff_sq", rep.sigma_eff_sq)
    _print_kv("alpha0_sq", rep.alpha0_sq)
    _print_kv("lhs", rep.lhs)
    _print_kv("rho_SM", rep.rho_SM)
    _print_kv("feasible", rep.feasible)
    return 0


def _cmd_optimal_gain(args) -> int:
    summary, cod = _summary_from_args(args)
    g_star, rho = optimal_gain(summary, args.a, args.delta, cod)
    _print_kv("lambda2", summary.lambda2)
    _print_kv("lambdaN", summary.lambdaN)
    _print_kv("tau", summary.tau)
    _print_kv("cod", cod)
    _print_kv("g_star", g_star)
    _print_kv("rho_SM", rho)
    _print_kv("feasible", rho is not None)
    if summary.lambdaN != summary.lambda2:
        g_e, alpha_common = saddle_gain(summary, args.a, args.delta, cod)
        _print_kv("g_saddle", g_e)
        _print_kv("alpha0_sq_saddle", alpha_common)
    return 0


def _resolve_spec(args, name: str) -> ExperimentSpec:
    spec = load_spec(args.config, name) if args.config else default_spec(name)
    if args.seed is not None:
        spec = rebase_seeds(spec, args.seed)
    fixed = dict(spec.fixed)
    changed = False
    for key, flag in (("runs", "runs"), ("horizon", "horizon"), ("threads", "threads")):
        value = getattr(args, flag, None)
        if value is not None and key in fixed:
            fixed[key] = value
            changed = True
    if changed:
        spec = ExperimentSpec(spec.name, spec.grids, fixed, spec.seeds, spec.out_dir)
    return spec


def _report_validation(table: SweepTable) -> int:
    cols = {c: i for i, c in enumerate(table.columns)}
    failures = 0
    for row in table.rows:
        label = row[cols["case"]]
        status = row[cols["status"]]
        rho = row[cols["rho_SM"]]
        if status == "info":
            growth = row[cols["decay_ratio"]]
            diverged = row[cols["diverged_runs"]]
            detail = "infeasible"
            if growth is not None:
                detail += f", error ratio {_fmt_cell(growth)} after probe"
            if diverged:
                detail += f", {diverged} run(s) diverged"
            print(f"case {label}: info ({detail})")
            continue
        beta = row[cols["fitted_beta"]]
        ratio = row[cols["floor_ratio"]]
        print(
            f"case {label}: {status} (rho_SM {_fmt_cell(rho)}, "
            f"beta {_fmt_cell(beta)}, floor ratio {_fmt_cell(ratio)})"
        )
        if status != "pass":
            failures += 1
    if failures:
        print(f"{failures} validation case(s) failed", file=sys.stderr)
        return 3
    return 0


def _cmd_sweep(args) -> int:
    spec = _resolve_spec(args, args.experiment)
    out_dir = args.out or spec.out_dir or "results"
    table, paths = run_experiment(spec, out_dir)
    for p in paths:
        print(f"wrote {p}")
    if spec.name == "validate_mc":
        return _report_validation(table)
    return 0


def _cmd_validate(args) -> int:
    args.experiment = "validate_mc"
    return _cmd_sweep(args)


def _cmd_simulate(args) -> int:
    graph = read_graph(args.graph)
    params = DynamicsParams(a=args.a, delta=args.delta, g=args.g, omega2=args.omega2)
    cfg = SimConfig(
        graph=graph,
        params=params,
        phi=NonlinearityKind(args.phi, args.delta),
        horizon=args.horizon if args.horizon is not None else 2000,
        n_runs=args.runs if args.runs is not None else 100,
        rng_seed=args.seed if args.seed is not None else 0,
        xi_distribution=args.xi,
        initial_spread=args.spread,
    )
    result = run_ensemble(cfg, threads=args.threads if args.threads is not None else 1)
    rep = check_mss(spectral_summary(laplacian_split(graph)), params, max_cod(graph))
    _print_kv("rho_SM", rep.rho_SM)
    _print_kv("feasible", rep.feasible)
    _print_kv("e0", result.mse_mean[0])
    _print_kv("mse_final", result.mse_mean[-1])
    _print_kv("fitted_beta", result.fitted_beta)
    _print_kv("fitted_floor", result.fitted_floor)
    _print_kv("diverged_runs", result.diverged_runs)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        t = np.arange(result.mse_mean.size)
        table = SweepTable(
            columns=("t", "mse_mean", "mse_p95"),
            rows=tuple(
                (int(ti), float(m), float(p))
                for ti, m, p in zip(t, result.mse_mean, result.mse_p95)
            ),
            provenance=(
                ("experiment", "simulate"),
                ("graph", str(args.graph)),
                ("a", _fmt_cell(args.a)),
                ("delta", _fmt_cell(args.delta)),
                ("g", _fmt_cell(args.g)),
                ("omega2", _fmt_cell(args.omega2)),
                ("phi", args.phi),
                ("xi", args.xi),
                ("horizon", str(cfg.horizon)),
                ("runs", str(cfg.n_runs)),
                ("seed", str(cfg.rng_seed)),
                ("initial_spread", _fmt_cell(args.spread)),
            ),
        )
        path = out / "sim_trajectory.csv"
        write_table(table, path)
        print(f"wrote {path}")
    return 0


def _cmd_graph_gen(args) -> int:
    seed = args.seed if args.seed is not None else 0
    if args.topology == "ring":
        graph = ring_lattice(args.n, args.k)
    elif args.topology == "er":
        if args.p is None:
            raise ValueError("--p is required for the er topology")
        graph = erdos_renyi(args.n, args.p, seed)
    else:
        graph = watts_strogatz(args.n, args.k, args.p if args.p is not None else 0.0, seed)
    if args.fraction > 0:
        graph = designate_uncertain(graph, args.fraction, args.cod, seed + 1)
    write_graph(graph, args.out)
    print(
        f"wrote {args.out}: n={graph.n_nodes}, edges={len(graph.edges)}, "
        f"uncertain={len(graph.uncertain_edges)}"
    )
    return 0


def _cmd_graph_info(args) -> int:
    graph = read_graph(args.graph)
    degrees = graph.degrees()
    summary = spectral_summary(laplacian_split(graph))
    _print_kv("n", graph.n_nodes)
    _print_kv("edges", len(graph.edges))
    _print_kv("uncertain_edges", len(graph.uncertain_edges))
    _print_kv("degree_min", float(degrees.min()))
    _print_kv("degree_max", float(degrees.max()))
    _print_kv("lambda2", summary.lambda2)
    _print_kv("lambdaN", summary.lambdaN)
    _print_kv("lambda2_D", summary.lambda2_D)
    _print_kv("lambdaN_U", summary.lambdaN_U)
    _print_kv("tau", summary.tau)
    _print_kv("cod", max_cod(graph))
    return 0


def _add_dynamics_flags(p: argparse.ArgumentParser, with_gain: bool) -> None:
    p.add_argument("-a", type=float, required=True, help="linear rate a")
    p.add_argument("--delta", type=float, required=True, help="sector parameter delta")
    if with_gain:
        p.add_argument("-g", type=float, required=True, help="coupling gain")
        p.add_argument("--omega2", type=float, default=0.0, help="additive noise variance")


def _add_summary_source_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", type=str, default=None, help="graph file (see graph gen)")
    p.add_argument("--lambda2", type=float, default=None, help="algebraic connectivity")
    p.add_argument("--lambdaN", type=float, default=None, help="largest eigenvalue")
    p.add_argument("--tau", type=float, default=1.0, help="location factor (default 1)")
    p.add_argument("--cod", type=float, default=0.0, help="coefficient of dispersion")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syncmargin",
        description="Mean-square synchronization margins for stochastic networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_margin = sub.add_parser("margin", help="evaluate the synchronization margin")
    _add_summary_source_flags(p_margin)
    _add_dynamics_flags(p_margin, with_gain=True)
    p_margin.set_defaults(func=_cmd_margin)

    p_opt = sub.add_parser("optimal-gain", help="coupling gain maximizing robustness")
    _add_summary_source_flags(p_opt)
    _add_dynamics_flags(p_opt, with_gain=False)
    p_opt.set_defaults(func=_cmd_optimal_gain)

    p_sweep = sub.add_parser("sweep", help="run a named experiment")
    p_sweep.add_argument("experiment", choices=EXPERIMENT_NAMES)
    p_sweep.add_argument("--config", type=str, default=None, help="JSON spec overrides")
    p_sweep.add_argument("--seed", type=int, default=None, help="rebase master seeds")
    p_sweep.add_argument("--out", type=str, default=None, help="output directory")
    p_sweep.add_argument("--runs", type=int, default=None, help="ensemble size override")
    p_sweep.add_argument("--horizon", type=int, default=None, help="horizon override")
    p_sweep.add_argument("--threads", type=int, default=None, help="ensemble worker threads")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_val = sub.add_parser("validate", help="Monte Carlo validation of the margin")
    p_val.add_argument("--config", type=str, default=None, help="JSON spec overrides")
    p_val.add_argument("--seed", type=int, default=None, help="rebase master seeds")
    p_val.add_argument("--out", type=str, default=None, help="output directory")
    p_val.add_argument("--runs", type=int, default=None, help="ensemble size override")
    p_val.add_argument("--horizon", type=int, default=None, help="horizon override")
    p_val.add_argument("--threads", type=int, default=None, help="ensemble worker threads")
    p_val.set_defaults(func=_cmd_validate)

    p_sim = sub.add_parser("simulate", help="simulate one configuration")
    p_sim.add_argument("--graph", type=str, required=True, help="graph file")
    _add_dynamics_flags(p_sim, with_gain=True)
    p_sim.add_argument("--phi", choices=PHI_KINDS, default="scaled_tanh")
    p_sim.add_argument("--xi", choices=XI_DISTRIBUTIONS, default="gaussian")
    p_sim.add_argument("--runs", type=int, default=None, help="ensemble size (default 100)")
    p_sim.add_argument("--horizon", type=int, default=None, help="steps (default 2000)")
    p_sim.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    p_sim.add_argument("--spread", type=float, default=1.0, help="initial condition scale")
    p_sim.add_argument("--threads", type=int, default=None, help="ensemble worker threads")
    p_sim.add_argument("--out", type=str, default=None, help="write trajectory CSV here")
    p_sim.set_defaults(func=_cmd_simulate)

    p_graph = sub.add_parser("graph", help="generate or inspect graphs")
    graph_sub = p_graph.add_subparsers(dest="graph_command", required=True)

    p_gen = graph_sub.add_parser("gen", help="generate a graph file")
    p_gen.add_argument("--topology", choices=("ring", "er", "sw"), required=True)
    p_gen.add_argument("--n", type=int, required=True, help="node count")
    p_gen.add_argument("--k", type=int, default=2, help="ring/sw half-neighbourhood")
    p_gen.add_argument("--p", type=float, default=None, help="er edge / sw rewiring probability")
    p_gen.add_argument("--fraction", type=float, default=0.0, help="stochastic edge fraction")
    p_gen.add_argument("--cod", type=float, default=0.0, help="coefficient of dispersion")
    p_gen.add_argument("--seed", type=int, default=None, help="generation seed (default 0)")
    p_gen.add_argument("--out", type=str, required=True, help="output graph file")
    p_gen.set_defaults(func=_cmd_graph_gen)

    p_info = graph_sub.add_parser("info", help="summarize a graph file")
    p_info.add_argument("graph", type=str, help="graph file")
    p_info.set_defaults(func=_cmd_graph_info)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
