"""Named parameter sweeps and the Monte Carlo validation loop.

Each experiment is a pure function of an ExperimentSpec: same spec, same
seeds, same table. Tables are written as CSV with a provenance header so
a result file alone identifies the run that produced it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .graph import (
    GraphGenerationError,
    NetworkGraph,
    designate_uncertain,
    erdos_renyi,
    laplacian_split,
    ring_lattice,
    watts_strogatz,
)
from .margin import DynamicsParams, check_mss, optimal_gain
from .sim import NonlinearityKind, SimConfig, run_ensemble
from .spectral import SpectralSummary, ring_lattice_spectrum, spectral_summary

ARTIFACT_VERSION = "0.1.0"

EXPERIMENT_NAMES = (
    "tunnel_a",
    "tunnel_delta",
    "tunnel_slice",
    "nn_margin_vs_k",
    "nn_margin_vs_k_by_cod",
    "nn_margin_vs_k_by_gain",
    "er_sw_optimal_gain",
    "validate_mc",
)

SPECTRA_MODES = ("circulant", "jacobi", "both")

# Relative tolerance for the circulant-vs-Jacobi cross-check in nn sweeps.
SPECTRA_AGREEMENT_RTOL = 1e-8


@dataclass(frozen=True)
class GridRange:
    """Inclusive linear grid: count points from start to stop."""

    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"grid needs at least one point, got count={self.count}")
        if self.count > 1 and not self.stop > self.start:
            raise ValueError(
                f"grid with {self.count} points needs stop > start, "
                f"got [{self.start}, {self.stop}]"
            )

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def int_values(self) -> np.ndarray:
        vals = np.unique(np.rint(self.values()).astype(int))
        return vals


@dataclass(frozen=True)
class ExperimentSpec:
    """Fully resolved description of one experiment run.

    grids: swept variables, each a GridRange keyed by name.
    fixed: scalar parameters held constant (floats, ints, or mode strings).
    seeds: master seeds; sweeps that average over realizations use all of
    them, formula-only sweeps ignore them but record them anyway.
    """

    name: str
    grids: Mapping[str, GridRange]
    fixed: Mapping[str, float | int | str]
    seeds: tuple[int, ...]
    out_dir: str | None = None

    def __post_init__(self):
        if self.name not in EXPERIMENT_NAMES:
            raise ValueError(
                f"unknown experiment {self.name!r}, expected one of {EXPERIMENT_NAMES}"
            )
        if not self.seeds:
            raise ValueError("at least one seed is required")

    def grid(self, key: str) -> GridRange:
        try:
            return self.grids[key]
        except KeyError:
            raise ValueError(f"experiment {self.name!r} needs grid {key!r}") from None

    def fixed_value(self, key: str) -> float | int | str:
        try:
            return self.fixed[key]
        except KeyError:
            raise ValueError(f"experiment {self.name!r} needs fixed parameter {key!r}") from None


@dataclass(frozen=True)
class SweepTable:
    """Ordered result rows plus the provenance needed to reproduce them."""

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    provenance: tuple[tuple[str, str], ...]


def default_spec(name: str) -> ExperimentSpec:
    """Calibrated defaults for each named experiment."""
    if name == "tunnel_a":
        return ExperimentSpec(
            name=name,
            grids={
                "a": GridRange(1.0, 1.25, 26),
                "lam": GridRange(0.0, 250.0, 126),
                "cod": GridRange(0.0, 30.0, 7),
            },
            fixed={"delta": 2.0, "g": 0.01},
            seeds=(0,),
        )
    if name == "tunnel_delta":
        return ExperimentSpec(
            name=name,
            grids={
                "delta": GridRange(1.1, 6.0, 25),
                "lam": GridRange(0.0, 360.0, 121),
                "cod": GridRange(0.0, 30.0, 7),
            },
            fixed={"a": 1.125, "g": 0.01},
            seeds=(0,),
        )
    if name == "tunnel_slice":
        # the feasible window closes exactly at cod = 25 for these
        # parameters (the feasibility quadratic's discriminant vanishes),
        # so the grid reaches a little past it to show the pinch-off
        return ExperimentSpec(
            name=name,
            grids={
                "lam": GridRange(0.0, 225.0, 226),
                "cod": GridRange(0.0, 30.0, 61),
            },
            fixed={"a": 1.125, "delta": 2.0, "g": 0.01},
            seeds=(0,),
        )
    if name == "nn_margin_vs_k":
        return ExperimentSpec(
            name=name,
            grids={"k": GridRange(10, 490, 49)},
            fixed={
                "n": 1000,
                "a": 1.05,
                "delta": 2.0,
                "g": 0.001,
                "cod": 1.0,
                "fraction": 0.7,
                "spectra": "circulant",
            },
            seeds=(0,),
        )
    if name == "nn_margin_vs_k_by_cod":
        return ExperimentSpec(
            name=name,
            grids={"k": GridRange(10, 490, 49), "cod": GridRange(1.0, 25.0, 4)},
            fixed={
                "n": 1000,
                "a": 1.05,
                "delta": 2.0,
                "g": 0.001,
                "fraction": 0.7,
                "spectra": "circulant",
            },
            seeds=(0,),
        )
    if name == "nn_margin_vs_k_by_gain":
        return ExperimentSpec(
            name=name,
            grids={"k": GridRange(10, 490, 49), "g": GridRange(0.0005, 0.002, 4)},
            fixed={
                "n": 1000,
                "a": 1.05,
                "delta": 2.0,
                "cod": 10.0,
                "fraction": 0.7,
                "spectra": "circulant",
            },
            seeds=(0,),
        )
    if name == "er_sw_optimal_gain":
        return ExperimentSpec(
            name=name,
            grids={
                "p_er": GridRange(0.2, 1.0, 17),
                "p_sw": GridRange(0.0, 1.0, 21),
            },
            fixed={
                "n": 100,
                "a": 1.05,
                "delta": 4.0,
                "cod": 1.0,
                "fraction": 1.0,
                "sw_base_k": 18,
            },
            seeds=tuple(range(20)),
        )
    if name == "validate_mc":
        return ExperimentSpec(
            name=name,
            grids={},
            fixed={
                "runs": 100,
                "horizon": 5000,
                "floor_horizon": 1500,
                "omega2_lo": 1e-6,
                "omega2_ratio": 4.0,
                "threads": 1,
            },
            seeds=(0,),
        )
    raise ValueError(f"unknown experiment {name!r}, expected one of {EXPERIMENT_NAMES}")


def load_spec(path, name: str | None = None) -> ExperimentSpec:
    """Read an ExperimentSpec from a JSON config file.

    The file must name the experiment (or one is given explicitly); any
    field left out falls back to the named default. Grids are given as
    {"start": ..., "stop": ..., "count": ...} objects.
    """
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValueError(f"config {path} must be a JSON object")
    cfg_name = raw.get("name", name)
    if cfg_name is None:
        raise ValueError("config gives no experiment name and none was supplied")
    if name is not None and cfg_name != name:
        raise ValueError(f"config is for {cfg_name!r} but {name!r} was requested")
    base = default_spec(cfg_name)
    grids = dict(base.grids)
    for key, g in raw.get("grids", {}).items():
        if not isinstance(g, dict) or not {"start", "stop", "count"} <= set(g):
            raise ValueError(f"grid {key!r} must have start, stop and count")
        grids[key] = GridRange(float(g["start"]), float(g["stop"]), int(g["count"]))
    fixed = dict(base.fixed)
    for key, v in raw.get("fixed", {}).items():
        fixed[key] = v if isinstance(v, str) else float(v)
    seeds = base.seeds
    if "seeds" in raw:
        seeds = tuple(int(s) for s in raw["seeds"])
    return ExperimentSpec(
        name=cfg_name,
        grids=grids,
        fixed=fixed,
        seeds=seeds,
        out_dir=raw.get("out_dir", base.out_dir),
    )


def rebase_seeds(spec: ExperimentSpec, base: int) -> ExperimentSpec:
    """Shift the seed list to start at base, preserving its length."""
    seeds = tuple(base + i for i in range(len(spec.seeds)))
    return ExperimentSpec(spec.name, spec.grids, spec.fixed, seeds, spec.out_dir)


def _derived_seed(*parts: int) -> int:
    """Deterministic child seed from integer coordinates."""
    return int(np.random.SeedSequence(tuple(parts)).generate_state(1)[0])


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _provenance(spec: ExperimentSpec) -> tuple[tuple[str, str], ...]:
    items: list[tuple[str, str]] = [
        ("experiment", spec.name),
        ("artifact_version", ARTIFACT_VERSION),
        ("seeds", " ".join(str(s) for s in spec.seeds)),
    ]
    for key in sorted(spec.fixed):
        items.append((key, _fmt_cell(spec.fixed[key])))
    for key in sorted(spec.grids):
        g = spec.grids[key]
        items.append(
            (f"grid.{key}", f"{_fmt_cell(g.start)}:{_fmt_cell(g.stop)}:{g.count}")
        )
    return tuple(items)


def write_table(table: SweepTable, path) -> None:
    """CSV with '#'-prefixed provenance lines, then header, then rows.

    17 significant digits, LF endings, UTF-8. Undefined values are empty
    fields, never placeholder numbers.
    """
    lines = [f"# {key} = {value}" for key, value in table.provenance]
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_fmt_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_manifest(spec: ExperimentSpec, path, outputs: Sequence[str] = ()) -> None:
    """Plain-text record of the resolved spec; no timestamps, so reruns
    produce byte-identical manifests."""
    lines = [f"experiment = {spec.name}", f"artifact_version = {ARTIFACT_VERSION}"]
    lines.append(f"seeds = {' '.join(str(s) for s in spec.seeds)}")
    for key in sorted(spec.fixed):
        lines.append(f"fixed.{key} = {_fmt_cell(spec.fixed[key])}")
    for key in sorted(spec.grids):
        g = spec.grids[key]
        lines.append(
            f"grid.{key} = start {_fmt_cell(g.start)} stop {_fmt_cell(g.stop)} count {g.count}"
        )
    for out in outputs:
        lines.append(f"output = {out}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


# --------------------------------------------------------------------------
# formula-space sweeps (single abstract eigenvalue axis, tau = 1)


def sweep_tunnel(spec: ExperimentSpec) -> SweepTable:
    """Margin over a (parameter, lambda, cod) grid with lambda2 = lambdaN.

    The eigenvalue axis is abstract: every grid point is evaluated as if
    the graph had a single error mode at that lambda, with tau pinned to 1.
    Emits rho_SM (empty when undefined) and the feasibility flag.
    """
    if spec.name == "tunnel_a":
        swept, fixed_keys = ("a", "lam", "cod"), ("delta", "g")
    elif spec.name == "tunnel_delta":
        swept, fixed_keys = ("delta", "lam", "cod"), ("a", "g")
    elif spec.name == "tunnel_slice":
        swept, fixed_keys = ("lam", "cod"), ("a", "delta", "g")
    else:
        raise ValueError(f"{spec.name!r} is not a tunnel sweep")
    fixed = {k: float(spec.fixed_value(k)) for k in fixed_keys}
    axes = [spec.grid(k).values() for k in swept]
    rows = []
    for idx in np.ndindex(*(len(ax) for ax in axes)):
        point = dict(fixed)
        for key, ax, i in zip(swept, axes, idx):
            point[key] = float(ax[i])
        params = DynamicsParams(a=point["a"], delta=point["delta"], g=point["g"])
        summary = SpectralSummary.from_extremes(point["lam"], point["lam"], 1.0)
        rep = check_mss(summary, params, point["cod"])
        rows.append(tuple(point[k] for k in swept) + (rep.rho_SM, rep.feasible))
    return SweepTable(
        columns=tuple(swept) + ("rho_SM", "feasible"),
        rows=tuple(rows),
        provenance=_provenance(spec),
    )


def _nn_row_summary(
    n: int, k: int, fraction: float, cod: float, spectra: str, seed: int
) -> SpectralSummary:
    """Spectral summary for one ring-lattice row, by the requested route.

    circulant: closed-form extremes, tau taken as 1 (the designation is
    irrelevant to the formula then). jacobi: build the graph, designate
    stochastic edges, eigensolve, realized tau. both: jacobi summary
    cross-checked against the closed form; disagreement is a bug, not data.
    """
    if spectra not in SPECTRA_MODES:
        raise ValueError(f"unknown spectra mode {spectra!r}, expected one of {SPECTRA_MODES}")
    lam_circ = ring_lattice_spectrum(n, k)
    if spectra == "circulant":
        return SpectralSummary.from_extremes(float(lam_circ[1]), float(lam_circ[-1]), 1.0)
    graph = ring_lattice(n, k)
    graph = designate_uncertain(graph, fraction, cod, _derived_seed(seed, k))
    summary = spectral_summary(laplacian_split(graph))
    if spectra == "both":
        tol = SPECTRA_AGREEMENT_RTOL * float(lam_circ[-1])
        if (
            abs(summary.lambda2 - lam_circ[1]) > tol
            or abs(summary.lambdaN - lam_circ[-1]) > tol
        ):
            raise RuntimeError(
                f"eigensolver disagrees with circulant formula at n={n}, k={k}: "
                f"({summary.lambda2}, {summary.lambdaN}) vs "
                f"({lam_circ[1]}, {lam_circ[-1]})"
            )
    return summary


def sweep_nn(spec: ExperimentSpec) -> SweepTable:
    """Margin against neighbour count on ring lattices, optionally crossed
    with a second axis (cod or g)."""
    if spec.name == "nn_margin_vs_k":
        outer_key = None
    elif spec.name == "nn_margin_vs_k_by_cod":
        outer_key = "cod"
    elif spec.name == "nn_margin_vs_k_by_gain":
        outer_key = "g"
    else:
        raise ValueError(f"{spec.name!r} is not a nearest-neighbour sweep")
    n = int(spec.fixed_value("n"))
    fraction = float(spec.fixed_value("fraction"))
    spectra = str(spec.fixed_value("spectra"))
    base = {
        "a": float(spec.fixed_value("a")),
        "delta": float(spec.fixed_value("delta")),
    }
    for key in ("g", "cod"):
        if key != outer_key:
            base[key] = float(spec.fixed_value(key))
    ks = spec.grid("k").int_values()
    k_max = (n - 1) // 2
    if ks[0] < 1 or ks[-1] > k_max:
        raise ValueError(f"k grid must stay within [1, {k_max}] for n={n}")
    outer = spec.grid(outer_key).values() if outer_key else [None]
    seed = spec.seeds[0]
    rows = []
    for ov in outer:
        point = dict(base)
        if outer_key:
            point[outer_key] = float(ov)
        params = DynamicsParams(a=point["a"], delta=point["delta"], g=point["g"])
        for k in ks:
            summary = _nn_row_summary(n, int(k), fraction, point["cod"], spectra, seed)
            rep = check_mss(summary, params, point["cod"])
            prefix = (point[outer_key],) if outer_key else ()
            rows.append(
                prefix
                + (
                    int(k),
                    summary.lambda2,
                    summary.lambdaN,
                    summary.tau,
                    rep.rho_SM,
                    rep.feasible,
                )
            )
    cols = ("k", "lambda2", "lambdaN", "tau", "rho_SM", "feasible")
    if outer_key:
        cols = (outer_key,) + cols
    return SweepTable(columns=cols, rows=tuple(rows), provenance=_provenance(spec))


# --------------------------------------------------------------------------
# random-graph optimal-gain comparison


def sweep_er_sw(spec: ExperimentSpec) -> SweepTable:
    """Seed-averaged optimal gain for Erdos-Renyi vs small-world graphs.

    Per (topology, p): n_seeds independent realizations, each designated,
    eigensolved, and pushed through the optimal-gain formula; the table
    carries means and standard errors so crossover detection can weigh
    realization noise.
    """
    n = int(spec.fixed_value("n"))
    a = float(spec.fixed_value("a"))
    delta = float(spec.fixed_value("delta"))
    cod = float(spec.fixed_value("cod"))
    fraction = float(spec.fixed_value("fraction"))
    sw_base_k = int(spec.fixed_value("sw_base_k"))
    topologies = (
        ("er", 0, spec.grid("p_er").values()),
        ("sw", 1, spec.grid("p_sw").values()),
    )
    rows = []
    for topo, topo_idx, ps in topologies:
        for p in ps:
            p = float(p)
            p_key = int(round(p * 1000))
            g_stars: list[float] = []
            rhos: list[float] = []
            failures = 0
            for s in spec.seeds:
                graph_seed = _derived_seed(s, topo_idx, p_key, 0)
                mark_seed = _derived_seed(s, topo_idx, p_key, 1)
                try:
                    if topo == "er":
                        graph = erdos_renyi(n, p, graph_seed)
                    else:
                        graph = watts_strogatz(n, sw_base_k, p, graph_seed)
                except GraphGenerationError:
                    failures += 1
                    continue
                graph = designate_uncertain(graph, fraction, cod, mark_seed)
                summary = spectral_summary(laplacian_split(graph))
                g_star, rho = optimal_gain(summary, a, delta, cod)
                g_stars.append(g_star)
                if rho is not None:
                    rhos.append(rho)
            rows.append(
                (topo, n, p, len(spec.seeds), len(g_stars))
                + _mean_se(g_stars)
                + _mean_se(rhos)
                + (len(rhos), failures)
            )
    return SweepTable(
        columns=(
            "topology",
            "n",
            "p",
            "n_seeds",
            "n_ok",
            "g_star_mean",
            "g_star_se",
            "rho_sm_mean",
            "rho_sm_se",
            "n_feasible",
            "n_failed",
        ),
        rows=tuple(rows),
        provenance=_provenance(spec),
    )


def _mean_se(values: Sequence[float]) -> tuple[float | None, float | None]:
    if not values:
        return None, None
    arr = np.asarray(values, dtype=float)
    if arr.size == 1 or np.all(arr == arr[0]):
        # identical samples: report the common value exactly, not the
        # summation roundoff of averaging it with itself
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size))


def crossover_interval(table: SweepTable) -> tuple[float, float] | None:
    """First p interval where the ER-minus-SW mean optimal gain changes sign.

    Compares the two curves on their common p points (both present and
    non-empty); returns None when no sign change occurs.
    """
    cols = {c: i for i, c in enumerate(table.columns)}
    curves: dict[str, dict[float, float]] = {"er": {}, "sw": {}}
    for row in table.rows:
        mean = row[cols["g_star_mean"]]
        if mean is not None:
            curves[row[cols["topology"]]][round(float(row[cols["p"]]), 9)] = float(mean)
    common = sorted(set(curves["er"]) & set(curves["sw"]))
    diffs = [(p, curves["er"][p] - curves["sw"][p]) for p in common]
    for (p0, d0), (p1, d1) in zip(diffs, diffs[1:]):
        if d0 == 0.0:
            return p0, p0
        if d1 == 0.0:
            return p1, p1
        if (d0 > 0) != (d1 > 0):
            return p0, p1
    return None


# --------------------------------------------------------------------------
# Monte Carlo validation


@dataclass(frozen=True)
class ValidationCase:
    """One theory-vs-simulation comparison point.

    gain_scale multiplies the formula's optimal gain; gain_abs, when set,
    overrides it with an absolute coupling value (used to place cases
    outside the feasible region on purpose).
    """

    label: str
    topology: str  # ring | er | sw
    n: int
    degree: int = 0  # ring/sw half-neighbourhood
    p: float = 0.0  # er edge probability / sw rewiring probability
    a: float = 1.05
    delta: float = 2.0
    cod: float = 0.0
    fraction: float = 0.0
    gain_scale: float = 1.0
    gain_abs: float | None = None


def default_validation_cases() -> tuple[ValidationCase, ...]:
    """Ten feasible cases spanning topology, sector and dispersion settings,
    plus three deliberately infeasible ones reported descriptively.

    Gains sit off the exact optimum (scale 0.5 to 1.1) so the transient is
    long enough for a decay fit but still well inside the feasible region.
    Of the infeasible cases, the overdriven one genuinely diverges while
    the other two synchronize anyway: the condition is sufficient, not
    necessary, and no assertion is attached to them.
    """
    return (
        ValidationCase(
            "ring50_clean", "ring", 50, degree=10, a=1.05, delta=2.0,
            gain_scale=0.75,
        ),
        ValidationCase(
            "ring50_cod1", "ring", 50, degree=12, a=1.1, delta=3.0, cod=1.0,
            fraction=0.5, gain_scale=0.85,
        ),
        ValidationCase(
            "ring100_cod1", "ring", 100, degree=20, a=1.05, delta=2.0, cod=1.0,
            fraction=0.7, gain_scale=0.9,
        ),
        ValidationCase(
            "ring100_cod2", "ring", 100, degree=24, a=1.2, delta=4.0, cod=2.0,
            fraction=0.7, gain_scale=0.85,
        ),
        ValidationCase(
            "ring100_tight_sector", "ring", 100, degree=20, a=1.05, delta=1.5,
            cod=0.5, fraction=0.7, gain_scale=1.0,
        ),
        ValidationCase(
            "er50_sparse", "er", 50, p=0.3, a=1.05, delta=2.0, cod=1.0,
            fraction=0.7, gain_scale=0.7,
        ),
        ValidationCase(
            "er50_dense", "er", 50, p=0.9, a=1.25, delta=6.0, cod=2.0,
            fraction=0.3, gain_scale=0.5,
        ),
        ValidationCase(
            "er100_all_uncertain", "er", 100, p=0.2, a=1.1, delta=2.5, cod=3.0,
            fraction=1.0, gain_scale=0.8,
        ),
        ValidationCase(
            "sw50", "sw", 50, degree=5, p=0.2, a=1.05, delta=4.0, cod=1.0,
            fraction=0.5, gain_scale=0.7,
        ),
        ValidationCase(
            "sw100_moderate_cod", "sw", 100, degree=10, p=0.3, a=1.1, delta=3.0,
            cod=2.0, fraction=0.7, gain_scale=1.1,
        ),
        ValidationCase(
            "undercoupled_gain", "ring", 50, degree=2, a=1.05, delta=2.0,
            gain_abs=1e-5,
        ),
        ValidationCase(
            "overdriven_gain", "ring", 50, degree=4, a=1.05, delta=2.0,
            gain_abs=0.5,
        ),
        ValidationCase(
            "dispersion_blowup", "ring", 100, degree=5, a=1.05, delta=2.0,
            cod=80.0, fraction=0.7, gain_scale=1.0,
        ),
    )


def _build_case_graph(case: ValidationCase, seed: int) -> NetworkGraph:
    graph_seed = _derived_seed(seed, 0)
    mark_seed = _derived_seed(seed, 1)
    if case.topology == "ring":
        graph = ring_lattice(case.n, case.degree)
    elif case.topology == "er":
        graph = erdos_renyi(case.n, case.p, graph_seed)
    elif case.topology == "sw":
        graph = watts_strogatz(case.n, case.degree, case.p, graph_seed)
    else:
        raise ValueError(f"unknown topology {case.topology!r}")
    return designate_uncertain(graph, case.fraction, case.cod, mark_seed)


def validate_mc(spec: ExperimentSpec) -> SweepTable:
    """Close the loop: every feasible case must decay in simulation.

    Feasible cases (margin defined and positive) run three ensembles: a
    noiseless one checked for decay below 1e-10 of the initial error, and
    two noisy ones whose steady-state floors are compared for linearity in
    omega2. Infeasible cases are simulated briefly and reported without
    any assertion; the condition is sufficient, not necessary.
    """
    runs = int(spec.fixed_value("runs"))
    horizon = int(spec.fixed_value("horizon"))
    floor_horizon = int(spec.fixed_value("floor_horizon"))
    omega2_lo = float(spec.fixed_value("omega2_lo"))
    omega2_ratio = float(spec.fixed_value("omega2_ratio"))
    threads = int(spec.fixed.get("threads", 1))
    master = spec.seeds[0]
    rows = []
    for case_idx, case in enumerate(default_validation_cases()):
        case_seed = _derived_seed(master, 100 + case_idx)
        graph = _build_case_graph(case, case_seed)
        summary = spectral_summary(laplacian_split(graph))
        if case.gain_abs is not None:
            g = case.gain_abs
        else:
            g_star, _ = optimal_gain(summary, case.a, case.delta, case.cod)
            g = case.gain_scale * g_star
        params = DynamicsParams(a=case.a, delta=case.delta, g=g)
        rep = check_mss(summary, params, case.cod)
        phi = NonlinearityKind("scaled_tanh", case.delta)

        def ensemble(omega2: float, steps: int, tag: int):
            cfg = SimConfig(
                graph=graph,
                params=DynamicsParams(a=case.a, delta=case.delta, g=g, omega2=omega2),
                phi=phi,
                horizon=steps,
                n_runs=runs,
                rng_seed=_derived_seed(case_seed, tag),
            )
            return run_ensemble(cfg, threads=threads)

        base = (
            case.label,
            case.topology,
            case.n,
            case.a,
            case.delta,
            g,
            case.cod,
            case.fraction,
            summary.tau,
            rep.rho_SM,
            rep.feasible,
        )
        if rep.feasible:
            clean = ensemble(0.0, horizon, 0)
            e0 = float(clean.mse_mean[0])
            decay_ratio = float(np.nanmin(clean.mse_mean) / e0)
            decayed = decay_ratio < 1e-10
            beta_ok = clean.fitted_beta is not None and clean.fitted_beta < 1.0
            lo = ensemble(omega2_lo, floor_horizon, 1)
            hi = ensemble(omega2_lo * omega2_ratio, floor_horizon, 2)
            floor_ratio = (
                float(hi.fitted_floor / lo.fitted_floor) if lo.fitted_floor > 0 else None
            )
            floor_ok = (
                floor_ratio is not None
                and 0.5 * omega2_ratio <= floor_ratio <= 1.5 * omega2_ratio
            )
            status = "pass" if (decayed and beta_ok and floor_ok) else "fail"
            rows.append(
                base
                + (
                    decay_ratio,
                    decayed,
                    clean.fitted_beta,
                    lo.fitted_floor,
                    hi.fitted_floor,
                    floor_ratio,
                    floor_ok,
                    clean.diverged_runs + lo.diverged_runs + hi.diverged_runs,
                    status,
                )
            )
        else:
            # short descriptive run only: no claim is made off the
            # sufficient region, growth is simply recorded
            probe = ensemble(0.0, 200, 0)
            e0 = float(probe.mse_mean[0])
            finite = probe.mse_mean[np.isfinite(probe.mse_mean)]
            growth = float(finite[-1] / e0) if finite.size and e0 > 0 else None
            rows.append(
                base
                + (growth, None, probe.fitted_beta, None, None, None, None,
                   probe.diverged_runs, "info")
            )
    return SweepTable(
        columns=(
            "case",
            "topology",
            "n",
            "a",
            "delta",
            "g",
            "cod",
            "fraction",
            "tau",
            "rho_SM",
            "feasible",
            "decay_ratio",
            "decayed",
            "fitted_beta",
            "floor_lo",
            "floor_hi",
            "floor_ratio",
            "floor_ok",
            "diverged_runs",
            "status",
        ),
        rows=tuple(rows),
        provenance=_provenance(spec),
    )


RUNNERS: dict[str, Callable[[ExperimentSpec], SweepTable]] = {
    "tunnel_a": sweep_tunnel,
    "tunnel_delta": sweep_tunnel,
    "tunnel_slice": sweep_tunnel,
    "nn_margin_vs_k": sweep_nn,
    "nn_margin_vs_k_by_cod": sweep_nn,
    "nn_margin_vs_k_by_gain": sweep_nn,
    "er_sw_optimal_gain": sweep_er_sw,
    "validate_mc": validate_mc,
}


def run_experiment(spec: ExperimentSpec, out_dir) -> tuple[SweepTable, list[Path]]:
    """Execute the named experiment and write its CSV and manifest."""
    table = RUNNERS[spec.name](spec)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{spec.name}.csv"
    manifest_path = out / f"{spec.name}.manifest.txt"
    write_table(table, csv_path)
    write_manifest(spec, manifest_path, outputs=(csv_path.name,))
    return table, [csv_path, manifest_path]
