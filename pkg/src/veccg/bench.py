"""Benchmark harness, performance profiles, and the command-line tool.

A sweep runs every (method, problem, start) combination with identical
seeded starting points across methods and writes one CSV row per run.
Profiles follow the Dolan-More construction: per-run performance ratios
r = t / min(t) and the cumulative distribution rho(tau) of ratios below
tau, with failed runs assigned an infinite ratio.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import os
import sys
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import problems as prob_mod
from .directions import METHODS
from .linesearch import LineSearchParams
from .solver import CONVERGED, LINESEARCHES, RunRecord, SolverOptions, solve

CSV_HEADER = ("problem,method,linesearch,start_idx,seed,status,iters,"
              "f_evals,j_evals,wall_time_s,theta_final,restarts")

MEASUREMENTS = ("iters", "time", "fevals", "jevals")
_MEASURE_COLUMN = {"iters": "iters", "time": "wall_time_s",
                   "fevals": "f_evals", "jevals": "j_evals"}

#: The method set compared in the experiments: MPRP with standard Wolfe
#: and with Armijo, against PRP/PRP+/FR under strong Wolfe.
DEFAULT_METHODS = ("mprp:wolfe", "mprp:armijo", "prp:strong-wolfe",
                   "prp+:strong-wolfe", "fr:strong-wolfe")

FAIL = float("inf")


class BenchConfigError(ValueError):
    """Invalid benchmark configuration."""


@dataclass(frozen=True)
class MethodSpec:
    """One solver column: direction rule plus line search."""

    method: str
    linesearch: str

    @classmethod
    def parse(cls, text: str) -> "MethodSpec":
        method, sep, ls = text.partition(":")
        if not sep:
            ls = "wolfe"
        if method not in METHODS:
            raise BenchConfigError(f"unknown direction method {method!r}")
        if ls not in LINESEARCHES:
            raise BenchConfigError(f"unknown line search {ls!r}")
        return cls(method, ls)

    @property
    def label(self) -> str:
        return f"{self.method}:{self.linesearch}"


@dataclass
class BenchConfig:
    methods: list[MethodSpec]
    problems: list[str]
    starts_per_problem: int = 200
    seed: int = 0
    output_dir: Path = Path("bench_out")
    measurement: str = "iters"
    mu: float = 2.4
    max_iters: int = 5000
    tol_crit: float | None = None
    ls_params: LineSearchParams = field(default_factory=LineSearchParams)
    keep_trace: bool = False
    jobs: int = 1

    def __post_init__(self):
        if not self.methods:
            raise BenchConfigError("need at least one method")
        if self.starts_per_problem < 1:
            raise BenchConfigError("starts_per_problem must be >= 1")
        if self.measurement not in MEASUREMENTS:
            raise BenchConfigError(f"unknown measurement {self.measurement!r}")
        for name in self.problems:
            if name not in prob_mod.problem_names():
                raise BenchConfigError(f"unknown problem {name!r}")
        self.output_dir = Path(self.output_dir)


def start_point(problem: prob_mod.VectorProblem, seed: int, start_idx: int):
    """Seeded initial point, identical across methods by construction."""
    key = zlib.crc32(problem.name.encode())
    rng = np.random.default_rng([seed, start_idx, key])
    return problem.sample_start(rng)


def _solver_options(cfg: BenchConfig, spec: MethodSpec) -> SolverOptions:
    kwargs = dict(method=spec.method, linesearch=spec.linesearch, mu=cfg.mu,
                  max_iters=cfg.max_iters, ls_params=cfg.ls_params,
                  keep_trace=cfg.keep_trace)
    if cfg.tol_crit is not None:
        kwargs["tol_crit"] = cfg.tol_crit
    return SolverOptions(**kwargs)


def _run_task(task):
    cfg, spec, problem_name, start_idx = task
    problem = prob_mod.get_problem(problem_name)
    x0 = start_point(problem, cfg.seed, start_idx)
    rec = solve(problem, x0, _solver_options(cfg, spec))
    return (problem_name, spec.method, spec.linesearch, start_idx, cfg.seed,
            rec.status, rec.iters, rec.f_evals, rec.j_evals,
            f"{rec.wall_time:.6f}", f"{rec.theta_final:.12e}", rec.restarts)


def run_suite(cfg: BenchConfig) -> Path:
    """Execute the sweep and write results.csv; returns its path."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    out_path = cfg.output_dir / "results.csv"
    tasks = [(cfg, spec, name, i)
             for name in cfg.problems
             for spec in cfg.methods
             for i in range(cfg.starts_per_problem)]
    if cfg.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_run_task, tasks, chunksize=8))
    else:
        rows = [_run_task(t) for t in tasks]
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    with open(out_path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        csv.writer(fh).writerows(rows)
    return out_path


# ---------------------------------------------------------------------------
# Performance profiles


@dataclass
class ProfileTable:
    """Performance matrix t[p, s]; infinity marks a failed run."""

    t: np.ndarray
    solver_names: list[str]
    problem_ids: list[str]

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.size == 0:
            raise BenchConfigError("empty performance table")
        finite = t[np.isfinite(t)]
        if np.any(finite <= 0.0):
            raise BenchConfigError("finite performance entries must be positive")
        self.t = t


def table_from_csv(path, measurement: str, aggregate: str | None = None) -> ProfileTable:
    """Build a ProfileTable from a results CSV.

    By default every (problem, start) run is one profile entry; with
    aggregate='median' the median measurement over the converged starts
    of each problem is used instead (failure if no start converged).
    """
    column = _MEASURE_COLUMN[measurement]
    with open(path, newline="") as fh:
        rows = sorted(csv.DictReader(fh),
                      key=lambda r: (r["problem"], r["method"],
                                     r["linesearch"], int(r["start_idx"])))
    if not rows:
        raise BenchConfigError(f"no data rows in {path}")
    solvers = sorted({f"{r['method']}:{r['linesearch']}" for r in rows})
    values: dict[tuple[str, str], list[float]] = {}
    for r in rows:
        solver = f"{r['method']}:{r['linesearch']}"
        if r["status"] == CONVERGED:
            t = float(r[column])
            if measurement != "time":
                t = max(t, 1.0)  # a zero-iteration run still did one unit of work
        else:
            t = FAIL
        if aggregate == "median":
            values.setdefault((r["problem"], solver), []).append(t)
        else:
            key = (f"{r['problem']}#{int(r['start_idx']):04d}", solver)
            values.setdefault(key, []).append(t)

    if aggregate == "median":
        entry = {k: (np.median([v for v in vs if np.isfinite(v)])
                     if any(np.isfinite(v) for v in vs) else FAIL)
                 for k, vs in values.items()}
    elif aggregate is None:
        entry = {k: vs[0] for k, vs in values.items()}
    else:
        raise BenchConfigError(f"unknown aggregate {aggregate!r}")

    pids = sorted({k[0] for k in entry})
    t = np.full((len(pids), len(solvers)), FAIL)
    for (pid, solver), val in entry.items():
        t[pids.index(pid), solvers.index(solver)] = val
    return ProfileTable(t, solvers, pids)


def performance_profile(table: ProfileTable) -> dict[str, list[tuple[float, float]]]:
    """Step-function breakpoints (tau, rho_s(tau)) per solver.

    Rows where every solver failed are dropped from the problem count.
    rho_s is nondecreasing and tends to each solver's solved fraction.
    """
    t = table.t
    usable = np.isfinite(t).any(axis=1)
    t = t[usable]
    if t.shape[0] == 0:
        raise BenchConfigError("every problem failed for every solver")
    n_problems = t.shape[0]
    mins = np.min(t, axis=1)
    ratios = t / mins[:, None]
    profiles = {}
    for j, name in enumerate(table.solver_names):
        r = np.sort(ratios[np.isfinite(ratios[:, j]), j])
        if r.size == 0:
            profiles[name] = [(1.0, 0.0)]
            continue
        taus, counts = np.unique(r, return_counts=True)
        rho = np.cumsum(counts) / n_problems
        pts = list(zip(taus.tolist(), rho.tolist()))
        if pts[0][0] > 1.0:
            pts.insert(0, (1.0, 0.0))
        profiles[name] = pts
    return profiles


def write_profile_tsv(profiles, path):
    with open(path, "w") as fh:
        for name, pts in profiles.items():
            fh.write(f"# solver\t{name}\n")
            for tau, rho in pts:
                fh.write(f"{tau!r}\t{rho!r}\n")


def read_profile_tsv(path) -> dict[str, list[tuple[float, float]]]:
    profiles: dict[str, list[tuple[float, float]]] = {}
    current = None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# solver\t"):
                current = line.split("\t", 1)[1]
                profiles[current] = []
            elif line:
                tau, rho = line.split("\t")
                profiles[current].append((float(tau), float(rho)))
    return profiles


def emit_profile_plot(profiles, measurement: str, path) -> Path:
    """Write an SVG step plot (log2 tau axis) plus a breakpoint TSV."""
    if not profiles:
        raise BenchConfigError("no profiles to plot")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    tau_max = max((pts[-1][0] for pts in profiles.values()), default=2.0)
    tau_max = max(tau_max * 1.05, 2.0)
    fig, ax = plt.subplots(figsize=(7, 5))
    for name, pts in profiles.items():
        taus = [p[0] for p in pts] + [tau_max]
        rhos = [p[1] for p in pts]
        rhos = rhos + [rhos[-1]]
        ax.step(taus, rhos, where="post", label=name)
    ax.set_xscale("log", base=2)
    ax.set_xlim(1.0, tau_max)
    ax.set_ylim(0.0, 1.02)
    ax.set_xlabel(r"performance ratio $\tau$ (log$_2$)")
    ax.set_ylabel(r"$\rho_s(\tau)$")
    ax.set_title(f"Performance profile: {measurement}")
    ax.legend(loc="lower right")
    right = ax.twinx()
    right.set_ylim(0.0, 1.02)
    finals = sorted({round(pts[-1][1], 3) for pts in profiles.values()})
    right.set_yticks(finals)
    right.set_ylabel("robustness (solved fraction)")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    write_profile_tsv(profiles, path.with_suffix(".tsv"))
    return path


# ---------------------------------------------------------------------------
# CLI


def _load_config_file(path) -> dict[str, str]:
    cfg = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise BenchConfigError(f"bad config line: {raw.rstrip()}")
            cfg[key.strip()] = value.strip()
    return cfg


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise BenchConfigError(f"expected a boolean, got {text!r}")


def _merged(args, file_cfg, key, cast, default):
    cli = getattr(args, key.replace("-", "_"), None)
    if cli is not None:
        return cli
    if key in file_cfg:
        return cast(file_cfg[key])
    return default


def _parse_problem_list(text: str) -> list[str]:
    if text == "all":
        return prob_mod.problem_names()
    return [p.strip() for p in text.split(",") if p.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="veccg",
        description="Conjugate gradient methods for vector optimization")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--rho", type=float, default=None)
        p.add_argument("--sigma", type=float, default=None)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--mu", type=float, default=None)
        p.add_argument("--max-iters", type=int, default=None)
        p.add_argument("--tol", type=float, default=None,
                       help="criticality tolerance on -theta")

    p_list = sub.add_parser("list", help="list problems and methods")

    p_solve = sub.add_parser("solve", help="run one problem and print the trace")
    p_solve.add_argument("--problem", required=True)
    p_solve.add_argument("--method", default="mprp", choices=METHODS)
    p_solve.add_argument("--linesearch", default="wolfe", choices=LINESEARCHES)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--start-idx", type=int, default=0)
    add_common(p_solve)

    p_run = sub.add_parser("run", help="benchmark sweep to a results CSV")
    p_run.add_argument("--config", default=None,
                       help="key = value file; command-line flags win")
    p_run.add_argument("--methods", default=None,
                       help="comma list of method[:linesearch] specs")
    p_run.add_argument("--problems", default=None, help="comma list or 'all'")
    p_run.add_argument("--starts", type=int, default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--jobs", type=int, default=None)
    p_run.add_argument("--trace", action="store_true", default=None)
    add_common(p_run)

    p_prof = sub.add_parser("profile", help="profiles + SVG from a results CSV")
    p_prof.add_argument("--in", dest="infile", required=True)
    p_prof.add_argument("--measure", default="iters", choices=MEASUREMENTS)
    p_prof.add_argument("--out", default=None, help="output directory")
    p_prof.add_argument("--aggregate", default=None, choices=["median"])
    return parser


def _ls_params(args, file_cfg) -> LineSearchParams:
    return LineSearchParams(
        rho=_merged(args, file_cfg, "rho", float, 1e-4),
        sigma=_merged(args, file_cfg, "sigma", float, 0.1),
        delta=_merged(args, file_cfg, "delta", float, 0.5),
    )


def _cmd_list(args) -> int:
    print("problems:")
    for p in prob_mod.suite():
        kind = "convex" if p.convex else "nonconvex"
        print(f"  {p.name:10s} n={p.n:<4d} m={p.m} {kind}")
    print("methods:", ", ".join(METHODS))
    print("line searches:", ", ".join(LINESEARCHES))
    return 0


def _cmd_solve(args) -> int:
    problem = prob_mod.get_problem(args.problem)
    empty: dict[str, str] = {}
    opts = SolverOptions(
        method=args.method, linesearch=args.linesearch,
        mu=_merged(args, empty, "mu", float, 2.4),
        max_iters=_merged(args, empty, "max-iters", int, 5000),
        tol_crit=args.tol if args.tol is not None else SolverOptions().tol_crit,
        ls_params=_ls_params(args, empty))
    x0 = start_point(problem, args.seed, args.start_idx)
    rec = solve(problem, x0, opts)
    print(f"# {problem.name} method={args.method} linesearch={args.linesearch}")
    print("k\t||v||\ttheta\tbeta\talpha\th(x,d)\tphi_decrease")
    for row in rec.trace or []:
        print(f"{row.k}\t{row.v_norm:.3e}\t{row.theta:.3e}\t{row.beta:.3e}"
              f"\t{row.alpha:.3e}\t{row.h_d:.3e}\t{row.phi_decrease:.3e}")
    print(f"status={rec.status} iters={rec.iters} f_evals={rec.f_evals} "
          f"j_evals={rec.j_evals} restarts={rec.restarts} "
          f"theta_final={rec.theta_final:.6e} wall_time={rec.wall_time:.3f}s")
    return 0 if rec.status == CONVERGED else 1


def _cmd_run(args) -> int:
    file_cfg = _load_config_file(args.config) if args.config else {}
    methods_text = _merged(args, file_cfg, "methods", str,
                           ",".join(DEFAULT_METHODS))
    problems_text = _merged(args, file_cfg, "problems", str, "all")
    cfg = BenchConfig(
        methods=[MethodSpec.parse(s) for s in methods_text.split(",") if s],
        problems=_parse_problem_list(problems_text),
        starts_per_problem=_merged(args, file_cfg, "starts", int, 200),
        seed=_merged(args, file_cfg, "seed", int, 0),
        output_dir=Path(_merged(args, file_cfg, "out", str, "bench_out")),
        mu=_merged(args, file_cfg, "mu", float, 2.4),
        max_iters=_merged(args, file_cfg, "max-iters", int, 5000),
        tol_crit=_merged(args, file_cfg, "tol", float, None),
        ls_params=_ls_params(args, file_cfg),
        keep_trace=_merged(args, file_cfg, "trace", _parse_bool, False),
        jobs=_merged(args, file_cfg, "jobs", int, os.cpu_count() or 1),
    )
    out = run_suite(cfg)
    print(f"wrote {out}")
    return 0


def _cmd_profile(args) -> int:
    out_dir = Path(args.out) if args.out else Path(args.infile).parent
    out_dir.mkdir(parents=True, exist_ok=True)
    table = table_from_csv(args.infile, args.measure, aggregate=args.aggregate)
    profiles = performance_profile(table)
    svg = emit_profile_plot(profiles, args.measure,
                            out_dir / f"profile_{args.measure}.svg")
    print(f"wrote {svg} and {svg.with_suffix('.tsv')}")
    return 0


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    handlers = {"list": _cmd_list, "solve": _cmd_solve,
                "run": _cmd_run, "profile": _cmd_profile}
    try:
        return handlers[args.command](args)
    except (BenchConfigError, KeyError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
