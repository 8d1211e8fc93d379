"""``chromalab`` command line.

Exit codes: 0 on success, 1 when the inputs violate a precondition of the
requested computation (the message names it), 2 on a usage error.
Results go to stdout (or ``--out``); ``color --explain`` and error messages
go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import sys

from . import __version__, coloring, dense, harness, kernels, oracle
from .graph import Graph, SampleSpec, format_dimacs, parse_dimacs, sample_gnp

DOMAIN_ERRORS = (
    ValueError,
    coloring.RegimeError,
    dense.CountInfeasible,
    oracle.BudgetExceeded,
    OSError,
)

METHODS = (
    "regime",
    "degeneracy",
    "first-fit",
    "sparse-two-phase",
    "direct-degeneracy",
    "dense-two-phase",
    "clique-partition",
)


def _decimal(text: str) -> float:
    try:
        return harness.parse_decimal(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _integer(text: str) -> int:
    try:
        return harness.parse_int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid(text: str) -> tuple[float, ...]:
    try:
        return tuple(harness.parse_decimal(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed(text: str) -> int:
    value = _integer(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_graph(args) -> Graph:
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            return parse_dimacs(fh.read())
    if args.n is None or args.p is None:
        raise ValueError("give --file, or --n and --p to sample a graph")
    return sample_gnp(SampleSpec(args.n, args.p, args.seed))


# -- subcommands -----------------------------------------------------------

def cmd_sample(args) -> int:
    spec = SampleSpec(args.n, args.p, args.seed, args.trial)
    _emit(args, format_dimacs(sample_gnp(spec)))
    return 0


def _run_method(g: Graph, args) -> coloring.Coloring:
    method = args.method
    if method == "degeneracy":
        return coloring.degeneracy_coloring(g)
    if method == "first-fit":
        return coloring.greedy_sequential_coloring(g)
    if method == "clique-partition":
        if args.r is None:
            raise ValueError("clique-partition needs --r")
        return coloring.clique_partition_color(g, args.r, seed=args.seed)
    if args.p is None:
        raise ValueError(f"method {method!r} needs --p to derive its parameters")
    regime = {
        "sparse-two-phase": coloring.Regime.SPARSE_LARGE_ZP,
        "direct-degeneracy": coloring.Regime.SPARSE_SMALL_ZP,
        "dense-two-phase": coloring.Regime.DENSE,
    }.get(method)
    params = coloring.RegimeParams.derive(g.n, args.p, args.omega, args.gamma, regime=regime)
    everything = range(g.n)
    if method == "sparse-two-phase":
        # the whole vertex set, with the procedure's 4u remainder threshold
        return coloring.sparse_two_phase(g, everything, 4.0 * params.u)
    if method == "dense-two-phase":
        return coloring.dense_two_phase(g, everything, params.k, params.m)
    if params.regime_tag is coloring.Regime.SPARSE_LARGE_ZP:
        return coloring.sparse_two_phase(g, everything, 4.0 * params.u)
    if params.regime_tag is coloring.Regime.SPARSE_SMALL_ZP:
        return coloring.degeneracy_coloring(g)
    return coloring.dense_two_phase(g, everything, params.k, params.m)


def cmd_color(args) -> int:
    g = _load_graph(args)
    c = _run_method(g, args)
    if c.violations(g):
        raise RuntimeError("internal error: colouring is not proper")
    if args.explain:
        print(f"method={args.method} n={g.n} edges={g.edge_count} colors={c.num_colors}",
              file=sys.stderr)
        if c.phases:
            print(f"phase_colors={list(c.phases)}", file=sys.stderr)
        for key in sorted(c.info):
            print(f"{key}={c.info[key]}", file=sys.stderr)
    _emit(args, c.to_csv())
    return 0


def _point(args) -> harness.GridPoint:
    given = [(k, getattr(args, k)) for k in ("p", "q", "phi") if getattr(args, k) is not None]
    if len(given) != 1:
        raise ValueError("give exactly one of --p, --q, --phi")
    kind, value = given[0]
    point = harness.GridPoint.of(args.n, kind, value)
    if not 0.0 <= point.p <= 1.0:
        raise ValueError(f"--{kind} {value} gives p={point.p} outside [0, 1]")
    return point


def cmd_dense_analyze(args) -> int:
    point = _point(args)
    if args.i_max < 3:
        raise ValueError("--i-max must be at least 3")
    specs = [SampleSpec(args.n, point.p, harness.derive_seed(args.seed, 0, t))
             for t in range(args.trials)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["seed", "n", "p", "M", "X1", "X2", "Y_components", "chi_lower", "chi_upper"])
    for spec in specs:
        g = sample_gnp(spec)
        stats = dense.dense_stats(g, args.i_max)
        bounds = dense.chi_sandwich(g, args.i_max)
        w.writerow([spec.seed, args.n, repr(point.p), stats.M, stats.X1_isolated,
                    stats.X2_bigmatch, stats.Y_components, bounds.lower, bounds.upper])
    _emit(args, buf.getvalue())
    return 0


def cmd_oracle(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        g = parse_dimacs(fh.read())
    budget = oracle.OracleBudget(max_vertices=args.max_vertices, time_limit=args.time_limit)
    chi = oracle.exact_chromatic(g, budget)
    alpha = oracle.exact_max_independent_set(g, budget)
    matching = dense.max_matching(g)
    _emit(args, f"chi={chi} alpha={alpha} matching={matching}\n")
    return 0


_CONFIG_FLAGS = ("trials", "omega", "gamma", "coverage", "master_seed", "subset_samples",
                 "i_max", "r")


def _experiment_config(args) -> harness.ExperimentConfig:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = harness.parse_config(fh.read())
        overrides = {k: getattr(args, k) for k in _CONFIG_FLAGS if getattr(args, k) is not None}
        return dataclasses.replace(cfg, **overrides) if overrides else cfg
    grids = [(kind, getattr(args, f"{kind}_grid")) for kind in ("p", "q", "phi")
             if getattr(args, f"{kind}_grid") is not None]
    if args.n is None or args.statistic is None or len(grids) != 1:
        raise ValueError("give --config, or --n, --statistic and one of --p-grid/--q-grid/--phi-grid")
    kind, grid = grids[0]
    kwargs = {k: getattr(args, k) for k in _CONFIG_FLAGS if getattr(args, k) is not None}
    return harness.ExperimentConfig(n=args.n, grid=grid, grid_kind=kind,
                                    statistic=args.statistic, **kwargs)


def cmd_experiment(args) -> int:
    cfg = _experiment_config(args)
    summaries = harness.run_experiment(cfg, workers=args.workers)
    _emit(args, harness.experiment_csv(cfg, summaries))
    return 0


def cmd_jump_profile(args) -> int:
    rows = harness.jump_profile(args.n, args.phi_grid, args.trials, master_seed=args.seed,
                                coverage=args.coverage, i_max=args.i_max,
                                window_d=args.window_d, workers=args.workers)
    _emit(args, harness.table_csv(rows))
    if args.svg:
        import math

        def exponent(value):
            return math.log(value) / math.log(args.n) if value and value > 0 else 0.0

        series = {
            "interval_len": [(exponent(args.n**2 * r["q"]), exponent(r["interval_len"]))
                             for r in rows if r["q"] > 0],
            "conjecture": [(x / 50, harness.conjectured_exponent(x / 50)) for x in range(1, 100)],
        }
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(harness.staircase_svg(series, steps=("conjecture",)))
    return 0


def cmd_typical_value(args) -> int:
    if args.q_grid is not None and args.conjecture is not None:
        raise ValueError("give either --q-grid or --conjecture, not both")
    if args.conjecture is not None:
        q_points = harness.conjecture_grid(args.n, args.r, args.conjecture)
    elif args.q_grid is not None:
        q_points = list(args.q_grid)
    else:
        raise ValueError("give --q-grid or --conjecture")
    rows = harness.typical_value_profile(args.n, args.r, q_points, args.trials,
                                         master_seed=args.seed, i_max=args.i_max,
                                         workers=args.workers)
    _emit(args, harness.table_csv(rows))
    return 0


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chromalab",
        description="Chromatic number of binomial random graphs: samplers, colourings, "
                    "dense-case matching bounds, exact oracles and Monte Carlo sweeps.",
    )
    parser.add_argument("--version", action="version",
                        version=f"chromalab {__version__} ({kernels.BUILD_ID})")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text, description):
        sp = sub.add_parser(name, help=help_text, description=description)
        sp.set_defaults(func=func)
        return sp

    def out_flag(sp):
        sp.add_argument("--out", help="write the result here instead of stdout")

    sp = add("sample", cmd_sample, "sample G(n, p) as DIMACS",
             "Sample G(n, p) with each of the C(n, 2) pairs present independently with "
             "probability p, and print it in DIMACS edge format.")
    sp.add_argument("--n", type=_integer, required=True)
    sp.add_argument("--p", type=_decimal, required=True)
    sp.add_argument("--seed", type=_seed, required=True)
    sp.add_argument("--trial", type=_integer, default=0, help="trial index mixed into the seed")
    out_flag(sp)

    sp = add("color", cmd_color, "colour a graph, CSV vertex,color",
             "Colour a graph read from --file or sampled from --n/--p/--seed. Methods: "
             "degeneracy (min-degree peeling, at most degeneracy+1 colours); first-fit; "
             "sparse-two-phase (greedy independent classes until 4u vertices remain, then "
             "degeneracy); direct-degeneracy; dense-two-phase (classes of size >= k until "
             "n^(1/3) remain, then singletons); clique-partition (disjoint independent r-sets); "
             "regime (choose from p, omega and gamma).  --explain reports the phases on stderr.")
    sp.add_argument("--file")
    sp.add_argument("--n", type=_integer)
    sp.add_argument("--p", type=_decimal)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--method", choices=METHODS, default="regime")
    sp.add_argument("--omega", type=_decimal, default=3.0)
    sp.add_argument("--gamma", type=_decimal, default=0.5)
    sp.add_argument("--r", type=_integer)
    sp.add_argument("--explain", action="store_true")
    out_flag(sp)

    sp = add("dense-analyze", cmd_dense_analyze, "matching bounds for very dense G(n, p)",
             "Per trial: maximum matching M of the complement, isolated complement edges X1, "
             "matching X2 of the complement's components with >= 3 vertices, vertices "
             "Y_components in components with <= 2 vertices, and the bounds "
             "n - M - Y <= chi <= n - M with Y = sum_{i>=3} i X_i.  The seed column "
             "reproduces the trial's graph through `sample --seed`.")
    sp.add_argument("--n", type=_integer, required=True)
    sp.add_argument("--p", type=_decimal)
    sp.add_argument("--q", type=_decimal)
    sp.add_argument("--phi", type=_decimal, help="n (1 - p)")
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--trials", type=_integer, default=1)
    sp.add_argument("--i-max", dest="i_max", type=_integer, default=6)
    out_flag(sp)

    sp = add("oracle", cmd_oracle, "exact chi, alpha and matching of a small graph",
             "Exact chromatic number (branch and bound), independence number and maximum "
             "matching of the graph in --file.  Prints `chi=.. alpha=.. matching=..`.")
    sp.add_argument("--file", required=True)
    sp.add_argument("--max-vertices", dest="max_vertices", type=_integer, default=60)
    sp.add_argument("--time-limit", dest="time_limit", type=_decimal)
    out_flag(sp)

    sp = add("experiment", cmd_experiment, "Monte Carlo sweep over a probability grid",
             "Run seeded trials per grid point and summarise the chosen statistic by its "
             "median, shortest interval holding a `coverage` share of trials, and standard "
             "deviation.  Settings come from --config (key = value lines) or flags; flags "
             "override the file.")
    sp.add_argument("--config")
    sp.add_argument("--n", type=_integer)
    sp.add_argument("--p-grid", dest="p_grid", type=_grid)
    sp.add_argument("--q-grid", dest="q_grid", type=_grid)
    sp.add_argument("--phi-grid", dest="phi_grid", type=_grid)
    sp.add_argument("--statistic", type=str.upper,
                    choices=[s.value for s in harness.Statistic])
    sp.add_argument("--trials", type=_integer)
    sp.add_argument("--omega", type=_decimal)
    sp.add_argument("--gamma", type=_decimal)
    sp.add_argument("--coverage", type=_decimal)
    sp.add_argument("--master-seed", "--seed", dest="master_seed", type=_seed)
    sp.add_argument("--subset-samples", dest="subset_samples", type=_integer)
    sp.add_argument("--i-max", dest="i_max", type=_integer)
    sp.add_argument("--r", type=_integer)
    sp.add_argument("--workers", type=_integer)
    out_flag(sp)

    sp = add("jump-profile", cmd_jump_profile, "spread of n - M across phi = n(1 - p)",
             "Per phi: spread of n - M (M the complement's maximum matching) next to "
             "lambda_1 = C(n,2) q (1-q)^(2n-4), the scale n sqrt(q) e^(-qn), and the expected "
             "independent-set counts mu_2, mu_3.  --svg draws the measured interval exponent "
             "over the conjectured staircase.")
    sp.add_argument("--n", type=_integer, required=True)
    sp.add_argument("--phi-grid", dest="phi_grid", type=_grid, required=True)
    sp.add_argument("--trials", type=_integer, default=100)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--coverage", type=_decimal, default=0.9)
    sp.add_argument("--i-max", dest="i_max", type=_integer, default=4)
    sp.add_argument("--window-d", dest="window_d", type=_decimal, default=0.5)
    sp.add_argument("--workers", type=_integer)
    sp.add_argument("--svg")
    out_flag(sp)

    sp = add("typical-value", cmd_typical_value, "clique-partition colouring against n/r",
             "For q = 1 - p strictly inside (n^(-2/r), n^(-2/(r+1))): mean clique-partition "
             "colour count, the lower bound (n - Y)/r with Y = sum_{i>r} i X_i counted "
             "exactly, and the prediction n / floor(2 log_{1/(1-p)}(np)).  --conjecture K "
             "spreads K points across the window.  --trials 0 prints the formula columns only.")
    sp.add_argument("--n", type=_integer, required=True)
    sp.add_argument("--r", type=_integer, required=True)
    sp.add_argument("--q-grid", dest="q_grid", type=_grid)
    sp.add_argument("--conjecture", type=_integer, metavar="K")
    sp.add_argument("--trials", type=_integer, default=10)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--i-max", dest="i_max", type=_integer)
    sp.add_argument("--workers", type=_integer)
    out_flag(sp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        print(f"chromalab {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
