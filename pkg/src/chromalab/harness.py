"""Monte Carlo experiments over grids of edge probabilities.

Each trial samples its own graph from a seed derived from
``(master_seed, grid_index, trial_index)``, so results do not depend on the
number of worker processes or on the order in which trials finish; the
aggregation always runs in trial-index order.

"With high probability" has no finite-``n`` meaning, so it is read here as
empirical coverage (default 0.9) of the sampled values.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import os
import re
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import coloring, dense
from .graph import Graph, SampleSpec, complement, sample_gnp

__all__ = [
    "Statistic",
    "GridPoint",
    "ExperimentConfig",
    "ConcentrationSummary",
    "derive_seed",
    "empirical_median",
    "shortest_interval",
    "max_window_frequency",
    "summarize",
    "run_experiment",
    "experiment_csv",
    "CSV_COLUMNS",
    "subset_chi_max",
    "eq9_prediction",
    "regime_window",
    "derive_r",
    "typical_value_profile",
    "jump_profile",
    "conjecture_grid",
    "conjectured_exponent",
    "table_csv",
    "staircase_svg",
    "parse_config",
    "parse_decimal",
    "resolve_workers",
]

CSV_COLUMNS = (
    "grid_index", "n", "p", "phi", "statistic", "trials", "median",
    "interval_lo", "interval_hi", "interval_len", "std_dev", "extra_json",
)

# work cap for the optional Y counts inside sweeps; beyond it Y is reported missing
SWEEP_COUNT_LIMIT = 2_000_000


class Statistic(str, enum.Enum):
    CHI_UPPER_SPARSE = "CHI_UPPER_SPARSE"
    CHI_UPPER_DENSE = "CHI_UPPER_DENSE"
    N_MINUS_M = "N_MINUS_M"
    X1 = "X1"
    CLIQUE_PARTITION_CHI = "CLIQUE_PARTITION_CHI"
    SUBSET_CHI_MAX = "SUBSET_CHI_MAX"


@dataclass(frozen=True)
class GridPoint:
    """One edge probability in the three interchangeable forms.

    The form the grid was given in is kept verbatim; the other two are
    derived from it through ``phi = n (1 - p)``.
    """

    p: float
    q: float
    phi: float

    @classmethod
    def of(cls, n: int, kind: str, value: float) -> "GridPoint":
        if kind == "p":
            return cls(value, 1.0 - value, n * (1.0 - value))
        if kind == "q":
            return cls(1.0 - value, value, n * value)
        if kind == "phi":
            return cls(1.0 - value / n, value / n, value)
        raise ValueError(f"unknown grid kind {kind!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    grid: tuple[float, ...]
    statistic: Statistic
    grid_kind: str = "p"
    trials: int = 100
    omega: float = 3.0
    gamma: float = 0.5
    coverage: float = 0.9
    master_seed: int = 0
    subset_samples: int = 20
    i_max: int = 6
    r: int | None = None
    workers: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "statistic", Statistic(self.statistic))
        object.__setattr__(self, "grid", tuple(float(x) for x in self.grid))
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.grid:
            raise ValueError("the grid must be nonempty")
        if not 0.0 < self.coverage < 1.0:
            raise ValueError("coverage must lie in (0, 1)")
        if not 0 <= self.master_seed < 1 << 64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        for point in self.points():
            if not 0.0 <= point.p <= 1.0:
                raise ValueError(f"grid value gives p={point.p} outside [0, 1]")

    def points(self) -> list[GridPoint]:
        return [GridPoint.of(self.n, self.grid_kind, v) for v in self.grid]


@dataclass(frozen=True)
class ConcentrationSummary:
    values: tuple[int, ...]
    median_Lambda: int
    shortest_interval: tuple[int, int]
    interval_length: int
    std_dev: float
    subset_bound_Gamma: int | None = None
    extra: dict = field(default_factory=dict)


def derive_seed(master_seed: int, grid_index: int, trial_index: int) -> int:
    state = np.random.SeedSequence([master_seed, grid_index, trial_index]).generate_state(
        1, np.uint64
    )
    return int(state[0])


def empirical_median(values: Sequence[int]) -> int:
    """Smallest ``v`` with empirical ``P(X <= v) >= 1/2``."""
    ordered = sorted(values)
    if not ordered:
        raise ValueError("no values")
    return ordered[math.ceil(len(ordered) / 2) - 1]


def _needed(count: int, coverage: float) -> int:
    return max(1, math.ceil(Fraction(str(coverage)) * count))


def shortest_interval(values: Sequence[int], coverage: float) -> tuple[int, int]:
    """Shortest integer interval holding at least ``coverage`` of ``values``;
    ties go to the smallest lower end."""
    ordered = sorted(values)
    if not ordered:
        raise ValueError("no values")
    k = _needed(len(ordered), coverage)
    best = None
    for i in range(len(ordered) - k + 1):
        lo, hi = ordered[i], ordered[i + k - 1]
        if best is None or hi - lo < best[1] - best[0]:
            best = (lo, hi)
    return best


def max_window_frequency(values: Sequence[int], length: int) -> float:
    """Largest fraction of ``values`` inside any integer window of ``length`` values."""
    ordered = sorted(values)
    if not ordered or length < 1:
        return 0.0
    best = j = 0
    for i, lo in enumerate(ordered):
        while j < len(ordered) and ordered[j] <= lo + length - 1:
            j += 1
        best = max(best, j - i)
    return best / len(ordered)


def summarize(values: Iterable[int], coverage: float = 0.9, *, gamma_bound: int | None = None,
              extra: dict | None = None) -> ConcentrationSummary:
    vals = tuple(sorted(int(v) for v in values))
    lo, hi = shortest_interval(vals, coverage)
    return ConcentrationSummary(
        values=vals,
        median_Lambda=empirical_median(vals),
        shortest_interval=(lo, hi),
        interval_length=hi - lo + 1,
        std_dev=statistics.pstdev(vals) if len(vals) > 1 else 0.0,
        subset_bound_Gamma=gamma_bound,
        extra=dict(extra or {}),
    )


def resolve_workers(explicit: int | None = None, configured: int | None = None) -> int:
    """Worker count: explicit argument, then ``CHROMALAB_THREADS``, then the
    config value, then the number of CPUs."""
    if explicit is not None:
        chosen = explicit
    elif os.environ.get("CHROMALAB_THREADS"):
        chosen = int(os.environ["CHROMALAB_THREADS"])
    elif configured is not None:
        chosen = configured
    else:
        chosen = os.cpu_count() or 1
    if chosen < 1:
        raise ValueError(f"worker count must be positive, got {chosen}")
    return chosen


def _fan_out(func: Callable, tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks, chunksize=chunk))


# -- single trials ---------------------------------------------------------

def _sample(n: int, p: float, master_seed: int, grid_index: int, trial_index: int) -> Graph:
    seed = derive_seed(master_seed, grid_index, trial_index)
    return sample_gnp(SampleSpec(n, p, seed, trial_index))


def derive_r(n: int, q: float) -> int:
    """The ``r`` whose window ``n^(-2/r) < q < n^(-2/(r+1))`` holds ``q``."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"q={q} does not determine r; set r explicitly")
    return max(1, math.floor(2.0 * math.log(n) / math.log(1.0 / q)))


def _optional_y(g: Graph, start: int, i_max: int) -> tuple[int | None, bool]:
    try:
        counts, exact = dense.independent_set_counts(g, start, i_max, limit=SWEEP_COUNT_LIMIT)
    except dense.CountInfeasible:
        return None, False
    return sum(i * x for i, x in counts.items()), exact


def _trial(task) -> tuple[int, dict]:
    cfg, grid_index, trial_index = task
    point = cfg.points()[grid_index]
    n = cfg.n
    g = _sample(n, point.p, cfg.master_seed, grid_index, trial_index)
    stat = cfg.statistic
    if stat in (Statistic.CHI_UPPER_SPARSE, Statistic.CHI_UPPER_DENSE, Statistic.SUBSET_CHI_MAX):
        params = coloring.RegimeParams.derive(n, point.p, cfg.omega, cfg.gamma)
    if stat is Statistic.CHI_UPPER_SPARSE:
        if params.regime_tag is coloring.Regime.DENSE:
            raise coloring.RegimeError(f"p={point.p} exceeds gamma={cfg.gamma}; use CHI_UPPER_DENSE")
        if params.regime_tag is coloring.Regime.SPARSE_LARGE_ZP:
            c = coloring.sparse_two_phase(g, range(n), 4.0 * params.u)
        else:
            c = coloring.degeneracy_coloring(g)
        return c.num_colors, {"phase_colors": list(c.phases)}
    if stat is Statistic.CHI_UPPER_DENSE:
        if params.regime_tag is not coloring.Regime.DENSE:
            raise coloring.RegimeError(f"p={point.p} is not above gamma={cfg.gamma}")
        c = coloring.dense_two_phase(g, range(n), params.k, params.m)
        return c.num_colors, {"phase_colors": list(c.phases)}
    if stat is Statistic.N_MINUS_M:
        M = dense.max_matching(complement(g))
        Y, exact = _optional_y(g, 3, cfg.i_max)
        return n - M, {"M": M, "Y": Y, "y_exact": exact}
    if stat is Statistic.X1:
        return dense.component_split(complement(g))[2], {}
    if stat is Statistic.CLIQUE_PARTITION_CHI:
        r = cfg.r if cfg.r is not None else derive_r(n, point.q)
        c = coloring.clique_partition_color(g, r)
        return c.num_colors, {"r": r, "extracted": c.info["extracted"]}
    if stat is Statistic.SUBSET_CHI_MAX:
        seed = derive_seed(cfg.master_seed, grid_index, trial_index)
        return subset_chi_max(g, params.z, cfg.subset_samples, params, seed=seed), {}
    raise ValueError(f"unknown statistic {stat}")


def _aggregate_extra(extras: list[dict]) -> dict:
    out: dict = {}
    keys = sorted({k for e in extras for k in e})
    for key in keys:
        vals = [e.get(key) for e in extras]
        nums = [v for v in vals if isinstance(v, (int, float)) and not isinstance(v, bool)]
        flags = [v for v in vals if isinstance(v, bool)]
        if flags and len(flags) == len(vals):
            out[f"{key}_fraction"] = sum(flags) / len(flags)
        elif nums:
            out[f"{key}_mean"] = sum(nums) / len(nums)
            if len(nums) < len(vals):
                out[f"{key}_missing"] = len(vals) - len(nums)
        elif key == "phase_colors":
            width = max(len(v) for v in vals)
            out["phase_colors_mean"] = [
                sum(v[i] for v in vals if len(v) > i) / len(vals) for i in range(width)
            ]
    return out


def run_experiment(cfg: ExperimentConfig, workers: int | None = None) -> list[ConcentrationSummary]:
    """Run every trial of every grid point; one summary per grid point."""
    points = cfg.points()
    if cfg.statistic is Statistic.CLIQUE_PARTITION_CHI and cfg.r is None:
        for pt in points:
            derive_r(cfg.n, pt.q)
    tasks = [(cfg, gi, t) for gi in range(len(points)) for t in range(cfg.trials)]
    results = _fan_out(_trial, tasks, resolve_workers(workers, cfg.workers))
    out = []
    for gi in range(len(points)):
        chunk = results[gi * cfg.trials:(gi + 1) * cfg.trials]
        values = [v for v, _ in chunk]
        gamma_bound = max(values) if cfg.statistic is Statistic.SUBSET_CHI_MAX else None
        out.append(summarize(values, cfg.coverage, gamma_bound=gamma_bound,
                             extra=_aggregate_extra([e for _, e in chunk])))
    return out


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def experiment_csv(cfg: ExperimentConfig, summaries: Sequence[ConcentrationSummary]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for gi, (pt, s) in enumerate(zip(cfg.points(), summaries)):
        extra = dict(s.extra)
        if s.subset_bound_Gamma is not None:
            extra["Gamma"] = s.subset_bound_Gamma
        w.writerow([
            gi, cfg.n, _fmt(pt.p), _fmt(pt.phi), cfg.statistic.value, cfg.trials,
            s.median_Lambda, s.shortest_interval[0], s.shortest_interval[1],
            s.interval_length, _fmt(float(s.std_dev)),
            json.dumps(extra, sort_keys=True, separators=(",", ":")),
        ])
    return buf.getvalue()


# -- subset colouring bound ------------------------------------------------

def subset_chi_max(g: Graph, z: float, samples: int, params: coloring.RegimeParams,
                   seed: int = 0) -> int:
    """Largest colour count of the regime procedure over random ``floor(z)``-subsets.

    Subsets are drawn one after another from a stream seeded by ``seed``, so
    a run with more samples sees a superset of the subsets of a shorter run.
    """
    size = math.floor(z)
    if size < 1 or samples < 1:
        return 0
    if size > g.n:
        raise ValueError(f"subset size {size} exceeds n={g.n}")
    rng = np.random.Generator(np.random.Philox(key=np.random.SeedSequence([seed, 1]).generate_state(2, np.uint64)))
    best = 0
    for _ in range(samples):
        subset = np.sort(rng.choice(g.n, size=size, replace=False)).tolist()
        best = max(best, coloring.color_by_regime(g, subset, params).num_colors)
    return best


# -- typical value in the very dense windows ------------------------------

def eq9_prediction(n: int, p: float) -> float:
    """``n / floor(2 log_{1/(1-p)}(n p))``."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    denom = math.floor(2.0 * math.log(n * p) / -math.log1p(-p))
    if denom < 1:
        raise ValueError(f"floor(2 log_(1/(1-p)) (np)) = {denom} at n={n}, p={p}")
    return n / denom


def regime_window(n: int, r: int) -> tuple[float, float]:
    """Open interval ``(n^(-2/r), n^(-2/(r+1)))`` of ``q`` values for ``r``."""
    return n ** (-2.0 / r), n ** (-2.0 / (r + 1))


def conjecture_grid(n: int, r: int, points: int, margin: float = 0.05) -> list[float]:
    """``q`` values log-spaced across the window of ``r``, kept ``margin``
    (as a fraction of the exponent range) away from both ends."""
    lo, hi = (-2.0 / r, -2.0 / (r + 1))
    span = hi - lo
    xs = np.linspace(lo + margin * span, hi - margin * span, points)
    return [float(n ** x) for x in xs]


def conjectured_exponent(x: float) -> float:
    """Exponent ``y`` of the conjectured interval length ``n^y`` given ``n^2 q = n^x``.

    The length scale is ``sqrt(mu_{r+1})``; on the window of ``r`` this rises
    linearly from 0 to 1/2.
    """
    if not 0.0 < x < 2.0:
        raise ValueError("x must lie in (0, 2)")
    r = math.floor(2.0 / (2.0 - x))
    return (r + 1) / 2.0 * (1.0 + r * (x - 2.0) / 2.0)


def _typical_trial(task):
    n, q, r, master_seed, gi, t, i_max = task
    g = _sample(n, 1.0 - q, master_seed, gi, t)
    c = coloring.clique_partition_color(g, r)
    counts, exact = dense.independent_set_counts(g, r + 1, i_max)
    Y = sum(i * x for i, x in counts.items())
    return c.num_colors, Y, exact


def typical_value_profile(n: int, r: int, q_points: Sequence[float], trials: int, *,
                          master_seed: int = 0, i_max: int | None = None,
                          workers: int | None = None) -> list[dict]:
    """Clique-partition colour counts against ``n/r`` and the lower bound
    ``(n - Y)/r``, with ``Y = sum_{i > r} i X_i`` counted exactly.

    ``trials=0`` gives the formula columns only.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    lo, hi = regime_window(n, r)
    for q in q_points:
        if not lo < q < hi:
            raise ValueError(f"q={q} outside the window ({lo}, {hi}) for r={r}")
    i_max = r + 2 if i_max is None else i_max
    tasks = [(n, q, r, master_seed, gi, t, i_max)
             for gi, q in enumerate(q_points) for t in range(trials)]
    results = _fan_out(_typical_trial, tasks, resolve_workers(workers))
    rows = []
    for gi, q in enumerate(q_points):
        p = 1.0 - q
        row = {
            "grid_index": gi, "n": n, "r": r, "q": q, "p": p,
            "n_over_r": n / r,
            "eq9_prediction": eq9_prediction(n, p),
            "mu_r1": dense.mu_formula(n, p, r),
            "sqrt_mu_r1": math.sqrt(dense.mu_formula(n, p, r)),
            "trials": trials,
        }
        chunk = results[gi * trials:(gi + 1) * trials]
        if chunk:
            colors = [c for c, _, _ in chunk]
            ys = [y for _, y, _ in chunk]
            lower = [(n - y) / r for y in ys]
            row.update({
                "mean_colors": statistics.fmean(colors),
                "colors_ratio": statistics.fmean(colors) / (n / r),
                "mean_Y": statistics.fmean(ys),
                "mean_lower": statistics.fmean(lower),
                "lower_ratio": statistics.fmean(lower) / (n / r),
                "min_lower_ratio": min(lower) / (n / r),
                "y_certified_fraction": sum(e for _, _, e in chunk) / len(chunk),
            })
        rows.append(row)
    return rows


# -- concentration jump ----------------------------------------------------

def _jump_trial(task):
    n, p, master_seed, gi, t, i_max = task
    g = _sample(n, p, master_seed, gi, t)
    comp = complement(g)
    M = dense.max_matching(comp)
    X1 = dense.component_split(comp)[2]
    Y, exact = _optional_y(g, 3, i_max)
    return n - M, X1, Y, exact


def jump_profile(n: int, phi_points: Sequence[float], trials: int, *, master_seed: int = 0,
                 coverage: float = 0.9, i_max: int = 4, window_d: float = 0.5,
                 workers: int | None = None) -> list[dict]:
    """Spread of ``n - M`` across ``phi = n(1-p)`` next to the predicted scales.

    ``window`` is ``floor(window_d * n sqrt(q) e^(-qn))`` and
    ``max_window_freq`` the largest share of trials inside any window of
    that many values.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    pts = [GridPoint.of(n, "phi", float(phi)) for phi in phi_points]
    tasks = [(n, pt.p, master_seed, gi, t, i_max)
             for gi, pt in enumerate(pts) for t in range(trials)]
    results = _fan_out(_jump_trial, tasks, resolve_workers(workers))
    rows = []
    for gi, pt in enumerate(pts):
        chunk = results[gi * trials:(gi + 1) * trials]
        nm = [a for a, _, _, _ in chunk]
        x1 = [b for _, b, _, _ in chunk]
        ys = [y for _, _, y, _ in chunk if y is not None]
        s = summarize(nm, coverage)
        lam0, lam1 = dense.lambda_forms(n, pt.q)
        scale = n * math.sqrt(pt.q) * math.exp(-pt.q * n)
        window = math.floor(window_d * scale)
        rows.append({
            "grid_index": gi, "n": n, "phi": pt.phi, "q": pt.q, "p": pt.p, "trials": trials,
            "median_n_minus_M": s.median_Lambda,
            "interval_lo": s.shortest_interval[0], "interval_hi": s.shortest_interval[1],
            "interval_len": s.interval_length,
            "std_n_minus_M": s.std_dev,
            "mean_X1": statistics.fmean(x1),
            "std_X1": statistics.pstdev(x1) if len(x1) > 1 else 0.0,
            "lambda0": lam0, "lambda1": lam1, "sqrt_lambda1": math.sqrt(lam1),
            "fluctuation_scale": scale,
            "mu2": dense.mu_formula(n, pt.p, 1), "mu3": dense.mu_formula(n, pt.p, 2),
            "mean_Y": statistics.fmean(ys) if ys else None,
            "y_certified_fraction": sum(e for _, _, _, e in chunk) / len(chunk),
            "window": window,
            "max_window_freq": max_window_frequency(nm, window) if window >= 1 else None,
        })
    return rows


def table_csv(rows: Sequence[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    cols = list(rows[0])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow(["" if row.get(c) is None else _fmt(row.get(c)) for c in cols])
    return buf.getvalue()


def staircase_svg(series: dict[str, Sequence[tuple[float, float]]], *, width: int = 480,
                  height: int = 240, steps: Sequence[str] = ()) -> str:
    """Minimal SVG of named ``(x, y)`` series; names in ``steps`` draw as staircases."""
    pts = [xy for s in series.values() for xy in s]
    if not pts:
        raise ValueError("nothing to plot")
    xs, ys = [x for x, _ in pts], [y for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0
    pad = 30

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
    ]
    for i, (name, s) in enumerate(series.items()):
        s = sorted(s)
        coords = []
        for j, (x, y) in enumerate(s):
            if name in steps and j:
                coords.append(f"{sx(x):.2f},{sy(s[j - 1][1]):.2f}")
            coords.append(f"{sx(x):.2f},{sy(y):.2f}")
        colour = palette[i % len(palette)]
        parts.append(f'<polyline fill="none" stroke="{colour}" points="{" ".join(coords)}"/>')
        parts.append(f'<text x="{width - pad}" y="{pad + 14 * i}" text-anchor="end" '
                     f'fill="{colour}" font-size="11">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# -- config files ----------------------------------------------------------

_DECIMAL = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")

_INT_KEYS = {"n", "trials", "master_seed", "subset_samples", "i_max", "r", "workers"}
_FLOAT_KEYS = {"omega", "gamma", "coverage"}
_GRID_KEYS = {"p_grid": "p", "q_grid": "q", "phi_grid": "phi"}


def parse_decimal(text: str) -> float:
    """Parse a plain decimal or scientific literal; reject anything else."""
    s = text.strip()
    if not _DECIMAL.fullmatch(s):
        raise ValueError(f"not a decimal number: {text!r}")
    value = float(s)
    if not math.isfinite(value):
        raise ValueError(f"number out of range: {text!r}")
    return value


def parse_int(text: str) -> int:
    s = text.strip()
    if not re.fullmatch(r"[+-]?\d+", s):
        raise ValueError(f"not an integer: {text!r}")
    return int(s)


def parse_config(text: str) -> ExperimentConfig:
    """Read ``key = value`` lines (``#`` starts a comment).

    Keys: ``n``, ``statistic``, exactly one of ``p_grid`` / ``q_grid`` /
    ``phi_grid`` (comma-separated), and optionally ``trials``, ``omega``,
    ``gamma``, ``coverage``, ``master_seed``, ``subset_samples``, ``i_max``,
    ``r`` and ``workers``.
    """
    kwargs: dict = {}
    grids = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in kwargs or (key in _GRID_KEYS and grids):
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                kwargs[key] = parse_int(value)
            elif key in _FLOAT_KEYS:
                kwargs[key] = parse_decimal(value)
            elif key in _GRID_KEYS:
                grids.append(key)
                kwargs["grid_kind"] = _GRID_KEYS[key]
                kwargs["grid"] = tuple(parse_decimal(v) for v in value.split(","))
            elif key == "statistic":
                kwargs[key] = Statistic(value.upper())
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    for required in ("n", "statistic"):
        if required not in kwargs:
            raise ValueError(f"missing required key {required!r}")
    if not grids:
        raise ValueError("one of p_grid, q_grid or phi_grid is required")
    return ExperimentConfig(**kwargs)
