"""Configuration sweeps and the reporting pipeline: seeded batches of
simulations over networks x capacity exponents, cumulative-topple trend
fits, per-letter-grade summaries, and the two-level correlation table."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .capacity import capacities, validate_capacities
from .engine import SimulationConfig, simulate
from .errors import CapacityError, ConstantInputError
from .graphs import Graph
from .metrics import (
    betweenness_centrality,
    degree_centrality,
    eigenvector_centrality,
    group_measures,
    pearson,
)
from .rng import derive_seed
from .roster import Roster, build_fan, letter_grade


@dataclass(frozen=True)
class NetworkCase:
    """One network under sweep: a label, the graph, and (optionally) the
    roster carrying grades for the nodes, index-aligned with the graph."""

    label: str
    graph: Graph
    roster: Roster | None = None


def semester_networks(roster: Roster, include_full: bool = True) -> list[NetworkCase]:
    """One FAN per semester plus, by default, the combined 'full' network --
    the four-network layout the sweep protocol expects."""
    cases = []
    for semester in roster.semesters:
        sub = roster.subset_semester(semester)
        cases.append(NetworkCase(label=semester, graph=build_fan(sub), roster=sub))
    if include_full:
        cases.append(NetworkCase(label="full", graph=build_fan(roster), roster=roster))
    return cases


@dataclass(frozen=True)
class SweepConfig:
    networks: tuple[NetworkCase, ...]
    P_values: tuple[int, ...]
    K: object
    g: object
    X: int
    runs: int
    base_seed: int
    arithmetic: str = "double"
    keep_series: bool = False
    grade_bands: tuple[float, float, float] = (90.0, 80.0, 70.0)


@dataclass
class ConfigResult:
    """Aggregates for one (network, exponent) cell of the sweep."""

    label: str
    P: int
    runs: int
    grains: int
    mean_ntnt: np.ndarray
    sd_ntnt: np.ndarray
    topples: np.ndarray  # (runs, n) per-run per-node counts
    topple_mean: np.ndarray
    topple_sd: np.ndarray
    total_topples: int
    grade_stats: dict | None
    ntnt_runs: list[np.ndarray] | None


@dataclass
class SweepResult:
    configs: list[ConfigResult]
    total_grains: int
    total_topples: int


_WORKER_TEMPLATES: list[tuple[SimulationConfig, int]] | None = None


def _init_worker(templates) -> None:
    global _WORKER_TEMPLATES
    _WORKER_TEMPLATES = templates


def _run_work(item):
    ci, ri = item
    template, base_seed = _WORKER_TEMPLATES[ci]
    cfg = replace(template, seed=derive_seed(base_seed, ci, ri))
    result = simulate(cfg)
    return ci, ri, result.topples, result.ntnt_series, result.drops


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> SweepResult:
    """Run every (network, P, run) cell and aggregate.

    The seed of run j under config cell i (cells enumerate networks outer,
    P values inner) is derive_seed(base_seed, i, j), so results do not
    depend on execution order or on the number of worker processes. Every
    cell must pass capacity validation before any run starts.
    """
    if cfg.runs < 1:
        raise ValueError(f"runs must be >= 1, got {cfg.runs}")
    if not cfg.networks or not cfg.P_values:
        raise ValueError("sweep needs at least one network and one P value")

    cells: list[tuple[NetworkCase, int]] = [
        (case, P) for case in cfg.networks for P in cfg.P_values
    ]
    exact = cfg.arithmetic == "exact"
    templates = []
    for case, P in cells:
        k = capacities(case.graph, cfg.K, P, exact=exact)
        report = validate_capacities(case.graph, k, cfg.g)
        if not report.ok:
            raise CapacityError(
                f"network {case.label!r}, P={P}: " + report.describe(case.graph.labels)
            )
        templates.append(
            (
                SimulationConfig(
                    graph=case.graph,
                    capacities=tuple(k),
                    dissipation=cfg.g,
                    grains=cfg.X,
                    mode="sinkless",
                    arithmetic=cfg.arithmetic,
                ),
                cfg.base_seed,
            )
        )

    work = [(ci, ri) for ci in range(len(cells)) for ri in range(cfg.runs)]
    if jobs > 1:
        executor = ProcessPoolExecutor(
            max_workers=jobs, initializer=_init_worker, initargs=(templates,)
        )
        with executor:
            chunk = max(1, len(work) // (jobs * 4))
            stream = executor.map(_run_work, work, chunksize=chunk)
            outcomes = list(stream)
    else:
        _init_worker(templates)
        outcomes = [_run_work(item) for item in work]

    ntnt_sum = [np.zeros(cfg.X) for _ in cells]
    ntnt_sumsq = [np.zeros(cfg.X) for _ in cells]
    per_run_topples: list[list[np.ndarray]] = [[None] * cfg.runs for _ in cells]
    kept: list[list[np.ndarray]] | None = (
        [[None] * cfg.runs for _ in cells] if cfg.keep_series else None
    )
    total_drops = 0
    for ci, ri, topples, ntnt, drops in outcomes:
        total_drops += drops
        series = ntnt.astype(np.float64)
        ntnt_sum[ci] += series
        ntnt_sumsq[ci] += series * series
        per_run_topples[ci][ri] = topples
        if kept is not None:
            kept[ci][ri] = ntnt

    expected = len(cells) * cfg.runs * cfg.X
    if total_drops != expected:
        raise AssertionError(
            f"grain accounting broke: dropped {total_drops}, expected {expected}"
        )

    configs = []
    total_topples = 0
    for ci, (case, P) in enumerate(cells):
        mean = ntnt_sum[ci] / cfg.runs
        var = np.maximum(ntnt_sumsq[ci] / cfg.runs - mean * mean, 0.0)
        topples = np.stack(per_run_topples[ci])
        cell_topples = int(topples.sum())
        total_topples += cell_topples
        configs.append(
            ConfigResult(
                label=case.label,
                P=P,
                runs=cfg.runs,
                grains=cfg.runs * cfg.X,
                mean_ntnt=mean,
                sd_ntnt=np.sqrt(var),
                topples=topples,
                topple_mean=topples.mean(axis=0),
                topple_sd=topples.std(axis=0),
                total_topples=cell_topples,
                grade_stats=(
                    topples_by_grade(topples, case.roster, cfg.grade_bands)
                    if case.roster is not None
                    else None
                ),
                ntnt_runs=kept[ci] if kept is not None else None,
            )
        )
    return SweepResult(configs=configs, total_grains=total_drops, total_topples=total_topples)


@dataclass(frozen=True)
class TailFit:
    slope: float
    intercept: float
    r_squared: float | None
    points: int
    degenerate: bool = False


def ntnt_tail_fit(mean_series: Sequence[float], burn_in: int = 2300) -> TailFit:
    """Least-squares line through the cumulative-topple trend from grain
    index burn_in onward. A zero-variance tail is reported as degenerate
    (slope 0, undefined r^2) rather than fitted."""
    y = np.asarray(mean_series, dtype=np.float64)
    if not 0 <= burn_in < y.size:
        raise ValueError(f"burn_in {burn_in} outside 0..{y.size - 1}")
    x = np.arange(burn_in, y.size, dtype=np.float64)
    tail = y[burn_in:]
    if tail.size < 2:
        raise ValueError(f"only {tail.size} tail point(s); need at least 2")
    ss_tot = float(((tail - tail.mean()) ** 2).sum())
    if ss_tot == 0.0:
        return TailFit(
            slope=0.0, intercept=float(tail[0]), r_squared=None,
            points=tail.size, degenerate=True,
        )
    slope, intercept = np.polyfit(x, tail, 1)
    ss_res = float(((tail - (slope * x + intercept)) ** 2).sum())
    return TailFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=1.0 - ss_res / ss_tot,
        points=tail.size,
    )


@dataclass(frozen=True)
class GradeBucket:
    letter: str
    count: int
    mean: float | None
    sd: float | None
    minimum: float | None
    q1: float | None
    median: float | None
    q3: float | None
    maximum: float | None


def topples_by_grade(
    topples,
    roster: Roster,
    bands: tuple[float, float, float] = (90.0, 80.0, 70.0),
) -> dict[str, GradeBucket]:
    """Box-plot-ready topple statistics per letter class.

    `topples` is (runs, n) or (n,); each (run, node) count is one
    observation in the node's letter bucket. Buckets with no members are
    present with count 0.
    """
    samples = np.atleast_2d(np.asarray(topples, dtype=np.float64))
    if samples.shape[1] != len(roster):
        raise ValueError(f"{samples.shape[1]} nodes of topples for {len(roster)} records")
    letters = [letter_grade(rec.grade, bands) for rec in roster]
    out: dict[str, GradeBucket] = {}
    for letter in ("A", "B", "C", "D"):
        nodes = [i for i, l in enumerate(letters) if l == letter]
        if not nodes:
            out[letter] = GradeBucket(letter, 0, None, None, None, None, None, None, None)
            continue
        obs = samples[:, nodes].ravel()
        q1, median, q3 = np.percentile(obs, [25, 50, 75])
        out[letter] = GradeBucket(
            letter=letter,
            count=obs.size,
            mean=float(obs.mean()),
            sd=float(obs.std()),
            minimum=float(obs.min()),
            q1=float(q1),
            median=float(median),
            q3=float(q3),
            maximum=float(obs.max()),
        )
    return out


@dataclass(frozen=True)
class CorrelationRow:
    metric: str
    level: str  # "member" or "group"
    rho: float | None
    note: str | None = None


def _safe_pearson(xs, ys) -> tuple[float | None, str | None]:
    try:
        return pearson(xs, ys), None
    except ConstantInputError:
        return None, "undefined (constant input)"
    except ValueError as exc:
        return None, f"undefined ({exc})"


def correlation_table(
    roster: Roster,
    graph: Graph,
    topples,
    eig_tol: float = 1e-10,
    eig_max_iter: int = 1000,
) -> list[CorrelationRow]:
    """Eight-row, two-level correlation report against grades.

    Member level pairs each student's value with their own grade: mean
    topples, eigenvector centrality (scored within each student's own
    component), degree, betweenness. Group level pairs group measures
    (mean received intergrade, mean year, fraction coded F, size) with the
    group's mean grade. Undefined correlations are reported as such, never
    as 0.
    """
    if graph.n != len(roster):
        raise ValueError(f"graph has {graph.n} nodes but roster has {len(roster)} records")
    topples = np.asarray(topples, dtype=np.float64)
    if topples.shape != (graph.n,):
        raise ValueError(f"topples must be one value per node, got shape {topples.shape}")
    grades = np.asarray(roster.grades(), dtype=np.float64)

    rows: list[CorrelationRow] = []
    member = [
        ("Topples", topples),
        ("Eigenvector", eigenvector_centrality(graph, eig_tol, eig_max_iter, scope="all")),
        ("Degree", degree_centrality(graph)),
        ("Betweenness", betweenness_centrality(graph)),
    ]
    for name, values in member:
        rho, note = _safe_pearson(values, grades)
        rows.append(CorrelationRow(name, "member", rho, note))

    measures = group_measures(roster)
    glabels = list(measures)
    group_grades = {g: m.avg_grade for g, m in measures.items()}

    def group_row(name: str, value_of) -> CorrelationRow:
        pairs = [
            (value_of(measures[g]), group_grades[g])
            for g in glabels
            if value_of(measures[g]) is not None
        ]
        if len(pairs) < 2:
            return CorrelationRow(name, "group", None, "undefined (fewer than 2 groups)")
        xs, ys = zip(*pairs)
        rho, note = _safe_pearson(xs, ys)
        return CorrelationRow(name, "group", rho, note)

    rows.append(group_row("AvgIntergrade", lambda m: m.avg_intergrade))
    rows.append(group_row("AvgYear", lambda m: m.avg_year))
    rows.append(group_row("Gender", lambda m: m.gender_ratio))
    rows.append(group_row("Size", lambda m: float(m.size)))
    return rows
