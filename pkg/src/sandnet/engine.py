"""Sandpile cascades without sinks, plus the classic sink-based mode.

Grains drop one at a time onto uniformly random non-sink nodes (a seeded
splitmix64 schedule, or an explicit sequence). A node holding strictly more
sand than its capacity topples: it blows away `g` grains, loses one grain
per neighbor, and each neighbor gains one grain. Every node over capacity
in a timestep topples synchronously. A cascade runs until no node is over
capacity; the next grain drops only once the cascade settles, and the final
grain's cascade also runs to completion.

Sinkless mode (no sinks, g > 0) terminates because each topple removes
exactly g from the system. Classic mode (g = 0) needs at least one sink --
a node of unbounded capacity that absorbs sand -- reachable from everywhere.

Two arithmetic backends share the same update rule: exact Fractions (the
reference; threshold comparisons are exact) and float64 for long runs. The
float path can disagree with the exact path only when sand lands within
rounding distance of a threshold, which the degree-power capacities of
realistic configurations keep far away.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .capacity import validate_capacities
from .errors import EngineError
from .graphs import Graph, reaches_all
from .rng import SplitMix64

MODES = ("sinkless", "asm_oracle")


@dataclass
class SandpileState:
    """Mutable per-run state: sand, cumulative topple tallies, bookkeeping."""

    sand: list | np.ndarray
    topples: np.ndarray
    drops: int = 0
    ntnt_series: list[int] = field(default_factory=list)
    clock: int = 0

    @classmethod
    def zeros(cls, n: int, exact: bool = True) -> "SandpileState":
        sand = [Fraction(0)] * n if exact else np.zeros(n, dtype=np.float64)
        return cls(sand=sand, topples=np.zeros(n, dtype=np.int64))

    def total_sand(self):
        if isinstance(self.sand, np.ndarray):
            return float(self.sand.sum())
        return sum(self.sand)

    def total_topples(self) -> int:
        return int(self.topples.sum())


@dataclass(frozen=True)
class CascadeOutcome:
    topples: int
    steps: int


def topple_set(sand, capacities, sinks: frozenset[int] = frozenset()) -> set[int]:
    """Nodes holding strictly more sand than their capacity; sinks never
    topple."""
    return {
        i
        for i in range(len(sand))
        if i not in sinks and sand[i] > capacities[i]
    }


def cascade_step(
    state: SandpileState,
    graph: Graph,
    capacities,
    dissipation,
    sinks: frozenset[int] = frozenset(),
) -> tuple[int, ...]:
    """One synchronous update applied in place.

    Every over-capacity non-sink node loses deg + g; every node gains one
    grain per toppling neighbor. Returns the topplers in ascending order
    (empty tuple: the state was already settled, nothing changed). Sand
    going negative means the capacities never passed validation.
    """
    sand = state.sand
    if isinstance(sand, np.ndarray):
        over = np.flatnonzero(sand > capacities)
        if sinks and over.size:
            over = np.array([i for i in over.tolist() if i not in sinks], dtype=np.int64)
        if over.size == 0:
            return ()
        gains = graph.adjacency[:, over].sum(axis=1)
        sand[over] -= graph.degrees[over] + dissipation
        sand += gains
        state.topples[over] += 1
        if np.any(sand[over] < 0):
            bad = over[np.argmax(sand[over] < 0)]
            raise EngineError(
                f"sand at node {int(bad)} went negative after a topple; "
                "capacities violate k >= deg + g"
            )
        state.clock += 1
        return tuple(over.tolist())

    over = [i for i in range(graph.n) if i not in sinks and sand[i] > capacities[i]]
    if not over:
        return ()
    for i in over:
        sand[i] -= int(graph.degrees[i]) + dissipation
        state.topples[i] += 1
    for i in over:
        for j in graph.neighbors(i):
            sand[int(j)] += 1
    for i in over:
        if sand[i] < 0:
            raise EngineError(
                f"sand at node {i} went negative after a topple; "
                "capacities violate k >= deg + g"
            )
    state.clock += 1
    return tuple(over)


def run_cascade(
    state: SandpileState,
    graph: Graph,
    capacities,
    dissipation,
    sinks: frozenset[int] = frozenset(),
) -> CascadeOutcome:
    """Apply synchronous steps until no node is over capacity.

    With g > 0 each topple removes exactly g, so steps are bounded by
    (total sand)/g; exceeding that watchdog means broken arithmetic. With
    g = 0 termination rests on a sink, which the caller must provide.
    """
    if dissipation == 0 and not sinks:
        raise EngineError("dissipation 0 without a sink cannot be guaranteed to settle")
    watchdog = None
    if dissipation > 0:
        watchdog = math.floor(state.total_sand() / dissipation) + 1
    topples = 0
    steps = 0
    while True:
        over = cascade_step(state, graph, capacities, dissipation, sinks)
        if not over:
            break
        steps += 1
        topples += len(over)
        if watchdog is not None and steps > watchdog:
            raise EngineError(
                f"cascade exceeded its dissipation bound of {watchdog} steps; "
                "arithmetic backend is inconsistent"
            )
    return CascadeOutcome(topples=topples, steps=steps)


@dataclass(frozen=True)
class SimulationConfig:
    """Everything one run needs; immutable so runs can be farmed out."""

    graph: Graph
    capacities: tuple
    dissipation: object
    grains: int
    seed: int = 0
    mode: str = "sinkless"
    sinks: frozenset[int] = frozenset()
    drops: tuple[int, ...] | None = None
    arithmetic: str = "exact"
    record_sand_series: bool = False


@dataclass
class SimulationResult:
    config: SimulationConfig
    final_sand: list | np.ndarray
    topples: np.ndarray
    ntnt_series: np.ndarray
    drops: int
    steps: int
    sand_series: list | None = None

    @property
    def total_topples(self) -> int:
        return int(self.topples.sum())


def _require_exact_scalar(value, name: str):
    if isinstance(value, float):
        if math.isinf(value):
            return value
        raise EngineError(
            f"{name}={value!r} is a float; the exact backend needs int, Fraction, or string "
            "(float 0.1 is not 1/10)"
        )
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise EngineError(f"cannot read {name}={value!r} as a rational: {exc}") from None


def _prepare(config: SimulationConfig):
    graph = config.graph
    n = graph.n
    if n == 0:
        raise EngineError("graph has no nodes")
    if config.mode not in MODES:
        raise EngineError(f"mode must be one of {MODES}, got {config.mode!r}")
    if config.arithmetic not in ("exact", "double"):
        raise EngineError(f"arithmetic must be 'exact' or 'double', got {config.arithmetic!r}")
    if config.grains < 1:
        raise EngineError(f"grains must be >= 1, got {config.grains}")
    if len(config.capacities) != n:
        raise EngineError(f"{len(config.capacities)} capacities for {n} nodes")
    sinks = frozenset(int(s) for s in config.sinks)
    for s in sinks:
        if not 0 <= s < n:
            raise EngineError(f"sink {s} outside 0..{n - 1}")

    exact = config.arithmetic == "exact"
    if exact:
        g = _require_exact_scalar(config.dissipation, "dissipation")
        k = [
            math.inf if i in sinks else _require_exact_scalar(config.capacities[i], f"k[{i}]")
            for i in range(n)
        ]
    else:
        g = float(config.dissipation)
        k = np.array(
            [math.inf if i in sinks else float(config.capacities[i]) for i in range(n)],
            dtype=np.float64,
        )

    if config.mode == "sinkless":
        if sinks:
            raise EngineError("sinkless mode forbids sinks")
        if not 0 < g <= 1:
            raise EngineError(f"sinkless mode needs dissipation in (0, 1], got {g}")
        report = validate_capacities(graph, k, g)
        if not report.ok:
            raise EngineError(report.describe(graph.labels))
    else:
        if not sinks:
            raise EngineError("asm_oracle mode needs at least one sink")
        if g != 0:
            raise EngineError(f"asm_oracle mode needs dissipation 0, got {g}")
        if not reaches_all(graph, sinks):
            raise EngineError("some node cannot reach a sink; cascades may never settle")

    active = [i for i in range(n) if i not in sinks]
    if not active:
        raise EngineError("every node is a sink; nowhere to drop grains")
    if config.drops is not None:
        schedule = [int(d) for d in config.drops]
        if len(schedule) != config.grains:
            raise EngineError(
                f"explicit schedule has {len(schedule)} drops but grains={config.grains}"
            )
        for d in schedule:
            if not 0 <= d < n:
                raise EngineError(f"drop target {d} outside 0..{n - 1}")
            if d in sinks:
                raise EngineError(f"drop target {d} is a sink")
    else:
        rng = SplitMix64(config.seed)
        m = len(active)
        schedule = [active[rng.randint(m)] for _ in range(config.grains)]

    total_capacity = sum(k[i] for i in active)
    if config.grains < 2 * total_capacity:
        warnings.warn(
            f"grains={config.grains} is small next to total capacity {total_capacity}; "
            "the run may settle before self-organized criticality",
            RuntimeWarning,
            stacklevel=3,
        )
    return exact, g, k, sinks, schedule


def simulate(config: SimulationConfig) -> SimulationResult:
    """Drop config.grains grains, settling each cascade before the next drop
    (the last one included). Deterministic in the config, seed included."""
    exact, g, k, sinks, schedule = _prepare(config)
    graph = config.graph
    state = SandpileState.zeros(graph.n, exact=exact)
    sand_series = [] if config.record_sand_series else None
    total_topples = 0
    total_steps = 0
    for node in schedule:
        state.sand[node] += 1
        state.drops += 1
        outcome = run_cascade(state, graph, k, g, sinks)
        total_topples += outcome.topples
        total_steps += outcome.steps
        state.ntnt_series.append(total_topples)
        if sand_series is not None:
            sand_series.append(state.total_sand())
    return SimulationResult(
        config=config,
        final_sand=state.sand,
        topples=state.topples,
        ntnt_series=np.array(state.ntnt_series, dtype=np.int64),
        drops=state.drops,
        steps=total_steps,
        sand_series=sand_series,
    )


def simulate_asm_oracle(
    graph: Graph,
    capacities: Sequence,
    sinks: frozenset[int],
    drops: Sequence[int] | None = None,
    grains: int | None = None,
    seed: int = 0,
    arithmetic: str = "exact",
) -> SimulationResult:
    """Classic sandpile run: g = 0, sand drains through the sink(s)."""
    if drops is not None:
        grains = len(drops)
        drops = tuple(int(d) for d in drops)
    if grains is None:
        raise EngineError("need either an explicit drop sequence or a grain count")
    return simulate(
        SimulationConfig(
            graph=graph,
            capacities=tuple(capacities),
            dissipation=0,
            grains=grains,
            seed=seed,
            mode="asm_oracle",
            sinks=frozenset(sinks),
            drops=drops,
            arithmetic=arithmetic,
        )
    )
