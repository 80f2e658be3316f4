"""Sinkless sandpile cascades on social networks.

Build friend approximation networks from student rosters, spread a total
carrying capacity over nodes by a degree-power rule, drive seeded
grain-dropping simulations with synchronous topple cascades, and correlate
topple activity and classical centralities against grades.
"""

__version__ = "0.1.0"

from .capacity import (
    CapacityConfig,
    CapacityReport,
    CapacityViolation,
    capacities,
    feasible_min_capacity,
    min_capacity_bound,
    validate_capacities,
)
from .engine import (
    CascadeOutcome,
    SandpileState,
    SimulationConfig,
    SimulationResult,
    cascade_step,
    run_cascade,
    simulate,
    simulate_asm_oracle,
    topple_set,
)
from .errors import (
    CapacityError,
    ConstantInputError,
    ConvergenceError,
    EngineError,
    GraphError,
    RosterError,
    SandnetError,
)
from .experiments import (
    ConfigResult,
    CorrelationRow,
    GradeBucket,
    NetworkCase,
    SweepConfig,
    SweepResult,
    TailFit,
    correlation_table,
    ntnt_tail_fit,
    run_sweep,
    semester_networks,
    topples_by_grade,
)
from .graphs import (
    Graph,
    connected_components,
    degree_sequence,
    dump_graph,
    grid_graph,
    grid_sink_id,
    is_connected,
    load_graph,
    random_graph,
)
from .metrics import (
    GroupMeasures,
    betweenness_centrality,
    degree_centrality,
    eigenvector_centrality,
    group_measures,
    pearson,
)
from .rng import SplitMix64, derive_seed, mix64
from .roster import (
    Roster,
    StudentRecord,
    build_fan,
    emit_roster,
    letter_grade,
    parse_roster,
    synthetic_roster,
    with_grades,
)

__all__ = [
    "CapacityConfig",
    "CapacityError",
    "CapacityReport",
    "CapacityViolation",
    "CascadeOutcome",
    "ConfigResult",
    "ConstantInputError",
    "ConvergenceError",
    "CorrelationRow",
    "EngineError",
    "GradeBucket",
    "Graph",
    "GraphError",
    "GroupMeasures",
    "NetworkCase",
    "Roster",
    "RosterError",
    "SandnetError",
    "SandpileState",
    "SimulationConfig",
    "SimulationResult",
    "SplitMix64",
    "StudentRecord",
    "SweepConfig",
    "SweepResult",
    "TailFit",
    "betweenness_centrality",
    "build_fan",
    "capacities",
    "cascade_step",
    "connected_components",
    "correlation_table",
    "degree_centrality",
    "degree_sequence",
    "derive_seed",
    "dump_graph",
    "eigenvector_centrality",
    "emit_roster",
    "feasible_min_capacity",
    "grid_graph",
    "grid_sink_id",
    "group_measures",
    "is_connected",
    "letter_grade",
    "load_graph",
    "min_capacity_bound",
    "mix64",
    "ntnt_tail_fit",
    "parse_roster",
    "pearson",
    "random_graph",
    "run_cascade",
    "run_sweep",
    "semester_networks",
    "simulate",
    "simulate_asm_oracle",
    "synthetic_roster",
    "topple_set",
    "topples_by_grade",
    "validate_capacities",
    "with_grades",
]
