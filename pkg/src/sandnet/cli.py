"""Command-line entry point: roster generation, FAN building, capacity
checks, simulations, sweeps, metrics, and correlation reports.

Every subcommand echoes its fully resolved configuration to stderr, writes
artifacts atomically (temp file + rename), stamps each artifact with one
leading comment line (tool version, subcommand, resolved flags), and is
byte-for-byte deterministic given the same flags. Exit codes: 0 success,
1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import capacities, feasible_min_capacity, min_capacity_bound, validate_capacities
from .engine import SimulationConfig, simulate
from .errors import SandnetError
from .experiments import (
    NetworkCase,
    SweepConfig,
    correlation_table,
    ntnt_tail_fit,
    run_sweep,
)
from .graphs import Graph, dump_graph, grid_graph, grid_sink_id, load_graph
from .metrics import (
    betweenness_centrality,
    degree_centrality,
    eigenvector_centrality,
    group_measures,
)
from .roster import build_fan, emit_roster, parse_roster, synthetic_roster


def _fmt(x) -> str:
    """Deterministic text for numbers: Fractions exact, floats via repr."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.floating, float)):
        return repr(float(x))
    return str(x)


def _flag_text(options: dict) -> str:
    parts = []
    for key in sorted(options):
        value = options[key]
        if value is None:
            continue
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, (list, tuple)):
            value = ",".join(_fmt(v) for v in value)
        else:
            value = _fmt(value)
        parts.append(f"{key}={value}")
    return " ".join(parts)


def _echo_config(subcommand: str, options: dict) -> None:
    print(f"effective-config {subcommand} {_flag_text(options)}", file=sys.stderr)


def _header(subcommand: str, options: dict) -> str:
    return f"# sandnet {__version__} {subcommand} {_flag_text(options)}"


def _write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_rational(text: str, name: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SandnetError(f"{name}={text!r} is not a rational (try 0.1 or 1/10)") from None


def _graph_nodes_hint(text: str) -> int | None:
    for raw in text.splitlines():
        line = raw.strip()
        if not line.startswith("#"):
            break
        for token in line.split():
            if token.startswith("nodes="):
                return int(token.split("=", 1)[1])
    return None


def _load_graph_file(path: str, nodes: int | None) -> Graph:
    text = Path(path).read_text()
    if nodes is None:
        nodes = _graph_nodes_hint(text)
    if nodes is None:
        best = -1
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            best = max(best, *(int(p) for p in line.split()[:2]))
        nodes = best + 1
    return load_graph(text, nodes)


def _load_roster_file(path: str):
    return parse_roster(Path(path).read_text())


def _csv_lines(header_line: str, columns: str, rows) -> str:
    lines = [header_line, columns]
    lines.extend(rows)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands


def _cmd_gen_roster(args) -> int:
    majors = tuple(args.majors.split(",")) if args.majors else None
    years = tuple(int(y) for y in args.years.split(",")) if args.years else None
    opts = {
        "students": args.students,
        "groups": args.groups,
        "semesters": args.semesters,
        "seed": args.seed,
        "majors": majors,
        "years": years,
        "out": args.out,
    }
    _echo_config("gen-roster", opts)
    kwargs = {}
    if majors:
        kwargs["majors"] = majors
    if years:
        kwargs["years"] = years
    roster = synthetic_roster(args.students, args.groups, args.semesters, args.seed, **kwargs)
    text = emit_roster(roster, header_comment=_header("gen-roster", opts)[2:])
    _write_atomic(Path(args.out), text)
    return 0


def _cmd_gen_grid(args) -> int:
    opts = {
        "width": args.width,
        "height": args.height,
        "sink": args.sink,
        "out": args.out,
    }
    _echo_config("gen-grid", opts)
    graph = grid_graph(args.width, args.height, add_sink=args.sink)
    note = f"nodes={graph.n}"
    if args.sink:
        note += f" sink={grid_sink_id(args.width, args.height)}"
    text = dump_graph(graph, header=_header("gen-grid", opts)[2:] + f" {note}")
    _write_atomic(Path(args.out), text)
    return 0


def _cmd_build_fan(args) -> int:
    labels_out = args.labels_out or args.out + ".labels.csv"
    opts = {"roster": args.roster, "out": args.out, "labels_out": labels_out}
    _echo_config("build-fan", opts)
    roster = _load_roster_file(args.roster)
    graph = build_fan(roster)
    text = dump_graph(graph, header=_header("build-fan", opts)[2:] + f" nodes={graph.n}")
    _write_atomic(Path(args.out), text)
    rows = [f"{i},{uid}" for i, uid in enumerate(roster.uids)]
    _write_atomic(Path(labels_out), _csv_lines(_header("build-fan", opts), "id,uid", rows))
    return 0


def _resolve_capacities(args, graph: Graph, sinks: frozenset[int], exact: bool):
    """Capacity vector from --K/--P, --uniform-k, or --capacity-file."""
    sources = [args.K is not None, args.uniform_k is not None, args.capacity_file is not None]
    if sum(sources) != 1:
        raise SandnetError("choose exactly one of --K/--P, --uniform-k, --capacity-file")
    if args.K is not None:
        if args.P is None:
            raise SandnetError("--K needs --P")
        K = _parse_rational(args.K, "K") if exact else float(_parse_rational(args.K, "K"))
        return capacities(graph, K, args.P, exact=exact)
    if args.uniform_k is not None:
        value = _parse_rational(args.uniform_k, "uniform-k")
        value = value if exact else float(value)
        return [value] * graph.n
    rows = {}
    for raw in Path(args.capacity_file).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("node,"):
            continue
        node_s, value_s = line.split(",", 1)
        rows[int(node_s)] = _parse_rational(value_s.strip(), f"k[{node_s}]")
    missing = [i for i in range(graph.n) if i not in rows and i not in sinks]
    if missing:
        raise SandnetError(f"capacity file misses node(s) {missing}")
    fill = Fraction(0)
    k = [rows.get(i, fill) for i in range(graph.n)]
    return k if exact else [float(v) for v in k]


def _cmd_capacities(args) -> int:
    opts = {
        "graph": args.graph,
        "nodes": args.nodes,
        "K": args.K,
        "P": args.P,
        "g": args.g,
        "arithmetic": args.arithmetic,
        "out": args.out,
    }
    _echo_config("capacities", opts)
    graph = _load_graph_file(args.graph, args.nodes)
    exact = args.arithmetic == "exact"
    g = _parse_rational(args.g, "g")
    g_val = g if exact else float(g)
    K = _parse_rational(args.K, "K") if exact else float(_parse_rational(args.K, "K"))
    k = capacities(graph, K, args.P, exact=exact)
    report = validate_capacities(graph, k, g_val)
    if not report.ok:
        print(report.describe(graph.labels), file=sys.stderr)
        print(
            f"advisory minimum K: {_fmt(min_capacity_bound(graph, args.P, g_val))}; "
            f"feasible minimum K: {_fmt(feasible_min_capacity(graph, args.P, g_val))}",
            file=sys.stderr,
        )
        return 1
    rows = [f"{i},{_fmt(k[i])}" for i in range(graph.n)]
    text = _csv_lines(_header("capacities", opts), "node,k", rows)
    if args.out:
        _write_atomic(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


def _read_drop_file(path: str) -> tuple[int, ...]:
    drops = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        drops.append(int(line))
    return tuple(drops)


def _cmd_simulate(args) -> int:
    sinks = frozenset(int(s) for s in args.sinks.split(",")) if args.sinks else frozenset()
    opts = {
        "graph": args.graph,
        "nodes": args.nodes,
        "K": args.K,
        "P": args.P,
        "uniform_k": args.uniform_k,
        "capacity_file": args.capacity_file,
        "g": args.g,
        "X": args.X,
        "seed": args.seed,
        "mode": args.mode,
        "sinks": sorted(sinks) if sinks else None,
        "drops": args.drops,
        "arithmetic": args.arithmetic,
        "record_sand": args.record_sand,
        "out": args.out,
    }
    _echo_config("simulate", opts)
    graph = _load_graph_file(args.graph, args.nodes)
    exact = args.arithmetic == "exact"
    g = _parse_rational(args.g, "g")
    k = _resolve_capacities(args, graph, sinks, exact)
    drops = _read_drop_file(args.drops) if args.drops else None
    grains = args.X
    if drops is not None:
        if grains is not None and grains != len(drops):
            raise SandnetError(f"--X {grains} disagrees with {len(drops)} drops in --drops")
        grains = len(drops)
    if grains is None:
        raise SandnetError("need --X (or --drops)")
    config = SimulationConfig(
        graph=graph,
        capacities=tuple(k),
        dissipation=g if exact else float(g),
        grains=grains,
        seed=args.seed,
        mode=args.mode,
        sinks=sinks,
        drops=drops,
        arithmetic=args.arithmetic,
        record_sand_series=args.record_sand,
    )
    result = simulate(config)

    head = _header("simulate", opts)
    out = Path(args.out)
    _write_atomic(
        out / "ntnt.csv",
        _csv_lines(
            head,
            "grain_index,cumulative_topples",
            (f"{x},{v}" for x, v in enumerate(result.ntnt_series.tolist())),
        ),
    )
    _write_atomic(
        out / "topples.csv",
        _csv_lines(
            head, "node,count", (f"{i},{v}" for i, v in enumerate(result.topples.tolist()))
        ),
    )
    _write_atomic(
        out / "final_state.csv",
        _csv_lines(
            head, "node,sand", (f"{i},{_fmt(s)}" for i, s in enumerate(result.final_sand))
        ),
    )
    if result.sand_series is not None:
        _write_atomic(
            out / "sand_series.csv",
            _csv_lines(
                head,
                "grain_index,total_sand",
                (f"{x},{_fmt(s)}" for x, s in enumerate(result.sand_series)),
            ),
        )
    print(
        f"dropped {result.drops} grains, {result.total_topples} topples, "
        f"{result.steps} synchronous steps",
        file=sys.stderr,
    )
    return 0


def _cmd_metrics(args) -> int:
    opts = {
        "graph": args.graph,
        "nodes": args.nodes,
        "roster": args.roster,
        "tol": args.tol,
        "max_iter": args.max_iter,
        "scope": args.scope,
        "out": args.out,
    }
    _echo_config("metrics", opts)
    graph = _load_graph_file(args.graph, args.nodes)
    head = _header("metrics", opts)
    out = Path(args.out)
    for name, values in (
        ("degree", degree_centrality(graph)),
        ("eigenvector", eigenvector_centrality(graph, args.tol, args.max_iter, args.scope)),
        ("betweenness", betweenness_centrality(graph)),
    ):
        rows = (f"{i},{_fmt(v)}" for i, v in enumerate(values.tolist()))
        _write_atomic(out / f"{name}.csv", _csv_lines(head, "node,value", rows))
    if args.roster:
        measures = group_measures(_load_roster_file(args.roster))
        rows = (
            f"{label},{m.size},{_fmt(m.avg_grade)},{_fmt(m.avg_year)},{_fmt(m.gender_ratio)},"
            + ("" if m.avg_intergrade is None else _fmt(m.avg_intergrade))
            for label, m in measures.items()
        )
        _write_atomic(
            out / "group_measures.csv",
            _csv_lines(head, "group,size,avg_grade,avg_year,gender_ratio,avg_intergrade", rows),
        )
    return 0


def _read_topples_file(path: str, n: int) -> np.ndarray:
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("node,"):
            continue
        node_s, value_s = line.split(",", 1)
        values[int(node_s)] = float(value_s)
    missing = [i for i in range(n) if i not in values]
    if missing:
        raise SandnetError(f"topples file misses node(s) {missing}")
    return np.array([values[i] for i in range(n)], dtype=np.float64)


def _correlation_rows(table) -> list[str]:
    return [
        f"{row.metric},{row.level},{'undefined' if row.rho is None else _fmt(row.rho)}"
        for row in table
    ]


def _cmd_correlate(args) -> int:
    opts = {
        "roster": args.roster,
        "graph": args.graph,
        "nodes": args.nodes,
        "topples": args.topples,
        "tol": args.tol,
        "max_iter": args.max_iter,
        "out": args.out,
    }
    _echo_config("correlate", opts)
    roster = _load_roster_file(args.roster)
    graph = _load_graph_file(args.graph, args.nodes)
    topples = _read_topples_file(args.topples, graph.n)
    table = correlation_table(roster, graph, topples, args.tol, args.max_iter)
    for row in table:
        if row.note:
            print(f"{row.metric} ({row.level}): {row.note}", file=sys.stderr)
    text = _csv_lines(_header("correlate", opts), "metric,level,rho", _correlation_rows(table))
    _write_atomic(Path(args.out), text)
    return 0


def _json_ready(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return [float(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    return obj


def _cmd_sweep(args) -> int:
    # jobs is echoed but kept out of artifact headers: parallelism must not
    # change output bytes
    _echo_config("sweep", {"config": args.config, "jobs": args.jobs, "out": args.out})
    opts = {"config": args.config, "out": args.out}
    conf = json.loads(Path(args.config).read_text())
    arithmetic = conf.get("arithmetic", "double")
    exact = arithmetic == "exact"

    def rational(v):
        f = Fraction(str(v))
        return f if exact else float(f)

    networks = []
    for net in conf["networks"]:
        graph = _load_graph_file(net["graph"], net.get("nodes"))
        roster = _load_roster_file(net["roster"]) if net.get("roster") else None
        if roster is not None and len(roster) != graph.n:
            raise SandnetError(
                f"network {net['label']!r}: roster has {len(roster)} records "
                f"but graph has {graph.n} nodes"
            )
        networks.append(NetworkCase(label=net["label"], graph=graph, roster=roster))

    bands = tuple(conf.get("grade_bands", (90.0, 80.0, 70.0)))
    cfg = SweepConfig(
        networks=tuple(networks),
        P_values=tuple(int(p) for p in conf["P_values"]),
        K=rational(conf["K"]),
        g=rational(conf["g"]),
        X=int(conf["X"]),
        runs=int(conf["runs"]),
        base_seed=int(conf["base_seed"]),
        arithmetic=arithmetic,
        keep_series=bool(conf.get("keep_series", False)),
        grade_bands=bands,
    )
    burn_in = int(conf.get("burn_in", 2300))
    result = run_sweep(cfg, jobs=args.jobs)

    head = _header("sweep", opts)
    out = Path(args.out)
    summary = {
        "tool_version": __version__,
        "K": _fmt(cfg.K),
        "g": _fmt(cfg.g),
        "X": cfg.X,
        "runs_per_config": cfg.runs,
        "base_seed": cfg.base_seed,
        "arithmetic": cfg.arithmetic,
        "burn_in": burn_in,
        "total_grains": result.total_grains,
        "total_topples": result.total_topples,
        "configs": [],
    }
    grade_rows = []
    for cr in result.configs:
        if burn_in < cr.mean_ntnt.size - 1:
            fit = ntnt_tail_fit(cr.mean_ntnt, burn_in)
            fit_info = {
                "slope": fit.slope,
                "intercept": fit.intercept,
                "r_squared": fit.r_squared,
                "points": fit.points,
                "degenerate": fit.degenerate,
            }
        else:
            fit_info = None
        summary["configs"].append(
            {
                "network": cr.label,
                "P": cr.P,
                "runs": cr.runs,
                "grains": cr.grains,
                "total_topples": cr.total_topples,
                "topple_mean": _json_ready(cr.topple_mean),
                "topple_sd": _json_ready(cr.topple_sd),
                "ntnt_tail_fit": fit_info,
            }
        )
        rows = (
            f"{x},{_fmt(m)},{_fmt(s)}"
            for x, (m, s) in enumerate(zip(cr.mean_ntnt.tolist(), cr.sd_ntnt.tolist()))
        )
        _write_atomic(
            out / f"ntnt_mean_{cr.label}_P{cr.P}.csv",
            _csv_lines(head, "grain_index,mean_cumulative_topples,sd", rows),
        )
        if cr.grade_stats is not None:
            for letter, b in cr.grade_stats.items():
                cells = [cr.label, str(cr.P), letter, str(b.count)] + [
                    "" if v is None else _fmt(v)
                    for v in (b.mean, b.sd, b.minimum, b.q1, b.median, b.q3, b.maximum)
                ]
                grade_rows.append(",".join(cells))
    _write_atomic(
        out / "grade_boxes.csv",
        _csv_lines(head, "network,P,letter,count,mean,sd,min,q1,median,q3,max", grade_rows),
    )

    corr_label = conf.get("correlation_network")
    if corr_label is None:
        with_roster = [c for c in networks if c.roster is not None]
        corr_label = (
            max(with_roster, key=lambda c: c.graph.n).label if with_roster else None
        )
    corr_P = int(conf.get("correlation_P", max(cfg.P_values)))
    if corr_label is not None:
        case = next(c for c in networks if c.label == corr_label)
        cr = next(c for c in result.configs if c.label == corr_label and c.P == corr_P)
        table = correlation_table(case.roster, case.graph, cr.topple_mean)
        summary["correlation"] = {
            "network": corr_label,
            "P": corr_P,
            "rows": [
                {"metric": r.metric, "level": r.level, "rho": r.rho, "note": r.note}
                for r in table
            ],
        }
        _write_atomic(
            out / "correlations.csv",
            _csv_lines(head, "metric,level,rho", _correlation_rows(table)),
        )
    _write_atomic(out / "sweep_summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


# ---------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sandnet",
        description="Sinkless sandpile cascades on classroom social networks",
    )
    parser.add_argument("--version", action="version", version=f"sandnet {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen-roster", help="write a synthetic student roster CSV")
    p.add_argument("--students", type=int, required=True)
    p.add_argument("--groups", type=int, required=True)
    p.add_argument("--semesters", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--majors", help="comma-separated major pool")
    p.add_argument("--years", help="comma-separated year pool (1..6)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_roster)

    p = sub.add_parser("gen-grid", help="write a lattice edge list (optional sink)")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--sink", action="store_true", help="append a sink adjacent to the boundary")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_grid)

    p = sub.add_parser("build-fan", help="build the friend approximation network from a roster")
    p.add_argument("--roster", required=True)
    p.add_argument("--out", required=True, help="edge-list output path")
    p.add_argument("--labels-out", help="id,uid sidecar (default: OUT.labels.csv)")
    p.set_defaults(func=_cmd_build_fan)

    p = sub.add_parser("capacities", help="distribute K over nodes and validate feasibility")
    p.add_argument("--graph", required=True)
    p.add_argument("--nodes", type=int)
    p.add_argument("--K", required=True)
    p.add_argument("--P", type=int, required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--arithmetic", choices=("exact", "double"), default="exact")
    p.add_argument("--out", help="node,k CSV (stdout when omitted)")
    p.set_defaults(func=_cmd_capacities)

    p = sub.add_parser("simulate", help="run one seeded simulation")
    p.add_argument("--graph", required=True)
    p.add_argument("--nodes", type=int)
    p.add_argument("--K")
    p.add_argument("--P", type=int)
    p.add_argument("--uniform-k", dest="uniform_k")
    p.add_argument("--capacity-file")
    p.add_argument("--g", required=True)
    p.add_argument("--X", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("sinkless", "asm_oracle"), default="sinkless")
    p.add_argument("--sinks", help="comma-separated sink node ids (asm_oracle)")
    p.add_argument("--drops", help="file with one drop node per line (replaces the PRNG)")
    p.add_argument("--arithmetic", choices=("exact", "double"), default="exact")
    p.add_argument("--record-sand", action="store_true", dest="record_sand")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("metrics", help="write degree/eigenvector/betweenness CSVs")
    p.add_argument("--graph", required=True)
    p.add_argument("--nodes", type=int)
    p.add_argument("--roster", help="also write group_measures.csv from this roster")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=1000, dest="max_iter")
    p.add_argument("--scope", choices=("largest", "all"), default="largest")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("correlate", help="emit the eight-row two-level correlation table")
    p.add_argument("--roster", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--nodes", type=int)
    p.add_argument("--topples", required=True, help="node,count CSV (e.g. simulate output)")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=1000, dest="max_iter")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser("sweep", help="run a JSON-configured sweep")
    p.add_argument("--config", required=True, help="sweep JSON path")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_sweep)

    return parser


def dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SandnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
