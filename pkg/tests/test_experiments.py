from fractions import Fraction

import numpy as np
import pytest

from sandnet import (
    CapacityError,
    Graph,
    NetworkCase,
    SimulationConfig,
    SweepConfig,
    build_fan,
    capacities,
    correlation_table,
    degree_centrality,
    ntnt_tail_fit,
    run_sweep,
    semester_networks,
    simulate,
    synthetic_roster,
    topples_by_grade,
    with_grades,
)
from sandnet.rng import derive_seed

from conftest import record
from sandnet import Roster


class TestTailFit:
    def test_exact_line_any_burn_in(self):
        series = [2 * x + 1 for x in range(50)]
        for burn_in in (0, 10, 47):
            fit = ntnt_tail_fit(series, burn_in)
            assert fit.slope == pytest.approx(2.0, rel=1e-9)
            assert fit.intercept == pytest.approx(1.0, rel=1e-6)
            assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
            assert not fit.degenerate

    def test_constant_series_degenerate(self):
        fit = ntnt_tail_fit([7.0] * 30, 5)
        assert fit.degenerate
        assert fit.slope == 0.0
        assert fit.r_squared is None

    def test_too_few_tail_points(self):
        with pytest.raises(ValueError, match="tail point"):
            ntnt_tail_fit([1.0, 2.0, 3.0], 2)

    def test_burn_in_bounds(self):
        with pytest.raises(ValueError, match="burn_in"):
            ntnt_tail_fit([1.0, 2.0], 5)

    def test_noisy_line_quality(self):
        rng = np.random.default_rng(0)
        xs = np.arange(400.0)
        series = 10 * xs + 3 + rng.normal(0, 0.5, 400)
        fit = ntnt_tail_fit(series, 100)
        assert fit.slope == pytest.approx(10.0, rel=1e-3)
        assert fit.r_squared > 0.999
        assert fit.points == 300


class TestTopplesByGrade:
    def test_single_bucket(self):
        roster = Roster([record(f"A{i}", grade=95.0) for i in range(1, 5)])
        stats = topples_by_grade(np.array([1.0, 2.0, 3.0, 4.0]), roster)
        assert stats["A"].count == 4
        assert stats["A"].mean == pytest.approx(2.5)
        assert stats["B"].count == 0 and stats["B"].mean is None

    def test_forced_drop_hand_computed_means(self, path2):
        # path hand-trace: forced drops on node 0 give topples [3, 1]
        r = simulate(
            SimulationConfig(
                graph=path2,
                capacities=(Fraction("1.6"),) * 2,
                dissipation=Fraction(1, 2),
                grains=4,
                drops=(0, 0, 0, 0),
            )
        )
        roster = Roster([record("A1", grade=95.0), record("B1", grade=85.0)])
        stats = topples_by_grade(r.topples, roster)
        assert stats["A"].mean == pytest.approx(3.0)
        assert stats["B"].mean == pytest.approx(1.0)
        assert stats["C"].count == 0 and stats["D"].count == 0

    def test_quartiles_from_runs_by_nodes_samples(self):
        roster = Roster([record("A1", grade=92.0), record("A2", grade=91.0)])
        samples = np.array([[0, 2], [4, 6], [8, 10], [12, 14]], dtype=float)
        b = topples_by_grade(samples, roster)["A"]
        assert b.count == 8
        assert b.minimum == 0 and b.maximum == 14
        assert b.median == pytest.approx(7.0)
        assert b.q1 == pytest.approx(3.5) and b.q3 == pytest.approx(10.5)

    def test_length_mismatch(self, tiny_roster):
        with pytest.raises(ValueError, match="nodes"):
            topples_by_grade(np.zeros(3), tiny_roster)


class TestCorrelationTable:
    def fixture_roster_fan(self, seed=11):
        # uneven group sizes and small pools give the FAN varied degrees
        roster = synthetic_roster(26, 7, 2, seed=seed, majors=("CS", "PW"), years=(2, 3))
        fan = build_fan(roster)
        return roster, fan

    def test_table_shape_four_plus_four(self):
        roster, fan = self.fixture_roster_fan()
        table = correlation_table(roster, fan, np.arange(fan.n, dtype=float))
        assert [r.metric for r in table] == [
            "Topples", "Eigenvector", "Degree", "Betweenness",
            "AvgIntergrade", "AvgYear", "Gender", "Size",
        ]
        assert [r.level for r in table] == ["member"] * 4 + ["group"] * 4

    def test_degree_fixture_drives_rho_to_one(self):
        roster, fan = self.fixture_roster_fan()
        deg = degree_centrality(fan)
        assert deg.min() < deg.max()  # nonconstant, so the row is defined
        rigged = with_grades(roster, 50.0 + 2.0 * deg)
        table = correlation_table(rigged, fan, np.arange(fan.n, dtype=float))
        degree_row = next(r for r in table if r.metric == "Degree")
        assert degree_row.rho == pytest.approx(1.0, abs=1e-12)

    def test_topples_identical_to_grades_self_correlates(self):
        roster, fan = self.fixture_roster_fan()
        grades = np.array(roster.grades())
        row = correlation_table(roster, fan, grades)[0]
        assert row.metric == "Topples" and row.rho == pytest.approx(1.0, abs=1e-12)

    def test_constant_metric_reported_undefined(self):
        roster, fan = self.fixture_roster_fan()
        table = correlation_table(roster, fan, np.full(fan.n, 5.0))
        topples_row = table[0]
        assert topples_row.rho is None
        assert "undefined" in topples_row.note

    def test_groups_without_intergrades_drop_out(self):
        recs = [
            record("A1", grade=90.0, intergrade=88.0),
            record("A2", grade=70.0, intergrade=72.0),
            record("B1", grade=85.0),
            record("B2", grade=75.0),
        ]
        roster = Roster(recs)
        fan = build_fan(roster)
        table = correlation_table(roster, fan, np.arange(4, dtype=float))
        inter = next(r for r in table if r.metric == "AvgIntergrade")
        assert inter.rho is None and "fewer than 2" in inter.note

    def test_size_mismatch_rejected(self, tiny_roster):
        with pytest.raises(ValueError, match="nodes"):
            correlation_table(tiny_roster, Graph(2, [(0, 1)]), np.zeros(2))


class TestSemesterNetworks:
    def test_one_case_per_semester_plus_full(self):
        roster = synthetic_roster(30, 8, 3, seed=4)
        cases = semester_networks(roster)
        assert [c.label for c in cases] == list(roster.semesters) + ["full"]
        assert cases[-1].graph.n == 30
        assert sum(c.graph.n for c in cases[:-1]) == 30
        for case in cases[:-1]:
            assert len(case.roster) == case.graph.n
            assert all(r.semester == case.label for r in case.roster)

    def test_full_is_disjoint_union_of_semesters(self):
        roster = synthetic_roster(30, 8, 3, seed=4)
        cases = semester_networks(roster)
        total_edges = sum(c.graph.edge_count for c in cases[:-1])
        assert cases[-1].graph.edge_count == total_edges


def desk_sweep(runs=2, X=120, networks=None, P=(0, 1), seed=5, **kw):
    if networks is None:
        roster = synthetic_roster(16, 4, 2, seed=1)
        networks = (NetworkCase("full", build_fan(roster), roster),)
    return SweepConfig(
        networks=tuple(networks),
        P_values=tuple(P),
        K=kw.pop("K", 60.0),
        g=kw.pop("g", 0.1),
        X=X,
        runs=runs,
        base_seed=seed,
        **kw,
    )


class TestRunSweep:
    def test_degenerate_sweep_equals_direct_simulate(self):
        roster = synthetic_roster(16, 4, 2, seed=1)
        fan = build_fan(roster)
        cfg = desk_sweep(runs=1, P=(1,), networks=(NetworkCase("full", fan, roster),))
        sweep = run_sweep(cfg)
        k = capacities(fan, 60.0, 1)
        direct = simulate(
            SimulationConfig(
                graph=fan,
                capacities=tuple(k.tolist()),
                dissipation=0.1,
                grains=cfg.X,
                seed=derive_seed(cfg.base_seed, 0, 0),
                arithmetic="double",
            )
        )
        cr = sweep.configs[0]
        assert np.array_equal(cr.topples[0], direct.topples)
        assert np.allclose(cr.mean_ntnt, direct.ntnt_series.astype(float))

    def test_accounting_invariant(self):
        cfg = desk_sweep(runs=3, X=90)
        sweep = run_sweep(cfg)
        assert sweep.total_grains == 1 * 2 * 3 * 90
        assert all(c.grains == 3 * 90 for c in sweep.configs)

    def test_deterministic_and_jobs_invariant(self):
        cfg = desk_sweep(runs=2, X=100)
        one = run_sweep(cfg, jobs=1)
        again = run_sweep(cfg, jobs=1)
        four = run_sweep(cfg, jobs=4)
        for a, b in ((one, again), (one, four)):
            assert a.total_grains == b.total_grains
            assert a.total_topples == b.total_topples
            for ca, cb in zip(a.configs, b.configs):
                assert np.array_equal(ca.topples, cb.topples)
                assert np.array_equal(ca.mean_ntnt, cb.mean_ntnt)
                assert np.array_equal(ca.sd_ntnt, cb.sd_ntnt)

    def test_mean_ntnt_nondecreasing_and_bounded(self):
        sweep = run_sweep(desk_sweep(runs=2, X=150))
        for cr in sweep.configs:
            assert np.all(np.diff(cr.mean_ntnt) >= -1e-12)
            assert cr.total_topples <= cr.runs * 150 / 0.1

    def test_capacity_failure_aborts_before_runs(self, star4):
        bad = NetworkCase("hub", star4, None)
        cfg = desk_sweep(networks=(bad,), P=(-1,), K=10.0)
        with pytest.raises(CapacityError, match="hub"):
            run_sweep(cfg)

    def test_grade_stats_only_with_roster(self, star4):
        roster = synthetic_roster(16, 4, 2, seed=1)
        cases = (
            NetworkCase("with", build_fan(roster), roster),
            NetworkCase("without", build_fan(roster), None),
        )
        sweep = run_sweep(desk_sweep(networks=cases, P=(1,)))
        assert sweep.configs[0].grade_stats is not None
        assert sweep.configs[1].grade_stats is None

    def test_keep_series_retains_per_run_traces(self):
        sweep = run_sweep(desk_sweep(runs=2, X=80, keep_series=True))
        for cr in sweep.configs:
            assert len(cr.ntnt_runs) == 2
            assert all(s.shape == (80,) for s in cr.ntnt_runs)
            stacked = np.stack([s.astype(float) for s in cr.ntnt_runs])
            assert np.allclose(stacked.mean(axis=0), cr.mean_ntnt)

    def test_exact_arithmetic_sweep(self):
        roster = synthetic_roster(12, 3, 1, seed=2)
        fan = build_fan(roster)
        cfg = desk_sweep(
            runs=1,
            X=60,
            networks=(NetworkCase("full", fan, roster),),
            P=(1,),
            K=Fraction(50),
            g=Fraction(1, 10),
            arithmetic="exact",
        )
        sweep = run_sweep(cfg)
        assert sweep.total_grains == 60

    def test_bad_parameters(self):
        with pytest.raises(ValueError, match="runs"):
            run_sweep(desk_sweep(runs=0))
        with pytest.raises(ValueError, match="at least one"):
            run_sweep(desk_sweep(P=()))
