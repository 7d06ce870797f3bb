from pathlib import Path

import networkx as nx
import pytest

from chainrisk.errors import ErrorCode, ParseError
from chainrisk.ingest import (
    apply_estimates,
    dump_project_json,
    load_project,
    parse_patterson,
    parse_project_json,
    parse_risk_register,
    serialize_patterson,
)
from chainrisk.network import cpm_pass, makespan_of, validate_project
from chainrisk.network.generator import random_project
from tests.conftest import REGISTER_CSV, make_project, make_task

INSTANCES = sorted((Path(__file__).resolve().parent.parent / "data" / "patterson").glob("*.rcp"))


class TestValidateProject:
    def test_series_is_valid(self):
        project = make_project([make_task(i, 2.0) for i in (1, 2, 3)], arcs=[(1, 2), (2, 3)])
        report = validate_project(project)
        assert report.ok
        assert report.errors == ()
        assert report.warnings == ()

    def test_two_cycle(self):
        project = make_project([make_task(1, 1.0), make_task(2, 1.0)], arcs=[(1, 2), (2, 1)])
        report = validate_project(project)
        cycles = [f for f in report.errors if f.code is ErrorCode.CYCLE]
        assert len(cycles) == 1
        assert "[1, 2]" in cycles[0].message

    def test_estimate_order(self):
        bad = make_task(1, 5.0).model_copy(update={"est_safe": 4.0})
        report = validate_project(make_project([bad]))
        assert report.codes() == ["ESTIMATE_ORDER"]
        assert report.errors[0].task_id == 1

    def test_structural_errors(self):
        project = make_project(
            [make_task(1, 1.0, demand={"X": 1.0}), make_task(2, 1.0, demand={"R": 3.0})],
            arcs=[(1, 1), (1, 9), (1, 2), (1, 2)],
            resources={"R": 2.0},
        )
        codes = set(validate_project(project).codes())
        assert {"SELF_ARC", "DANGLING_ARC", "DUPLICATE_ARC", "UNKNOWN_RESOURCE", "DEMAND_EXCEEDS_CAPACITY"} <= codes

    def test_duplicate_and_invalid_ids(self):
        project = make_project([make_task(0, 1.0), make_task(2, 1.0), make_task(2, 1.0)])
        codes = set(validate_project(project).codes())
        assert {"INVALID_ID", "DUPLICATE_TASK"} <= codes

    def test_shape_warnings(self, diamond_project):
        assert validate_project(diamond_project).warnings == ()
        project = make_project([make_task(1, 1.0), make_task(2, 1.0), make_task(3, 1.0)], arcs=[(1, 3), (2, 3)])
        warnings = [w.code for w in validate_project(project).warnings]
        assert warnings == [ErrorCode.MULTIPLE_SOURCES]


class TestPatterson:
    def test_three_job_instance(self):
        project = parse_patterson("3 1\n2\n0 0 1 2\n4 2 1 3\n0 0 0\n")
        assert project.task_ids == [1, 2, 3]
        assert set(project.precedence) == {(1, 2), (2, 3)}
        assert project.task(2).est_avg == 4.0
        assert project.task(2).resource_demand == {"R1": 2.0}
        assert project.resources == {"R1": 2.0}

    def test_no_resources(self):
        project = parse_patterson("2 0\n0 1 2\n0 0\n")
        assert project.resources == {}
        assert project.precedence == ((1, 2),)

    def test_successor_out_of_range(self):
        with pytest.raises(ParseError) as exc:
            parse_patterson("3 0\n0 1 9\n0 0\n0 0\n")
        assert exc.value.code is ErrorCode.RANGE
        assert exc.value.location == "line 2"

    def test_non_integer_token(self):
        with pytest.raises(ParseError) as exc:
            parse_patterson("2 0\n0 x\n0 0\n")
        assert exc.value.code is ErrorCode.MALFORMED

    def test_truncated_and_trailing(self):
        with pytest.raises(ParseError) as exc:
            parse_patterson("2 0\n0 1 2\n")
        assert exc.value.code is ErrorCode.MALFORMED
        with pytest.raises(ParseError):
            parse_patterson("2 0\n0 1 2\n0 0\n7\n")

    def test_serialize_round_trip(self, rng):
        project = random_project(rng, 8, 1.5, resources={"R1": 3, "R2": 2}, max_demand=2, integral=True)
        # Patterson keeps a single duration per task
        project = project.with_tasks(
            [t.model_copy(update={"est_min": t.est_avg, "est_safe": t.est_avg, "est_max": t.est_avg}) for t in project.tasks]
        )
        again = parse_patterson(serialize_patterson(project))
        assert again.durations() == project.durations()
        assert set(again.precedence) == set(project.precedence)
        assert again.resources == project.resources
        assert [t.resource_demand for t in again.tasks] == [t.resource_demand for t in project.tasks]


@pytest.mark.parametrize("path", INSTANCES, ids=lambda p: p.name)
class TestBundledInstances:
    def test_valid(self, path):
        project = load_project(path)
        report = validate_project(project)
        assert report.ok, report.codes()
        assert report.warnings == ()
        assert project.task(1).est_avg == project.task(len(project.tasks)).est_avg == 0.0

    def test_round_trip(self, path):
        project = parse_patterson(path.read_text())
        assert parse_patterson(serialize_patterson(project)) == project


def test_instances_are_bundled():
    assert len(INSTANCES) >= 3


class TestProjectFiles:
    def test_json_round_trip(self, tmp_path, diamond_project):
        path = tmp_path / "p.json"
        path.write_text(dump_project_json(diamond_project))
        assert load_project(path) == diamond_project

    def test_patterson_by_extension(self, tmp_path):
        path = tmp_path / "j30.sm"
        path.write_text("2 0\n0 1 2\n0 0\n")
        assert len(load_project(path).tasks) == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError) as exc:
            load_project(tmp_path / "absent.json")
        assert exc.value.code is ErrorCode.IO
        assert "absent.json" in exc.value.message

    def test_malformed_json(self):
        with pytest.raises(ParseError) as exc:
            parse_project_json('{"tasks": [{"id": 1}]}')
        assert exc.value.code is ErrorCode.MALFORMED

    def test_apply_estimates(self, diamond_project):
        updated = apply_estimates(diamond_project, "task_id,min,avg,safe,max\n3,1,2,5,6\n")
        assert updated.task(3).est_avg == 2.0
        assert updated.task(3).est_safe == 5.0
        assert updated.task(2) == diamond_project.task(2)

    def test_apply_estimates_unknown_task(self, diamond_project):
        with pytest.raises(ParseError) as exc:
            apply_estimates(diamond_project, "task_id,min,avg,safe,max\n9,1,2,5,6\n")
        assert exc.value.code is ErrorCode.UNKNOWN_TASK


class TestRiskRegister:
    def test_field_mapping(self):
        events, matrix = parse_risk_register("risk_id,description,p,ic,ti,iq,d,rf:2\nR1,desc,8,6,7,5,4,0.5\n")
        r = events[0]
        assert (r.p, r.impact_cost, r.impact_time, r.impact_quality, r.d) == (8, 6, 7, 5, 4)
        assert matrix.entries == {(2, "R1"): 0.5}

    def test_blank_rf_columns(self):
        events, matrix = parse_risk_register("risk_id,description,p,ic,ti,iq,d,rf:2\nR1,desc,8,6,7,5,4,\n")
        assert len(events) == 1
        assert matrix.is_empty

    def test_score_out_of_range(self):
        with pytest.raises(ParseError) as exc:
            parse_risk_register("risk_id,description,p,ic,ti,iq,d\nR1,desc,12,6,7,5,4\n")
        assert exc.value.code is ErrorCode.RANGE
        assert exc.value.location == "risks:2:p"

    def test_unknown_task_column(self, diamond_project):
        with pytest.raises(ParseError) as exc:
            parse_risk_register("risk_id,description,p,ic,ti,iq,d,rf:9\nR1,d,8,6,7,5,4,0.5\n", diamond_project)
        assert exc.value.code is ErrorCode.UNKNOWN_TASK

    def test_register_rows(self, diamond_project):
        events, matrix = parse_risk_register(REGISTER_CSV, diamond_project)
        assert [e.id for e in events] == ["R1", "R2", "R3"]
        assert matrix.row(3) == {"R2": 0.4, "R3": 0.3}


class TestCpmPass:
    def test_series(self, series_project):
        windows = cpm_pass(series_project, series_project.durations())
        assert makespan_of(windows) == 7.0
        assert all(w.slack == 0.0 for w in windows.values())

    def test_diamond_slack(self):
        project = make_project(
            [make_task(1, 0.0), make_task(2, 5.0), make_task(3, 3.0), make_task(4, 0.0)],
            arcs=[(1, 2), (1, 3), (2, 4), (3, 4)],
        )
        windows = cpm_pass(project, project.durations())
        assert windows[3].slack == 2.0
        assert windows[2].slack == 0.0

    def test_fractional_series_is_critical(self):
        project = make_project([make_task(i, 0.1) for i in (1, 2, 3)], arcs=[(1, 2), (2, 3)])
        windows = cpm_pass(project, project.durations())
        assert all(w.slack == 0.0 for w in windows.values())

    def test_zero_slack_path_on_fractional_networks(self, rng):
        for _ in range(100):
            project = random_project(rng, int(rng.integers(2, 16)), float(rng.uniform(0.5, 2.0)), backbone=False)
            windows = cpm_pass(project, project.durations())
            makespan = makespan_of(windows)
            critical = {t for t, w in windows.items() if w.slack == 0.0}
            g = project.graph().subgraph(critical)
            sources = [t for t in critical if windows[t].early_start == 0.0]
            sinks = {t for t in critical if abs(windows[t].early_finish - makespan) <= 1e-9 * max(1.0, makespan)}
            reached = set(sources)
            for s in sources:
                reached |= nx.descendants(g, s)
            assert reached & sinks

    def test_makespan_ignores_task_order(self, rng):
        for _ in range(20):
            project = random_project(rng, 12, 1.5, backbone=False)
            shuffled = make_project(
                [project.tasks[i] for i in rng.permutation(len(project.tasks))],
                arcs=[project.precedence[i] for i in rng.permutation(len(project.precedence))],
            )
            assert makespan_of(cpm_pass(shuffled, shuffled.durations())) == makespan_of(
                cpm_pass(project, project.durations())
            )

    def test_zero_durations(self, diamond_project):
        windows = cpm_pass(diamond_project, {t: 0.0 for t in diamond_project.task_ids})
        assert all(w.early_start == w.late_finish == 0.0 for w in windows.values())

    def test_missing_duration(self, diamond_project):
        from chainrisk.errors import AnalysisError

        with pytest.raises(AnalysisError) as exc:
            cpm_pass(diamond_project, {1: 1.0})
        assert exc.value.code is ErrorCode.MISSING_DURATION


def test_generator_is_acyclic_and_valid(rng):
    for _ in range(10):
        project = random_project(rng, 15, 1.6)
        assert validate_project(project).ok
        assert all(a < b for a, b in project.precedence)
