import json
from pathlib import Path

import pandas as pd
import pytest

from chainrisk.errors import ErrorCode, ParseError
from chainrisk.main import build_parser, main, resolve_config
from chainrisk.models import BufferMethod
from tests.conftest import REGISTER_CSV


def error_report(stderr):
    lines = [line for line in stderr.splitlines() if line.startswith('{"error"')]
    assert lines, stderr
    return json.loads(lines[-1])["error"]


def run(*argv):
    return main([str(a) for a in argv])


class TestExitCodes:
    def test_missing_project(self, tmp_path, capsys):
        missing = tmp_path / "nope.json"
        assert run("validate", "--project", missing, "--out", tmp_path / "out") == 3
        error = error_report(capsys.readouterr().err)
        assert error["code"] == "IO"
        assert str(missing) in error["message"]

    def test_invalid_project(self, tmp_path, capsys):
        path = tmp_path / "cycle.json"
        task = {"min": 1, "avg": 1, "safe": 1, "max": 1}
        path.write_text(json.dumps({"tasks": [{"id": 1, **task}, {"id": 2, **task}], "arcs": [[1, 2], [2, 1]]}))
        assert run("schedule", "--project", path, "--out", tmp_path / "out") == 2
        error = error_report(capsys.readouterr().err)
        assert error["stage"] == "validate"
        assert "CYCLE" in error["message"]
        assert not (tmp_path / "out" / "summary.txt").exists()

    def test_register_error_names_stage(self, input_files, tmp_path, capsys):
        bad = tmp_path / "bad_risks.csv"
        bad.write_text(REGISTER_CSV.replace("rf:3", "rf:9"))
        assert run("assess", "--project", input_files["project"], "--risks", bad, "--out", tmp_path / "out") == 3
        error = error_report(capsys.readouterr().err)
        assert error["code"] == ErrorCode.UNKNOWN_TASK.value
        assert error["stage"] == "assess"
        assert error["message"].startswith("assess: ")

    def test_invalid_config_value(self, input_files, tmp_path, capsys):
        assert run("simulate", "--project", input_files["project"], "--reps", 0, "--out", tmp_path / "out") == 3
        assert error_report(capsys.readouterr().err)["code"] == "INVALID_CONFIG"


class TestReports:
    def test_optional_stages_skipped(self, input_files, tmp_path):
        out = tmp_path / "out"
        assert run("run", "--project", input_files["project"], "--out", out) == 0
        summary = (out / "summary.txt").read_text()
        assert "risk assessment: skipped" in summary
        assert "simulation: skipped" in summary
        assert "mitigation: skipped" in summary
        assert not (out / "makespan_hist.csv").exists()
        assert not (out / "risks.csv").exists()
        stages = {s["stage"]: s["status"] for s in json.loads((out / "bundle.json").read_text())["stages"]}
        assert stages == {
            "validate": "completed",
            "assess": "skipped",
            "schedule": "completed",
            "simulate": "skipped",
            "mitigate": "skipped",
        }

    def test_full_run(self, input_files, tmp_path):
        out = tmp_path / "out"
        code = run(
            "run",
            "--project", input_files["project"],
            "--risks", input_files["risks"],
            "--fault-tree", input_files["fault_tree"],
            "--reps", 3000,
            "--seed", 17,
            "--out", out,
        )
        assert code == 0
        for name in ("bundle.json", "mitigation.json", "risks.csv", "schedule.csv", "buffers.csv",
                     "makespan_hist.csv", "summary.txt", "mitigation.txt"):
            assert (out / name).exists(), name

        bundle = json.loads((out / "bundle.json").read_text())
        chains = len(bundle["plan"]["feeding_chains"])
        buffers = pd.read_csv(out / "buffers.csv")
        assert len(buffers) == len(BufferMethod) * (chains + 1)
        assert set(buffers["method"]) == {m.value for m in BufferMethod}

        hist = pd.read_csv(out / "makespan_hist.csv")
        assert list(hist.columns) == ["bin_lower", "bin_upper", "count"]
        assert hist["count"].sum() == 3000

        risks = pd.read_csv(out / "risks.csv")
        assert list(risks.columns) == ["risk_id", "ai", "rcn", "rank"]
        assert list(risks["rank"]) == [1, 2, 3]
        assert set(risks["risk_id"]) == {"R1", "R2", "R3"}

        schedule = pd.read_csv(out / "schedule.csv")
        assert list(schedule["kind"]).count("task") == 4
        pb = schedule[schedule["kind"] == "project_buffer"].iloc[0]
        assert pb["finish"] == pytest.approx(bundle["buffered"]["cpm"]["buffered_completion"])

        assert bundle["mitigation"]["top_event_probability"] == pytest.approx(0.235)

    def test_ratio_matches_completions(self, input_files, tmp_path):
        out = tmp_path / "out"
        assert run("schedule", "--project", input_files["project"], "--out", out, "--format", "json", "text") == 0
        bundle = json.loads((out / "bundle.json").read_text())
        expected = bundle["buffered"]["cpm"]["buffered_completion"] / bundle["buffered"]["apd"]["buffered_completion"]
        line = next(l for l in (out / "summary.txt").read_text().splitlines() if l.startswith("C&PM/APD ratio: "))
        assert line == f"C&PM/APD ratio: {expected:.6f}"
        assert not (out / "schedule.csv").exists()

    def test_single_method_ratio_unavailable(self, input_files, tmp_path):
        out = tmp_path / "out"
        assert run("schedule", "--project", input_files["project"], "--method", "rsem", "--out", out) == 0
        assert "C&PM/APD ratio: n/a" in (out / "summary.txt").read_text()
        assert len(pd.read_csv(out / "buffers.csv")) == 2

    def test_worker_count_leaves_bundle_unchanged(self, input_files, tmp_path):
        outputs = []
        for workers in (1, 2):
            out = tmp_path / f"w{workers}"
            code = run(
                "simulate",
                "--project", input_files["project"],
                "--risks", input_files["risks"],
                "--reps", 5000,
                "--workers", workers,
                "--out", out,
                "--format", "json",
            )
            assert code == 0
            outputs.append((out / "bundle.json").read_bytes())
        assert outputs[0] == outputs[1]

    def test_dump_samples(self, input_files, tmp_path):
        out = tmp_path / "out"
        code = run(
            "simulate", "--project", input_files["project"], "--risks", input_files["risks"],
            "--reps", 100, "--out", out, "--dump-samples",
        )
        assert code == 0
        samples = [float(x) for x in (out / "makespans.txt").read_text().splitlines()]
        bundle = json.loads((out / "bundle.json").read_text())
        assert len(samples) == 100
        assert min(samples) == bundle["simulation"]["minimum"]
        assert max(samples) == bundle["simulation"]["maximum"]

    def test_mitigate_needs_no_project(self, input_files, tmp_path):
        out = tmp_path / "out"
        assert run("mitigate", "--fault-tree", input_files["fault_tree"], "--out", out) == 0
        bundle = json.loads((out / "bundle.json").read_text())
        assert [s["stage"] for s in bundle["stages"]] == ["mitigate"]
        assert bundle["plan"] is None
        assert (out / "mitigation.txt").read_text().startswith("Top event: late delivery")


class TestCompare:
    instances = sorted((Path(__file__).resolve().parent.parent / "data" / "patterson").glob("*.rcp"))

    def test_bundled_instances(self, tmp_path):
        out = tmp_path / "out"
        assert run("compare", *self.instances, "--safety-factor", 2.0, "--out", out) == 0
        frame = pd.read_csv(out / "comparison.csv")
        assert list(frame.columns) == [
            "instance", "tasks", "feeding_chains", "makespan", "cpm", "rsem", "apd", "cpm_apd_ratio",
        ]
        assert list(frame["instance"]) == [p.name for p in self.instances]
        assert (frame["cpm"] > frame["makespan"]).all()
        assert frame["cpm_apd_ratio"].tolist() == pytest.approx((frame["cpm"] / frame["apd"]).tolist())
        assert (out / "comparison.txt").read_text().startswith(f"instances: {len(self.instances)}\n")

    def test_json_project_keeps_its_safety(self, input_files, tmp_path):
        out = tmp_path / "out"
        assert run("compare", input_files["project"], "--method", "cpm", "--out", out) == 0
        schedule_out = tmp_path / "schedule"
        assert run("schedule", "--project", input_files["project"], "--method", "cpm", "--out", schedule_out) == 0
        bundle = json.loads((schedule_out / "bundle.json").read_text())
        frame = pd.read_csv(out / "comparison.csv")
        assert list(frame.columns) == ["instance", "tasks", "feeding_chains", "makespan", "cpm", "cpm_apd_ratio"]
        assert frame["cpm"].iloc[0] == pytest.approx(bundle["buffered"]["cpm"]["buffered_completion"])
        assert "C&PM/APD ratio: n/a" in (out / "comparison.txt").read_text()

    def test_invalid_instance(self, tmp_path, capsys):
        bad = tmp_path / "cycle.rcp"
        bad.write_text("2 0\n1 1 2\n1 1 1\n")
        assert run("compare", self.instances[0], bad, "--out", tmp_path / "out") == 2
        error = error_report(capsys.readouterr().err)
        assert error["stage"] == "compare"
        assert error["code"] == "CYCLE"
        assert not (tmp_path / "out" / "comparison.csv").exists()

    def test_missing_instance(self, tmp_path, capsys):
        assert run("compare", tmp_path / "absent.rcp", "--out", tmp_path / "out") == 3
        assert error_report(capsys.readouterr().err)["code"] == "IO"


class TestResolveConfig:
    def parse(self, *argv):
        return resolve_config(build_parser().parse_args([str(a) for a in argv]))

    def test_defaults(self):
        cfg = self.parse("run")
        assert cfg.methods == tuple(BufferMethod)
        assert cfg.replications == 10000
        assert cfg.seed == 42

    def test_flags_override_config_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"replications": 300, "seed": 9, "methods": "apd"}))
        cfg = self.parse("simulate", "--config", path, "--seed", 5)
        assert cfg.replications == 300
        assert cfg.seed == 5
        assert cfg.methods == (BufferMethod.APD,)
        assert cfg.stages == ("validate", "schedule", "simulate")

    def test_bad_config_document(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("[1, 2]")
        with pytest.raises(ParseError) as exc:
            self.parse("run", "--config", path)
        assert exc.value.code is ErrorCode.INVALID_CONFIG
