"""
实验工作流测试：分派、产物与确定性
"""

import asyncio
from pathlib import Path

import pytest

from models.experiment import (
    ExperimentError, ExperimentKind, ExperimentOutput, ExperimentStatus, ExperimentStep, SweepTarget,
)
from protocol.closed_form import lossy_source_fidelity
from utils.config_loader import parse_config
from utils.errors import EXIT_INTERNAL, EXIT_OK, EXIT_USAGE
from utils.file_utils import FileUtils
from workflow.experiment_workflow import ExperimentWorkflow
from workflow.nodes.pdc_node import PDC_COLUMNS
from workflow.nodes.sweep_node import SWEEP_COLUMNS
from workflow.nodes.trace_node import TRACE_COLUMNS


def _run(settings, document: str, out: Path, overrides=None) -> ExperimentOutput:
    config = parse_config(document, overrides)
    return asyncio.run(ExperimentWorkflow(settings).run(config, str(out)))


def _read_rows(path: Path):
    return FileUtils.read_csv(str(path))


def test_trace_writes_csv_text_and_report(settings, tmp_path):
    out = tmp_path / "trace.csv"
    output = _run(settings, "[experiment]\nkind = trace\n", out)
    assert output.is_successful
    assert output.output_files == {
        "csv": str(out),
        "report": str(out.with_suffix(".json")),
        "text": str(out.with_suffix(".txt")),
    }
    assert out.read_text(encoding="utf-8").splitlines()[0] == ",".join(TRACE_COLUMNS)
    text = out.with_suffix(".txt").read_text(encoding="utf-8").splitlines()
    assert len(text) == 4
    assert text[-1].startswith("HWP3/HWP4")
    final_rows = [row for row in _read_rows(out) if row["stage"] == "HWP3/HWP4"]
    assert {row["occupation"] for row in final_rows} == {"c1H d1H", "c1V d1V", "c2H d2H", "c2V d2V"}
    assert all(row["amplitude"] == "0.5,0" for row in final_rows)


def test_purify_rows_inputs_first(settings, tmp_path):
    out = tmp_path / "purify.csv"
    output = _run(settings, "[noise]\nalpha = 0.7\nbeta = 0.1\ndelta = 0.1\neta = 0.1\n", out)
    assert output.is_successful
    assert output.columns[:5] == ["alpha", "beta", "delta", "eta", "phi"]
    rows = _read_rows(out)
    assert sum(float(row["probability"]) for row in rows) == pytest.approx(1.0, abs=1e-9)
    assert all(float(row["fidelity"]) == pytest.approx(1.0, abs=1e-9) for row in rows)


def test_pdc_row_matches_closed_form(settings, tmp_path):
    out = tmp_path / "pdc.csv"
    output = _run(settings, "[experiment]\nkind = pdc\n[source]\np = 0.1\n[loss]\nm = 0.3\n", out)
    assert output.is_successful
    assert output.columns == PDC_COLUMNS
    (row,) = _read_rows(out)
    assert float(row["intact_pair_fidelity"]) == pytest.approx(lossy_source_fidelity(0.1, 0.3), abs=1e-9)
    assert float(row["oracle_deviation"]) == pytest.approx(float(row["expected_deviation"]), abs=1e-9)


def test_bitflip_sweep_eleven_rows(settings, tmp_path):
    out = tmp_path / "bitflip.csv"
    output = _run(settings, "[experiment]\nkind = sweep\n[sweep]\ntarget = bitflip\n", out)
    assert output.is_successful
    assert output.columns == SWEEP_COLUMNS[SweepTarget.BITFLIP]
    rows = _read_rows(out)
    assert [float(row["e"]) for row in rows] == pytest.approx([0.1 * i for i in range(11)])
    for row in rows:
        assert abs(float(row["difference"])) < 1e-12
    assert float(rows[5]["closed_form_fidelity"]) == pytest.approx(0.625)


def test_loss_sweep_grid_order(settings, tmp_path):
    out = tmp_path / "loss.csv"
    document = (
        "[experiment]\nkind = sweep\n[sweep]\ntarget = loss\n"
        "p_start = 0.05\np_stop = 0.1\np_step = 0.05\nm_start = 0.1\nm_stop = 0.3\nm_step = 0.2\n"
    )
    output = _run(settings, document, out)
    assert output.is_successful
    rows = _read_rows(out)
    assert [(float(r["p"]), float(r["m"])) for r in rows] == [(0.05, 0.1), (0.05, 0.3), (0.1, 0.1), (0.1, 0.3)]
    for row in rows:
        expected = lossy_source_fidelity(float(row["p"]), float(row["m"]))
        assert float(row["intact_pair_fidelity"]) == pytest.approx(expected, abs=1e-9)


def test_drift_sweep_compensates(settings, tmp_path):
    out = tmp_path / "drift.csv"
    output = _run(settings, "[experiment]\nkind = sweep\n[sweep]\ntarget = drift\n", out)
    assert output.is_successful
    for row in _read_rows(out):
        assert float(row["compensated_fidelity"]) == pytest.approx(1.0, abs=1e-9)
        assert float(row["min_purity"]) == pytest.approx(1.0, abs=1e-9)
        assert float(row["conditional_fidelity"]) == pytest.approx(float(row["expected_fidelity"]), abs=1e-9)


def test_identical_configs_give_identical_bytes(settings, tmp_path):
    document = "[experiment]\nkind = sweep\n[sweep]\ntarget = simplex\nsimplex_step = 0.25\n"
    first = _run(settings, document, tmp_path / "a" / "simplex.csv")
    second = _run(settings, document, tmp_path / "b" / "simplex.csv")
    assert first.is_successful and second.is_successful
    for suffix in (".csv", ".json"):
        a = (tmp_path / "a" / "simplex").with_suffix(suffix).read_bytes()
        b = (tmp_path / "b" / "simplex").with_suffix(suffix).read_bytes()
        assert a == b
    assert len(first.rows) == 35


def test_unwritable_output_fails_with_internal_code(settings, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory", encoding="utf-8")
    output = _run(settings, "", blocker / "purify.csv")
    assert not output.is_successful
    assert output.status is ExperimentStatus.FAILED
    assert output.errors[0].step is ExperimentStep.CONFIG_CHECK
    assert ExperimentWorkflow.exit_code(output) == EXIT_INTERNAL


def test_parameter_error_in_node_is_usage_error(settings, tmp_path):
    output = _run(settings, "[experiment]\nkind = pdc\n[loss]\nm = 1\n", tmp_path / "pdc.csv")
    assert output.errors[0].step is ExperimentStep.PDC
    assert output.errors[0].error_type == "ParameterError"
    assert set(output.errors[0].model_dump()) == {"step", "error_type", "error_message"}
    assert ExperimentWorkflow.exit_code(output) == EXIT_USAGE
    assert not (tmp_path / "pdc.csv").exists()


def test_exit_code_mapping():
    ok = ExperimentOutput(kind=ExperimentKind.TRACE, status=ExperimentStatus.COMPLETED)
    assert ExperimentWorkflow.exit_code(ok) == EXIT_OK
    broken = ok.model_copy(update={
        "status": ExperimentStatus.FAILED,
        "errors": [ExperimentError(step=ExperimentStep.TRACE, error_type="InvariantViolation", error_message="x")],
    })
    assert ExperimentWorkflow.exit_code(broken) == EXIT_INTERNAL
