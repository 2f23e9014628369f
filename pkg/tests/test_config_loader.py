"""
实验配置加载测试
"""

import math
from pathlib import Path

import pytest

from models.channels import DriftParams
from models.experiment import ExperimentKind, GridAxis, SweepTarget
from utils.config_loader import load_config, parse_config
from utils.errors import ConfigError

SAMPLE_DIR = Path(__file__).resolve().parent.parent / "sample_configs"


def test_empty_document_gives_ideal_defaults():
    config = parse_config("")
    assert config.kind is ExperimentKind.PURIFY
    assert (config.noise.alpha, config.noise.beta, config.noise.delta, config.noise.eta) == (1.0, 0.0, 0.0, 0.0)
    assert config.drift.phi == 0.0
    assert config.source.r == 1.0
    assert config.source.pump_phase == 0.0


def test_empty_noise_section_keeps_defaults():
    assert parse_config("[noise]\n").noise.alpha == 1.0


def test_valid_noise_accepted():
    config = parse_config("[noise]\nalpha = 0.7\nbeta = 0.1\ndelta = 0.1\neta = 0.1\n")
    assert config.noise.eta == pytest.approx(0.1)


def test_simplex_violation_names_section():
    with pytest.raises(ConfigError) as excinfo:
        parse_config("[noise]\nalpha = 0.7\nbeta = 0.7\n")
    assert excinfo.value.key == "noise"
    assert "alpha+beta+delta+eta" in str(excinfo.value)


def test_alpha_completes_simplex():
    config = parse_config("[noise]\nbeta = 0.25\ndelta = 0.25\n")
    assert config.noise.alpha == pytest.approx(0.5)


@pytest.mark.parametrize(
    ("document", "key"),
    [
        ("[noise]\ngamma = 0.1\n", "noise.gamma"),
        ("[colour]\nred = 1\n", "colour"),
        ("[noise]\nalpha = abc\n", "noise.alpha"),
        ("[loss]\nm = 1.5\n", "loss.m"),
        ("[errors]\ne = 2\n", "errors.e"),
        ("[source]\np = 0.9\n", "source"),
        ("[sweep]\ne_start = 0\ne_stop = 1\ne_step = 0\n", "sweep.e_step"),
        ("[experiment]\nkind = plot\n", "experiment.kind"),
        ("[experiment]\ninput = chi\n", "experiment.input"),
        ("[drift]\nk = 2\n", "drift.delta_l"),
        ("[drift]\nphi = 2pi\n", "drift.phi"),
        ("[drift]\nphi = pi7\n", "drift.phi"),
        ("[source]\npump_phase = 2*\n", "source.pump_phase"),
    ],
)
def test_diagnostics_name_offending_key(document, key):
    with pytest.raises(ConfigError) as excinfo:
        parse_config(document)
    assert excinfo.value.key == key


def test_malformed_document():
    with pytest.raises(ConfigError):
        parse_config("alpha = 0.5\n")


def test_pi_expressions_and_path_difference():
    assert parse_config("[drift]\nphi = pi/7\n").drift.phi == pytest.approx(math.pi / 7)
    assert parse_config("[drift]\nk = 2*pi\ndelta_l = 0.5\n").drift.phi == pytest.approx(math.pi)
    assert parse_config("[drift]\nphi = -pi/2\n").drift.phi == pytest.approx(-math.pi / 2)
    assert parse_config("[drift]\nphi = pi / 4 * 2\n").drift.phi == pytest.approx(math.pi / 2)
    assert parse_config("[drift]\nphi = 1e-1*pi\n").drift.phi == pytest.approx(0.1 * math.pi)


def test_path_difference_matches_drift_model():
    config = parse_config("[drift]\nk = 2*pi\ndelta_l = 0.65\n")
    assert config.drift == DriftParams.from_path_difference(2 * math.pi, 0.65)


def test_overrides_take_precedence():
    config = parse_config("[errors]\ne = 0.1\n", {"errors.e": 0.3, "loss.m": None})
    assert config.e == pytest.approx(0.3)
    assert config.loss.m == 0.0
    with pytest.raises(ConfigError) as excinfo:
        parse_config("", {"noise.gamma": 0.1})
    assert excinfo.value.key == "noise.gamma"


def test_sweep_axes():
    config = parse_config("[sweep]\ntarget = drift\nphi_start = 0\nphi_stop = pi\nphi_step = pi/8\n")
    assert config.sweep.target is SweepTarget.DRIFT
    values = config.sweep.phi.values()
    assert len(values) == 9
    assert values[-1] == pytest.approx(math.pi)


def test_grid_axis_values_inclusive():
    assert GridAxis(start=0.0, stop=1.0, step=0.1).values() == [round(0.1 * i, 12) for i in range(11)]
    assert GridAxis.single(0.3).values() == [0.3]


def test_default_simplex_grid_size():
    assert len(parse_config("").sweep.simplex_points()) == 286


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.ini"))


@pytest.mark.parametrize("path", sorted(SAMPLE_DIR.glob("*.ini")), ids=lambda p: p.stem)
def test_sample_configs_load(path):
    assert load_config(str(path)).kind in set(ExperimentKind)
