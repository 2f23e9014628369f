"""
闭式预测测试
"""

import pytest

from protocol.closed_form import (
    bosonic_lossy_source_fidelity, lossy_source_fidelity, lossy_source_oracle_deviation,
    lossy_source_oracle_fidelity, postselected_bitflip_fidelity,
)
from utils.errors import ParameterError


@pytest.mark.parametrize(
    ("e", "expected"),
    [(0.0, 1.0), (0.2, 0.65 / 0.68), (0.5, 0.625), (1.0, 0.25)],
)
def test_postselected_bitflip_fidelity(e, expected):
    assert postselected_bitflip_fidelity(e) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("e", [-0.1, 1.1])
def test_bitflip_probability_range(e):
    with pytest.raises(ParameterError):
        postselected_bitflip_fidelity(e)


@pytest.mark.parametrize(
    ("p", "m", "expected"),
    [(0.1, 0.1, 1.002 / 1.004), (0.1, 0.5, 1.05 / 1.1), (0.05, 0.0, 1.0)],
)
def test_lossy_source_fidelity(p, m, expected):
    assert lossy_source_fidelity(p, m) == pytest.approx(expected, abs=1e-12)


def test_spot_values():
    assert lossy_source_fidelity(0.1, 0.1) == pytest.approx(0.9980079, abs=1e-7)
    assert lossy_source_fidelity(0.1, 0.5) == pytest.approx(0.9545455, abs=1e-7)


@pytest.mark.parametrize("p", [0.05, 0.1])
@pytest.mark.parametrize("m", [0.05, 0.1, 0.3, 0.5])
def test_accountings_are_ordered(p, m):
    intact = lossy_source_fidelity(p, m)
    oracle = lossy_source_oracle_fidelity(p, m)
    assert oracle - intact == pytest.approx(lossy_source_oracle_deviation(p, m), abs=1e-12)
    assert lossy_source_oracle_deviation(p, m) == pytest.approx(0.5 * p * m ** 2 / (1 + 4 * p * m ** 2), abs=1e-12)
    assert intact < oracle < bosonic_lossy_source_fidelity(p, m) < 1.0


@pytest.mark.parametrize(("p", "m"), [(0.0, 0.1), (1.5, 0.1), (0.1, 1.0), (0.1, -0.2)])
def test_lossy_source_parameter_range(p, m):
    with pytest.raises(ParameterError):
        lossy_source_fidelity(p, m)
