"""
偏振约化与保真度测试
"""

import cmath
import math

import numpy as np
import pytest

from conftest import TOLERANCE, output_pair_state, phi_plus_terms
from fock.density import BELL_VECTORS, TwoQubitDensity, fidelity_phi_plus, reduce_to_polarization_pair
from fock.state import Branch, MixedState, vacuum
from models.modes import OUTPUT_BASIS
from utils.errors import ModeError, OccupancyError, ParameterError


def _phase_state(theta: float):
    return output_pair_state([
        (1 / math.sqrt(2), (("c1", "H"), ("d1", "H"))),
        (cmath.exp(1j * theta) / math.sqrt(2), (("c1", "V"), ("d1", "V"))),
    ])


def test_phi_plus_pair_reduces_to_pure_bell_state():
    state = output_pair_state(phi_plus_terms("c1", "d1", 1 / math.sqrt(2)))
    rho = reduce_to_polarization_pair(state, "c1", "d1")
    assert fidelity_phi_plus(rho) == pytest.approx(1.0, abs=TOLERANCE)
    assert rho.purity == pytest.approx(1.0, abs=TOLERANCE)
    assert rho.relative_phase == pytest.approx(0.0, abs=TOLERANCE)
    assert rho.pair == "c1d1"


@pytest.mark.parametrize("theta", [0.3, math.pi / 2, 2.0])
def test_relative_phase_and_fidelity(theta):
    rho = reduce_to_polarization_pair(_phase_state(theta), "c1", "d1")
    assert rho.relative_phase == pytest.approx(theta, abs=1e-9)
    assert fidelity_phi_plus(rho) == pytest.approx(math.cos(theta / 2) ** 2, abs=TOLERANCE)


def test_equal_mixture_of_phi_plus_and_phi_minus():
    plus = output_pair_state(phi_plus_terms("c1", "d1", 1 / math.sqrt(2)))
    minus = _phase_state(math.pi)
    mixture = MixedState((Branch(0.5, plus, "plus"), Branch(0.5, minus, "minus")))
    rho = reduce_to_polarization_pair(mixture, "c1", "d1")
    assert fidelity_phi_plus(rho) == pytest.approx(0.5, abs=TOLERANCE)
    assert rho.purity == pytest.approx(0.5, abs=TOLERANCE)


def test_partial_trace_over_other_pair_gives_mixed_state():
    """c1d2、c2d1 各一个 Φ+ 时，(c1, d1) 上为最大混合态"""
    parts = []
    for pol_1 in "HV":
        for pol_2 in "HV":
            parts.append((0.5, (("c1", pol_1), ("d2", pol_1), ("c2", pol_2), ("d1", pol_2))))
    rho = reduce_to_polarization_pair(output_pair_state(parts), "c1", "d1")
    np.testing.assert_allclose(rho.matrix, np.eye(4) / 4, atol=TOLERANCE)
    assert fidelity_phi_plus(rho) == pytest.approx(0.25, abs=TOLERANCE)


def test_missing_photon_raises_occupancy_error():
    with pytest.raises(OccupancyError):
        reduce_to_polarization_pair(vacuum(OUTPUT_BASIS), "c1", "d1")


def test_spatial_labels_must_match_parties():
    state = output_pair_state(phi_plus_terms("c1", "d1"))
    with pytest.raises(ModeError):
        reduce_to_polarization_pair(state, "d1", "c1")


def test_density_validation():
    with pytest.raises(ParameterError):
        TwoQubitDensity(np.eye(3))
    with pytest.raises(ParameterError):
        TwoQubitDensity(np.eye(4))
    bad = np.eye(4) / 4
    bad = bad.astype(complex)
    bad[0, 1] = 0.1j
    with pytest.raises(ParameterError):
        TwoQubitDensity(bad)


def test_from_vector_normalizes():
    rho = TwoQubitDensity.from_vector(BELL_VECTORS["psi-"] * 3)
    assert rho.fidelity_to(BELL_VECTORS["psi-"]) == pytest.approx(1.0, abs=TOLERANCE)
    assert fidelity_phi_plus(rho) == pytest.approx(0.0, abs=TOLERANCE)
