"""
纯化线路测试：逐级演化与四种 Bell 输入的空间映射
"""

import pytest

from conftest import TOLERANCE, output_pair_state, phi_plus_terms
from fock.state import state_from_creations
from models.channels import BellMixtureParams
from models.modes import OUTPUT_BASIS, TRANSMISSION_BASIS, ModeId
from optics.channels import bell_mixture_channel
from optics.sources import ideal_hyper_pair
from protocol.circuit import SOURCE_STAGE, run_circuit, trace_evolution


def _bell_input(name: str):
    return bell_mixture_channel(ideal_hyper_pair(), BellMixtureParams.pure(name)).branches[0].state


def _transmission_state(parts):
    monomials = [(c, tuple(ModeId.of(s, p) for s, p in modes)) for c, modes in parts]
    return state_from_creations(TRANSMISSION_BASIS, monomials, normalize_result=False)


def test_phi_plus_stage_by_stage():
    trace = trace_evolution(ideal_hyper_pair())
    assert [label for label, _ in trace] == [SOURCE_STAGE, "HWP1/HWP2", "PBS_a/PBS_b", "HWP3/HWP4"]

    after_hwp = _transmission_state([
        (0.5, (("a1", "V"), ("b1", "V"))),
        (0.5, (("a1", "H"), ("b1", "H"))),
        (0.5, (("a2", "H"), ("b2", "H"))),
        (0.5, (("a2", "V"), ("b2", "V"))),
    ])
    after_pbs = output_pair_state([
        (0.5, (("c2", "V"), ("d2", "V"))),
        (0.5, (("c1", "H"), ("d1", "H"))),
        (0.5, (("c2", "H"), ("d2", "H"))),
        (0.5, (("c1", "V"), ("d1", "V"))),
    ])
    final = output_pair_state(phi_plus_terms("c1", "d1") + phi_plus_terms("c2", "d2"))

    assert trace[0][1].allclose(ideal_hyper_pair())
    assert trace[1][1].allclose(after_hwp, TOLERANCE)
    assert trace[2][1].allclose(after_pbs, TOLERANCE)
    assert trace[3][1].allclose(final, TOLERANCE)


@pytest.mark.parametrize(
    ("name", "expected_parts"),
    [
        ("phi+", phi_plus_terms("c1", "d1") + phi_plus_terms("c2", "d2")),
        ("phi-", phi_plus_terms("c2", "d2") + phi_plus_terms("c1", "d1", -0.5)),
        ("psi+", phi_plus_terms("c2", "d1") + phi_plus_terms("c1", "d2")),
        ("psi-", phi_plus_terms("c2", "d1") + phi_plus_terms("c1", "d2", -0.5)),
    ],
)
def test_bell_inputs_map_to_phi_plus_in_spatial_superposition(name, expected_parts):
    output = run_circuit(_bell_input(name))
    assert output.basis == OUTPUT_BASIS
    assert output.allclose(output_pair_state(expected_parts), TOLERANCE)
    assert output.is_normalized
