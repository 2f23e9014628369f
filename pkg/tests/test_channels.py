"""
信道噪声测试
"""

import cmath
from collections import defaultdict

import pytest
from pydantic import ValidationError

from conftest import TOLERANCE
from fock.state import MixedState, apply_mode_map
from fock.tags import tag_fields
from models.channels import BellMixtureParams, DriftParams, LossParams
from models.modes import ModeId, Party
from optics.channels import (
    bell_mixture_channel, classify_two_pair_survivors, pair_resolved_loss, pauli_x, pauli_z,
    photon_loss, single_pair_bitflip_ensemble, spatial_drift, two_pair_bitflip_ensemble,
)
from optics.sources import ideal_hyper_pair, pdc_two_pair_state
from utils.errors import OccupancyError, ParameterError


def _amplitude(state, *labels):
    counts = {ModeId.of(label[:2], label[2]): 1 for label in labels}
    return state.amplitude(counts)


def test_bell_mixture_weights_and_tags():
    params = BellMixtureParams(alpha=0.7, beta=0.1, delta=0.1, eta=0.1)
    mixture = bell_mixture_channel(ideal_hyper_pair(), params)
    assert mixture.weight_by_tag() == pytest.approx(
        {"error=phi+": 0.7, "error=phi-": 0.1, "error=psi+": 0.1, "error=psi-": 0.1}
    )


def test_bell_mixture_omits_zero_weight_branches():
    mixture = bell_mixture_channel(ideal_hyper_pair(), BellMixtureParams())
    assert mixture.tags == ["error=phi+"]


def test_simplex_violation_rejected():
    with pytest.raises(ValidationError):
        BellMixtureParams(alpha=0.7, beta=0.7, delta=0.0, eta=0.0)


@pytest.mark.parametrize(
    ("name", "expected"),
    [
        ("phi-", {("a1H", "b1H"): 0.5, ("a1V", "b1V"): -0.5}),
        ("psi+", {("a1H", "b1V"): 0.5, ("a1V", "b1H"): 0.5}),
        ("psi-", {("a1H", "b1V"): 0.5, ("a1V", "b1H"): -0.5}),
    ],
)
def test_bob_only_pauli_errors(name, expected):
    state = bell_mixture_channel(ideal_hyper_pair(), BellMixtureParams.pure(name)).branches[0].state
    for labels, amplitude in expected.items():
        assert _amplitude(state, *labels) == pytest.approx(amplitude, abs=TOLERANCE)
    # 空间态不变：下路径上的偏振关联与上路径相同
    lower = tuple(label.replace("1", "2") for label in next(iter(expected)))
    assert _amplitude(state, *lower) == pytest.approx(0.5, abs=TOLERANCE)


def test_pauli_maps_only_touch_one_party():
    alice_x = pauli_x(Party.ALICE)
    bob_z = pauli_z(Party.BOB)
    assert alice_x.is_isometry() and bob_z.is_isometry()
    flipped = apply_mode_map(ideal_hyper_pair(), alice_x)
    assert _amplitude(flipped, "a1V", "b1H") == pytest.approx(0.5)


def test_single_pair_channel_requires_one_photon_per_party():
    with pytest.raises(OccupancyError):
        bell_mixture_channel(pdc_two_pair_state(), BellMixtureParams())


@pytest.mark.parametrize("phi", [0.0, 0.9, cmath.pi])
def test_spatial_drift_phases_lower_path(phi):
    drifted = spatial_drift(ideal_hyper_pair(), DriftParams(phi=phi))
    assert _amplitude(drifted, "a1H", "b1H") == pytest.approx(0.5, abs=TOLERANCE)
    assert _amplitude(drifted, "a2V", "b2V") == pytest.approx(0.5 * cmath.exp(1j * phi), abs=TOLERANCE)


def test_spatial_drift_on_mixture_keeps_weights():
    mixture = bell_mixture_channel(ideal_hyper_pair(), BellMixtureParams(alpha=0.5, delta=0.5))
    drifted = spatial_drift(mixture, DriftParams(phi=1.0))
    assert isinstance(drifted, MixedState)
    assert drifted.weight_by_tag() == mixture.weight_by_tag()


def test_drift_from_path_difference():
    drift = DriftParams.from_path_difference(2.0, 4.0)
    assert drift.phi == 8.0
    assert drift.reduced_phi == pytest.approx(8.0 - 2 * cmath.pi)


def test_single_pair_bitflip_ensemble():
    mixture = single_pair_bitflip_ensemble(ideal_hyper_pair(), 0.2)
    assert mixture.weight_by_tag() == pytest.approx({"bitflip=none": 0.8, "bitflip=one": 0.2})
    with pytest.raises(ParameterError):
        single_pair_bitflip_ensemble(ideal_hyper_pair(), 1.5)


@pytest.mark.parametrize("e", [0.1, 0.5])
def test_two_pair_bitflip_weights(e):
    mixture = two_pair_bitflip_ensemble(pdc_two_pair_state(), e)
    assert mixture.weight_by_tag() == pytest.approx({
        "bitflip=none": (1 - e) ** 2,
        "bitflip=one": 2 * e * (1 - e),
        "bitflip=two": e ** 2,
    })


def test_two_pair_bitflip_rejects_mismatched_state():
    with pytest.raises(ParameterError):
        two_pair_bitflip_ensemble(ideal_hyper_pair(), 0.1)


def _weight_by_lost(mixture: MixedState):
    by_lost = defaultdict(float)
    for tag, weight in mixture.weight_by_tag().items():
        by_lost[tag_fields(tag)["lost"]] += weight
    return dict(by_lost)


@pytest.mark.parametrize("m", [0.1, 0.3, 0.5])
def test_single_pair_loss_split(m):
    by_lost = _weight_by_lost(photon_loss(ideal_hyper_pair(), LossParams(m=m)))
    assert by_lost == pytest.approx({"0": (1 - m) ** 2, "1": 2 * m * (1 - m), "2": m ** 2}, abs=TOLERANCE)


@pytest.mark.parametrize("m", [round(0.1 * i, 1) for i in range(11)])
def test_loss_conserves_weight_on_grid(m):
    for source in (ideal_hyper_pair(), pdc_two_pair_state()):
        lossy = photon_loss(source, LossParams(m=m))
        assert lossy.total_weight == pytest.approx(1.0, abs=TOLERANCE)
        assert all(branch.state.is_normalized for branch in lossy.branches)


@pytest.mark.parametrize("m", [0.1, 0.3, 0.5])
def test_bosonic_loss_conserves_weight(m):
    lossy = photon_loss(pdc_two_pair_state(), LossParams(m=m))
    assert lossy.total_weight == pytest.approx(1.0, abs=TOLERANCE)
    by_lost = _weight_by_lost(lossy)
    assert by_lost["2"] == pytest.approx(6 * m ** 2 * (1 - m) ** 2, abs=TOLERANCE)
    assert by_lost["0"] == pytest.approx((1 - m) ** 4, abs=TOLERANCE)


def test_zero_loss_is_identity():
    mixture = MixedState.pure(ideal_hyper_pair())
    assert photon_loss(mixture, LossParams(m=0.0)) is mixture


@pytest.mark.parametrize("m", [0.1, 0.3, 0.5])
def test_pair_resolved_two_lost_split(m):
    single = MixedState.pure(ideal_hyper_pair())
    lossy = pair_resolved_loss(single, single, LossParams(m=m))
    assert lossy.total_weight == pytest.approx(1.0, abs=TOLERANCE)
    kept = defaultdict(float)
    for tag, weight in lossy.weight_by_tag().items():
        kept[tag_fields(tag)["kept"]] += weight
    expected = 2 * m ** 2 * (1 - m) ** 2
    assert kept["perfect"] == pytest.approx(expected, abs=TOLERANCE)
    assert kept["cross"] == pytest.approx(expected, abs=TOLERANCE)
    assert kept["same-party"] == pytest.approx(expected, abs=TOLERANCE)
    assert kept["perfect"] + kept["cross"] + kept["same-party"] == pytest.approx(6 * m ** 2 * (1 - m) ** 2)


@pytest.mark.parametrize(
    ("lost", "expected"),
    [
        ((1, 1, 0, 0), "perfect"),
        ((0, 0, 1, 1), "perfect"),
        ((1, 0, 1, 0), "same-party"),
        ((1, 0, 0, 1), "cross"),
        ((0, 0, 0, 0), "lost0"),
        ((1, 1, 1, 0), "lost3"),
    ],
)
def test_classify_two_pair_survivors(lost, expected):
    assert classify_two_pair_survivors(lost) == expected
