"""
探测样式与后选择测试
"""

import pytest
from pydantic import ValidationError

from conftest import TOLERANCE
from fock.state import MixedState
from models.report import DetectionPattern, PatternClass
from optics.channels import two_pair_bitflip_ensemble
from optics.sources import ideal_hyper_pair, pdc_two_pair_state
from protocol.circuit import run_circuit
from protocol.detection import class_probability, classify_detection, outcome_for
from protocol.purification import four_mode_probability
from utils.errors import BasisMismatchError


@pytest.mark.parametrize(
    ("counts", "expected", "label"),
    [
        ((1, 1, 1, 1), PatternClass.FOUR_MODE, "1111"),
        ((1, 0, 1, 0), PatternClass.PAIR_COINCIDENCE, "c1d1"),
        ((1, 0, 0, 1), PatternClass.PAIR_COINCIDENCE, "c1d2"),
        ((0, 1, 1, 0), PatternClass.PAIR_COINCIDENCE, "c2d1"),
        ((2, 0, 1, 0), PatternClass.REJECTED, "2010"),
        ((1, 1, 0, 0), PatternClass.REJECTED, "1100"),
        ((0, 0, 0, 0), PatternClass.REJECTED, "0000"),
    ],
)
def test_pattern_classification(counts, expected, label):
    pattern = DetectionPattern.from_counts(counts)
    assert pattern.pattern_class is expected
    assert pattern.label == label


def test_pattern_total_bounded():
    with pytest.raises(ValidationError):
        DetectionPattern(c1=2, c2=2, d1=1)


def test_ideal_pair_splits_evenly_over_two_patterns():
    outcomes = classify_detection(run_circuit(ideal_hyper_pair()))
    assert [o.pattern.counts for o in outcomes] == [(0, 1, 0, 1), (1, 0, 1, 0)]
    for outcome in outcomes:
        assert outcome.probability == pytest.approx(0.5, abs=TOLERANCE)
        assert outcome.pattern_class is PatternClass.PAIR_COINCIDENCE
        assert outcome.conditional.conditioned
    assert class_probability(outcomes, PatternClass.PAIR_COINCIDENCE) == pytest.approx(1.0)
    assert outcome_for(outcomes, (1, 1, 1, 1)) is None


def test_detection_requires_output_basis():
    with pytest.raises(BasisMismatchError):
        classify_detection(ideal_hyper_pair())


def test_probabilities_sum_to_ensemble_weight():
    ensemble = two_pair_bitflip_ensemble(pdc_two_pair_state(), 0.3)
    outcomes = classify_detection(ensemble.map_states(run_circuit))
    assert sum(o.probability for o in outcomes) == pytest.approx(1.0, abs=1e-9)
    four_mode = outcome_for(outcomes, (1, 1, 1, 1))
    assert set(four_mode.provenance()) == {"bitflip=none", "bitflip=two"}


@pytest.mark.parametrize("e", [0.1, 0.5, 0.9])
def test_single_error_branch_never_reaches_four_modes(e):
    ensemble = two_pair_bitflip_ensemble(pdc_two_pair_state(), e)
    one_error = [b for b in ensemble.branches if b.tag == "bitflip=one"]
    assert one_error
    for branch in one_error:
        assert four_mode_probability(MixedState.pure(branch.state)) < 1e-12
