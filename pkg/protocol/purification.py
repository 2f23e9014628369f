"""
纯化流程

单对光源的确定性纯化、两对发射比特翻转下的四模式后选择，
以及有损参量下转换光源的完整链路。
"""

import logging
import math
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from fock.density import fidelity_phi_plus, reduce_to_polarization_pair
from fock.state import Branch, MixedState, apply_mode_map, as_mixture, combine
from fock.tags import tag_fields
from models.channels import DriftParams, LossParams, PdcParams
from models.modes import OUTPUT_BASIS, modes_of
from models.report import (
    DetectionPattern, PatternClass, PatternOutcome, PdcReport, PurificationReport, SourceAccounting,
)
from optics.channels import (
    pair_resolved_loss, photon_loss, require_single_pair, single_pair_bitflip_ensemble,
    two_pair_bitflip_ensemble,
)
from optics.elements import extend, phase_shift
from optics.sources import pdc_emission_ensemble, pdc_single_pair_state, pdc_two_pair_state
from protocol.circuit import run_circuit
from protocol.closed_form import lossy_source_fidelity, lossy_source_oracle_deviation
from protocol.detection import DetectionOutcome, classify_detection, outcome_for
from utils.errors import InvariantViolation, OccupancyError

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-9
FOUR_MODE_COUNTS = (1, 1, 1, 1)


def compensate_phase(state: MixedState, pattern: DetectionPattern, theta: float) -> MixedState:
    """在该样式 Bob 输出模式的 V 分量上乘 e^{-iθ}"""
    pair = pattern.coincidence_pair
    if pair is None:
        raise OccupancyError(f"样式 {pattern.label} 不是双模符合，无法补偿")
    bob_v = modes_of(pair[1])[1]
    correction = extend(phase_shift((bob_v,), -theta), OUTPUT_BASIS)
    return state.map_states(lambda s: apply_mode_map(s, correction))


def _run_and_classify(mixture: MixedState) -> List[DetectionOutcome]:
    outputs = mixture.map_states(run_circuit)
    outcomes = classify_detection(outputs)
    total = sum(o.probability for o in outcomes)
    if abs(total - mixture.total_weight) > PROBABILITY_TOLERANCE:
        raise InvariantViolation(f"探测样式概率之和 {total} 与输入权重 {mixture.total_weight} 不符")
    return outcomes


def _branch_fidelities(outcome: DetectionOutcome) -> List[Tuple[Branch, float]]:
    """接受样式中每个分支单独约化后的保真度"""
    alice, bob = outcome.pattern.coincidence_pair
    results = []
    for branch in outcome.conditional.branches:
        rho = reduce_to_polarization_pair(branch.state, alice, bob)
        results.append((branch, fidelity_phi_plus(rho)))
    return results


def _describe_outcome(
    outcome: DetectionOutcome,
    compensate: bool,
    provenance: Optional[Dict[str, float]] = None,
) -> PatternOutcome:
    pattern = outcome.pattern
    fields = {
        "pattern": pattern,
        "pattern_class": outcome.pattern_class,
        "probability": outcome.probability,
        "accepted": outcome.pattern_class is PatternClass.PAIR_COINCIDENCE,
        "provenance": provenance if provenance is not None else outcome.provenance(),
    }
    if not fields["accepted"]:
        return PatternOutcome(**fields)

    alice, bob = pattern.coincidence_pair
    rho = reduce_to_polarization_pair(outcome.conditional, alice, bob)
    fields.update(
        reduced_pair=(alice, bob),
        density=rho.matrix,
        fidelity=fidelity_phi_plus(rho),
        relative_phase=rho.relative_phase,
        purity=rho.purity,
    )
    if compensate:
        corrected = compensate_phase(outcome.conditional, pattern, rho.relative_phase)
        fields["compensated_fidelity"] = fidelity_phi_plus(reduce_to_polarization_pair(corrected, alice, bob))
    return PatternOutcome(**fields)


def _weighted_average(outcomes: Iterable[PatternOutcome], attribute: str) -> Optional[float]:
    accepted = [o for o in outcomes if o.accepted]
    total = sum(o.probability for o in accepted)
    if total <= 0.0:
        return None
    return float(sum(o.probability * getattr(o, attribute) for o in accepted) / total)


def _phase_difference(measured: float, expected: float) -> float:
    return abs(math.remainder(measured - expected, 2 * math.pi))


def purify(input_mixture: MixedState, drift: DriftParams = DriftParams()) -> PurificationReport:
    """
    单对光源经 Bell 对角噪声与空间相位漂移后的纯化

    接受所有双模符合样式，给出每个样式的条件偏振态、对 Φ+ 的保真度、
    测得的 HH/VV 相对相位，以及按该相位补偿后的保真度。
    """
    mixture = as_mixture(input_mixture)
    for branch in mixture.branches:
        require_single_pair(branch.state)

    outcomes = _run_and_classify(mixture)
    described = [_describe_outcome(o, compensate=True) for o in outcomes]

    for item in described:
        if not item.accepted or item.purity < 1.0 - PROBABILITY_TOLERANCE:
            continue
        if item.fidelity < 1.0 - PROBABILITY_TOLERANCE and _phase_difference(item.relative_phase, drift.reduced_phi) > PROBABILITY_TOLERANCE:
            logger.warning(
                "样式 %s 测得相对相位 %.6f，与记录的漂移 %.6f 不一致",
                item.pattern.label, item.relative_phase, drift.reduced_phi,
            )

    accepted = sum(o.probability for o in described if o.accepted)
    total = sum(o.probability for o in described)
    report = PurificationReport(
        outcomes=described,
        accepted_probability=accepted,
        rejected_probability=total - accepted,
        conditional_fidelity=_weighted_average(described, "fidelity"),
        compensated_fidelity=_weighted_average(described, "compensated_fidelity"),
        drift_phi=drift.reduced_phi,
        provenance=mixture.weight_by_tag(),
    )
    logger.info(
        "纯化完成: 接受概率 %.12g, 条件保真度 %s",
        report.accepted_probability, report.conditional_fidelity,
    )
    return report


def postselected_bitflip_oracle(e: float) -> float:
    """
    两对发射比特翻转下四模式后选择的精确保真度

    两对态经成对比特翻转、线路与四模式符合后选择，约化到 (c1, d1) 上求对 Φ+ 的保真度。
    """
    ensemble = two_pair_bitflip_ensemble(pdc_two_pair_state(), e)
    outcomes = _run_and_classify(ensemble)
    four_mode = outcome_for(outcomes, FOUR_MODE_COUNTS)
    if four_mode is None:
        raise InvariantViolation("四模式符合概率为 0")
    return fidelity_phi_plus(reduce_to_polarization_pair(four_mode.conditional, "c1", "d1"))


def four_mode_probability(mixture: MixedState) -> float:
    """线路输出在 (1,1,1,1) 样式上的概率"""
    outcome = outcome_for(_run_and_classify(mixture), FOUR_MODE_COUNTS)
    return 0.0 if outcome is None else outcome.probability


def _bitflip_stage(params: PdcParams, e: float) -> List[Tuple[float, MixedState, str]]:
    """发射系综逐分支加上比特翻转，返回 combine 所需的 (权重, 系综, 前缀)"""
    parts = []
    for branch in pdc_emission_ensemble(params).branches:
        if branch.tag == "single-pair":
            flipped = single_pair_bitflip_ensemble(branch.state, e)
        elif branch.tag == "two-pair":
            flipped = two_pair_bitflip_ensemble(branch.state, e, params)
        else:
            flipped = as_mixture(branch.state)
        parts.append((branch.weight, flipped, f"source={branch.tag}"))
    return parts


def bosonic_lossy_ensemble(params: PdcParams, e: float, m: float) -> MixedState:
    """两对光子作为不可区分玻色子整体经受损耗"""
    return photon_loss(combine(_bitflip_stage(params, e)), LossParams(m=m))


def pair_resolved_lossy_ensemble(params: PdcParams, e: float, m: float) -> MixedState:
    """两对发射按可区分的两对分别损耗，标签带有幸存组合分类"""
    loss = LossParams(m=m)
    emission = pdc_emission_ensemble(params)
    single = single_pair_bitflip_ensemble(pdc_single_pair_state(params), e)
    parts = []
    for branch in emission.branches:
        if branch.tag == "two-pair":
            lossy = pair_resolved_loss(single, single, loss)
        elif branch.tag == "single-pair":
            lossy = photon_loss(single, loss)
        else:
            lossy = photon_loss(as_mixture(branch.state), loss)
        parts.append((branch.weight, lossy, f"source={branch.tag}"))
    return combine(parts)


def _is_credited(tag: str) -> bool:
    """只计单对事件与两对中某一对完整保留的事件"""
    fields = tag_fields(tag)
    return fields.get("source") == "single-pair" or fields.get("kept") == "perfect"


def _accounting_key(tag: str) -> str:
    fields = tag_fields(tag)
    source = fields.get("source", "")
    if source == "two-pair":
        return f"two-pair/{fields.get('kept', 'unknown')}"
    return source


def _coarsen(weights: Dict[str, float]) -> Dict[str, float]:
    merged: Dict[str, float] = {}
    for tag, weight in weights.items():
        key = _accounting_key(tag)
        merged[key] = merged.get(key, 0.0) + weight
    return dict(sorted(merged.items()))


def _accepted_fidelity_sums(
    outcomes: Sequence[DetectionOutcome],
    credited: Callable[[str], bool],
) -> Tuple[float, float, float]:
    """(接受概率, 全部分支的 Σp·F, 仅计入 credited 分支的 Σp·F)"""
    accepted = oracle = intact = 0.0
    for outcome in outcomes:
        if outcome.pattern_class is not PatternClass.PAIR_COINCIDENCE:
            continue
        accepted += outcome.probability
        for branch, fidelity in _branch_fidelities(outcome):
            contribution = outcome.probability * branch.weight * fidelity
            oracle += contribution
            if credited(branch.tag):
                intact += contribution
    return accepted, oracle, intact


def _source_accounting(outcomes: Sequence[DetectionOutcome]) -> SourceAccounting:
    accounting = {"single_pair": 0.0, "perfect_pair": 0.0, "cross_pair": 0.0, "other": 0.0}
    for outcome in outcomes:
        if outcome.pattern_class is not PatternClass.PAIR_COINCIDENCE:
            continue
        for tag, weight in outcome.provenance().items():
            fields = tag_fields(tag)
            if fields.get("source") == "single-pair":
                accounting["single_pair"] += weight
            elif fields.get("kept") == "perfect":
                accounting["perfect_pair"] += weight
            elif fields.get("kept") == "cross":
                accounting["cross_pair"] += weight
            else:
                accounting["other"] += weight
    return SourceAccounting(**accounting)


def pdc_pipeline(params: PdcParams, e: float, m: float) -> PdcReport:
    """
    有损参量下转换光源的完整链路

    光源 → 比特翻转 → 损耗 → 线路 → 探测，按双模符合接受。同时给出三种保真度：
    只计完整保留对的记账、两对可区分的精确值、以及全玻色不可区分模型的精确值。
    """
    closed_form = lossy_source_fidelity(params.p, m)
    resolved = pair_resolved_lossy_ensemble(params, e, m)
    outcomes = _run_and_classify(resolved)
    accepted, oracle_sum, intact_sum = _accepted_fidelity_sums(outcomes, _is_credited)

    bosonic_outcomes = _run_and_classify(bosonic_lossy_ensemble(params, e, m))
    bosonic_accepted, bosonic_sum, _ = _accepted_fidelity_sums(bosonic_outcomes, _is_credited)

    if accepted <= 0.0 or bosonic_accepted <= 0.0:
        raise InvariantViolation("没有被接受的双模符合事件")

    described = [
        _describe_outcome(o, compensate=False, provenance=_coarsen(o.provenance())) for o in outcomes
    ]
    total = sum(o.probability for o in described)
    intact_pair_fidelity = intact_sum / accepted
    oracle_fidelity = oracle_sum / accepted
    report = PdcReport(
        outcomes=described,
        accepted_probability=accepted,
        rejected_probability=total - accepted,
        conditional_fidelity=oracle_fidelity,
        provenance=_coarsen(resolved.weight_by_tag()),
        p=params.p,
        m=m,
        e=e,
        accounting=_source_accounting(outcomes),
        intact_pair_fidelity=intact_pair_fidelity,
        oracle_fidelity=oracle_fidelity,
        bosonic_fidelity=bosonic_sum / bosonic_accepted,
        bosonic_accepted_probability=bosonic_accepted,
        closed_form_fidelity=closed_form,
        oracle_deviation=oracle_fidelity - intact_pair_fidelity,
    )
    logger.info(
        "PDC 链路 p=%s m=%s e=%s: 接受概率 %.12g, 记账保真度 %.12g, 可区分 %.12g, 玻色 %.12g",
        params.p, m, e, accepted, intact_pair_fidelity, oracle_fidelity, report.bosonic_fidelity,
    )
    if params.r == 1.0 and params.pump_phase == 0.0:
        expected_deviation = lossy_source_oracle_deviation(params.p, m)
        if abs(report.oracle_deviation - expected_deviation) > PROBABILITY_TOLERANCE:
            logger.warning("可区分模型偏差 %.12g 与闭式 %.12g 不一致", report.oracle_deviation, expected_deviation)
    return report
