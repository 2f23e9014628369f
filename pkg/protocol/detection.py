"""
光子数分辨探测与后选择

按输出空间模式 c1, c2, d1, d2 上的光子数（偏振求和）把态投影到各探测样式，
偏振相干性在条件态中保留。
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Tuple, Union

from fock.state import Branch, FockState, MixedState, Occupation, as_mixture, positions_of
from models.modes import OUTPUT_BASIS, modes_of
from models.report import OUTPUT_LABELS, DetectionPattern, PatternClass
from utils.errors import BasisMismatchError

_LABEL_POSITIONS = [positions_of(OUTPUT_BASIS, modes_of(label)) for label in OUTPUT_LABELS]


@dataclass(frozen=True, eq=False)
class DetectionOutcome:
    """某一探测样式：出现概率与归一化的条件系综"""
    pattern: DetectionPattern
    probability: float
    conditional: MixedState

    @property
    def pattern_class(self) -> PatternClass:
        return self.pattern.pattern_class

    def provenance(self) -> Dict[str, float]:
        """各来源标签对该样式概率的贡献"""
        weights: Dict[str, float] = defaultdict(float)
        for branch in self.conditional.branches:
            weights[branch.tag] += branch.weight * self.probability
        return dict(sorted(weights.items()))


def pattern_counts(occupation: Occupation) -> Tuple[int, int, int, int]:
    return tuple(sum(occupation[k] for k in positions) for positions in _LABEL_POSITIONS)


def classify_detection(source: Union[FockState, MixedState]) -> List[DetectionOutcome]:
    """
    把线路输出态按探测样式分解

    返回按样式计数排序的结果；对所有样式求和的概率等于输入系综的总权重。
    """
    mixture = as_mixture(source)
    if mixture.basis != OUTPUT_BASIS:
        raise BasisMismatchError("探测只能作用于线路输出端模式基上的态")

    grouped: Dict[Tuple[int, int, int, int], List[Tuple[float, FockState, str]]] = defaultdict(list)
    for branch in mixture.branches:
        sectors: Dict[Tuple[int, int, int, int], Dict[Occupation, complex]] = defaultdict(dict)
        for occupation, amplitude in branch.state.terms.items():
            sectors[pattern_counts(occupation)][occupation] = amplitude
        for counts, terms in sectors.items():
            projected = FockState(mixture.basis, terms)
            probability = branch.weight * projected.norm_squared
            if probability > 0.0:
                grouped[counts].append((probability, projected.normalized(), branch.tag))

    outcomes = []
    for counts in sorted(grouped):
        parts = grouped[counts]
        total = sum(p for p, _, _ in parts)
        branches = tuple(Branch(p / total, state, tag) for p, state, tag in parts)
        outcomes.append(DetectionOutcome(
            pattern=DetectionPattern.from_counts(counts),
            probability=total,
            conditional=MixedState(branches, conditioned=True),
        ))
    return outcomes


def outcome_for(outcomes: List[DetectionOutcome], counts: Tuple[int, int, int, int]) -> Union[DetectionOutcome, None]:
    for outcome in outcomes:
        if outcome.pattern.counts == counts:
            return outcome
    return None


def class_probability(outcomes: List[DetectionOutcome], pattern_class: PatternClass) -> float:
    return float(sum(o.probability for o in outcomes if o.pattern_class is pattern_class))
