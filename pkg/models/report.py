"""
纯化结果数据模型

探测样式、样式分类、逐样式结果与纯化报告。
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.modes import ALICE_OUTPUTS, BOB_OUTPUTS

OUTPUT_LABELS: Tuple[str, ...] = ALICE_OUTPUTS + BOB_OUTPUTS


class PatternClass(str, Enum):
    """探测样式分类"""
    FOUR_MODE = "four_mode"
    PAIR_COINCIDENCE = "pair_coincidence"
    REJECTED = "rejected"


class DetectionPattern(BaseModel):
    """c1, c2, d1, d2 上的光子计数（偏振求和）"""
    model_config = ConfigDict(frozen=True)

    c1: int = Field(default=0, ge=0, description="c1 光子数")
    c2: int = Field(default=0, ge=0, description="c2 光子数")
    d1: int = Field(default=0, ge=0, description="d1 光子数")
    d2: int = Field(default=0, ge=0, description="d2 光子数")

    @model_validator(mode="after")
    def _check_total(self) -> "DetectionPattern":
        if self.total > 4:
            raise ValueError(f"探测样式总光子数 {self.total} 超过 4")
        return self

    @classmethod
    def from_counts(cls, counts: Tuple[int, int, int, int]) -> "DetectionPattern":
        return cls(**dict(zip(OUTPUT_LABELS, counts)))

    @property
    def counts(self) -> Tuple[int, int, int, int]:
        return (self.c1, self.c2, self.d1, self.d2)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def pattern_class(self) -> PatternClass:
        """光子数分辨探测下的分类，是 DetectionPattern 的全函数"""
        if self.counts == (1, 1, 1, 1):
            return PatternClass.FOUR_MODE
        alice = (self.c1, self.c2)
        bob = (self.d1, self.d2)
        if sorted(alice) == [0, 1] and sorted(bob) == [0, 1]:
            return PatternClass.PAIR_COINCIDENCE
        return PatternClass.REJECTED

    @property
    def coincidence_pair(self) -> Optional[Tuple[str, str]]:
        """双模符合时的 (Alice 模式, Bob 模式)"""
        if self.pattern_class is not PatternClass.PAIR_COINCIDENCE:
            return None
        alice = ALICE_OUTPUTS[0] if self.c1 else ALICE_OUTPUTS[1]
        bob = BOB_OUTPUTS[0] if self.d1 else BOB_OUTPUTS[1]
        return alice, bob

    @property
    def label(self) -> str:
        pair = self.coincidence_pair
        if pair:
            return "".join(pair)
        return "".join(str(n) for n in self.counts)


class PatternOutcome(BaseModel):
    """单个探测样式的结果"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    pattern: DetectionPattern = Field(description="探测样式")
    pattern_class: PatternClass = Field(description="样式分类")
    probability: float = Field(description="出现概率")
    accepted: bool = Field(default=False, description="是否被后选择接受")
    reduced_pair: Optional[Tuple[str, str]] = Field(default=None, description="约化的空间模式对")
    density: Optional[np.ndarray] = Field(default=None, description="条件偏振密度矩阵 (4x4)")
    fidelity: Optional[float] = Field(default=None, description="对 Φ+ 的保真度")
    relative_phase: Optional[float] = Field(default=None, description="测得的 HH/VV 相对相位")
    compensated_fidelity: Optional[float] = Field(default=None, description="相位补偿后的保真度")
    purity: Optional[float] = Field(default=None, description="条件态纯度")
    provenance: Dict[str, float] = Field(default_factory=dict, description="各来源分支贡献的概率")


class PurificationReport(BaseModel):
    """纯化报告"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    outcomes: List[PatternOutcome] = Field(default_factory=list, description="逐样式结果")
    accepted_probability: float = Field(default=0.0, description="被接受样式的总概率")
    rejected_probability: float = Field(default=0.0, description="被拒绝样式的总概率")
    conditional_fidelity: Optional[float] = Field(default=None, description="接受事件的平均保真度")
    compensated_fidelity: Optional[float] = Field(default=None, description="相位补偿后的平均保真度")
    drift_phi: float = Field(default=0.0, description="记录的漂移相位（约化到 [0, 2π)）")
    drift_convention: str = Field(default="phase on lower path a2", description="漂移相位约定")
    provenance: Dict[str, float] = Field(default_factory=dict, description="输入系综各分支权重")

    @property
    def accepted_outcomes(self) -> List[PatternOutcome]:
        return [o for o in self.outcomes if o.accepted]

    @property
    def total_probability(self) -> float:
        return float(sum(o.probability for o in self.outcomes))

    def probability_of(self, label: str) -> float:
        return float(sum(o.probability for o in self.outcomes if o.pattern.label == label))


class SourceAccounting(BaseModel):
    """光源损耗情形下接受事件的来源分解"""
    single_pair: float = Field(default=0.0, description="单对无损事件概率")
    perfect_pair: float = Field(default=0.0, description="两对中一对完整保留的概率")
    cross_pair: float = Field(default=0.0, description="两对各留一个光子的概率")
    other: float = Field(default=0.0, description="其余被接受事件的概率")


class PdcReport(PurificationReport):
    """含参量下转换光源与损耗的纯化报告"""
    p: float = Field(description="单对发射概率")
    m: float = Field(description="单光子损耗率")
    e: float = Field(description="比特翻转概率")
    accounting: SourceAccounting = Field(default_factory=SourceAccounting, description="接受事件来源分解")
    intact_pair_fidelity: float = Field(description="只计完整保留对的保真度（闭式记账）")
    oracle_fidelity: float = Field(description="可区分两对模型下的精确保真度")
    bosonic_fidelity: float = Field(description="全玻色不可区分模型下的精确保真度")
    bosonic_accepted_probability: float = Field(description="全玻色模型下双模符合的总概率")
    closed_form_fidelity: float = Field(description="闭式公式的值")
    oracle_deviation: float = Field(description="oracle_fidelity - intact_pair_fidelity")


class SwappingTable(BaseModel):
    """纠缠交换联合概率表：行为 Alice 的 Bell 测量结果，列为 Bob 的 Bell 分量"""
    outcomes: List[str] = Field(description="Bell 态名称顺序")
    table: List[List[float]] = Field(description="4x4 联合概率")
    mutual_information: float = Field(description="互信息（比特）")

    def conditional(self, alice_outcome: str) -> Dict[str, float]:
        row = self.table[self.outcomes.index(alice_outcome)]
        total = sum(row)
        return {name: value / total for name, value in zip(self.outcomes, row)}
