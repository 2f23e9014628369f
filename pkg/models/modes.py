"""
光学模式数据模型

模式由 (参与方, 空间标签, 偏振) 唯一确定。传输端空间模式为 a1,a2,b1,b2，
纯化线路输出端为 c1,c2,d1,d2。
"""

from enum import Enum
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Party(str, Enum):
    """参与方"""
    ALICE = "A"
    BOB = "B"


class Polarization(str, Enum):
    """偏振"""
    H = "H"
    V = "V"

    @property
    def flipped(self) -> "Polarization":
        return Polarization.V if self is Polarization.H else Polarization.H


class SpatialLabel(str, Enum):
    """空间模式标签"""
    A1 = "a1"
    A2 = "a2"
    B1 = "b1"
    B2 = "b2"
    C1 = "c1"
    C2 = "c2"
    D1 = "d1"
    D2 = "d2"

    @property
    def party(self) -> Party:
        return SPATIAL_OWNER[self]

    @property
    def stage(self) -> "Stage":
        return Stage.TRANSMISSION if self.value[0] in "ab" else Stage.OUTPUT


class Stage(str, Enum):
    """模式所在阶段：传输端或线路输出端"""
    TRANSMISSION = "transmission"
    OUTPUT = "output"


SPATIAL_OWNER: Dict[SpatialLabel, Party] = {
    SpatialLabel.A1: Party.ALICE,
    SpatialLabel.A2: Party.ALICE,
    SpatialLabel.C1: Party.ALICE,
    SpatialLabel.C2: Party.ALICE,
    SpatialLabel.B1: Party.BOB,
    SpatialLabel.B2: Party.BOB,
    SpatialLabel.D1: Party.BOB,
    SpatialLabel.D2: Party.BOB,
}


class ModeId(BaseModel):
    """单个光学模式"""
    model_config = ConfigDict(frozen=True)

    party: Party = Field(description="所属参与方")
    spatial: SpatialLabel = Field(description="空间模式标签")
    polarization: Polarization = Field(description="偏振")

    @model_validator(mode="after")
    def _check_owner(self) -> "ModeId":
        if SPATIAL_OWNER[self.spatial] is not self.party:
            raise ValueError(
                f"空间模式 {self.spatial.value} 属于 {SPATIAL_OWNER[self.spatial].value}，"
                f"不属于 {self.party.value}"
            )
        return self

    @classmethod
    def of(cls, spatial: str, polarization: str) -> "ModeId":
        """按空间标签和偏振构造，参与方自动推断"""
        label = SpatialLabel(spatial)
        return cls(party=label.party, spatial=label, polarization=Polarization(polarization))

    @property
    def stage(self) -> Stage:
        return self.spatial.stage

    @property
    def label(self) -> str:
        return f"{self.spatial.value}{self.polarization.value}"

    def __str__(self) -> str:
        return self.label


def modes_of(spatial: str) -> Tuple[ModeId, ModeId]:
    """返回某空间标签的 (H, V) 两个模式"""
    return ModeId.of(spatial, "H"), ModeId.of(spatial, "V")


def basis_of(*spatial_labels: str) -> Tuple[ModeId, ...]:
    """按给定空间标签顺序生成模式基，每个标签先 H 后 V"""
    basis = []
    for spatial in spatial_labels:
        basis.extend(modes_of(spatial))
    return tuple(basis)


# 传输端与输出端的标准模式基
TRANSMISSION_BASIS: Tuple[ModeId, ...] = basis_of("a1", "a2", "b1", "b2")
OUTPUT_BASIS: Tuple[ModeId, ...] = basis_of("c1", "c2", "d1", "d2")

ALICE_OUTPUTS: Tuple[str, str] = ("c1", "c2")
BOB_OUTPUTS: Tuple[str, str] = ("d1", "d2")
