"""
光学元件数据模型
"""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.modes import ModeId, SpatialLabel


class ElementKind(str, Enum):
    """元件种类"""
    HWP = "HWP"
    PBS = "PBS"
    PHASE = "PHASE"


class ElementSpec(BaseModel):
    """线性光学元件描述"""
    model_config = ConfigDict(frozen=True)

    kind: ElementKind = Field(description="元件种类")
    name: str = Field(default="", description="元件名称，例如 HWP1、PBS_a")
    spatial: Tuple[SpatialLabel, ...] = Field(
        default=(),
        description="HWP: 一个空间标签；PBS: (上输入, 下输入, 透射输出, 反射输出)",
    )
    modes: Tuple[ModeId, ...] = Field(default=(), description="PHASE 作用的模式")
    phase: Optional[float] = Field(default=None, description="PHASE 的相位（弧度）")

    @model_validator(mode="after")
    def _check_shape(self) -> "ElementSpec":
        if self.kind is ElementKind.HWP and len(self.spatial) != 1:
            raise ValueError("HWP 只作用于一个空间模式")
        if self.kind is ElementKind.PBS:
            if len(self.spatial) != 4 or len(set(self.spatial)) != 4:
                raise ValueError("PBS 需要四个互不相同的空间标签")
        if self.kind is ElementKind.PHASE:
            if not self.modes:
                raise ValueError("PHASE 至少作用于一个模式")
            if self.phase is None:
                raise ValueError("PHASE 需要相位参数")
        return self
