"""
信道与光源参数模型
"""

import math

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SIMPLEX_TOLERANCE = 1e-12


class BellMixtureParams(BaseModel):
    """Bell 对角偏振噪声：Φ+, Φ-, Ψ+, Ψ- 的比例"""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(default=1.0, ge=0.0, le=1.0, description="Φ+ 比例")
    beta: float = Field(default=0.0, ge=0.0, le=1.0, description="Φ- 比例（相位翻转）")
    delta: float = Field(default=0.0, ge=0.0, le=1.0, description="Ψ+ 比例（比特翻转）")
    eta: float = Field(default=0.0, ge=0.0, le=1.0, description="Ψ- 比例（两种错误）")

    @model_validator(mode="after")
    def _check_simplex(self) -> "BellMixtureParams":
        total = self.alpha + self.beta + self.delta + self.eta
        if abs(total - 1.0) > SIMPLEX_TOLERANCE:
            raise ValueError(f"alpha+beta+delta+eta = {total!r}，应为 1")
        return self

    def weights(self) -> dict:
        return {"phi+": self.alpha, "phi-": self.beta, "psi+": self.delta, "psi-": self.eta}

    @classmethod
    def pure(cls, name: str) -> "BellMixtureParams":
        """只含单个 Bell 态的系综"""
        fields = {"phi+": "alpha", "phi-": "beta", "psi+": "delta", "psi-": "eta"}
        if name not in fields:
            raise ValueError(f"未知的 Bell 态: {name}")
        return cls(**{field: 1.0 if key == name else 0.0 for key, field in fields.items()})


class DriftParams(BaseModel):
    """空间模式相对相位漂移 φ"""
    model_config = ConfigDict(frozen=True)

    phi: float = Field(default=0.0, description="相对相位（弧度）")

    @field_validator("phi")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("相位必须是有限值")
        return value

    @classmethod
    def from_path_difference(cls, wave_vector: float, path_difference: float) -> "DriftParams":
        """φ = k·ΔL"""
        return cls(phi=wave_vector * path_difference)

    @property
    def reduced_phi(self) -> float:
        """约化到 [0, 2π)"""
        return math.fmod(math.fmod(self.phi, 2 * math.pi) + 2 * math.pi, 2 * math.pi)


class LossParams(BaseModel):
    """单光子损耗率"""
    model_config = ConfigDict(frozen=True)

    m: float = Field(default=0.0, ge=0.0, le=1.0, description="单光子损耗概率")


class PdcParams(BaseModel):
    """参量下转换光源参数"""
    model_config = ConfigDict(frozen=True)

    p: float = Field(default=0.1, gt=0.0, le=1.0, description="单对发射概率")
    r: float = Field(default=1.0, ge=0.0, description="下路径相对发射振幅")
    pump_phase: float = Field(default=0.0, description="两条发射路径之间的泵浦相位（弧度）")

    @model_validator(mode="after")
    def _check_probability(self) -> "PdcParams":
        if self.p + self.p ** 2 > 1.0 + SIMPLEX_TOLERANCE:
            raise ValueError(f"p + p² = {self.p + self.p ** 2}，超过 1")
        return self
