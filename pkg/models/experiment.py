"""
实验运行数据模型

运行配置、扫描网格，以及 LangGraph 实验工作流中的状态数据结构。
"""

import math
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.channels import BellMixtureParams, DriftParams, LossParams, PdcParams
from fock.density import BELL_NAMES

GRID_TOLERANCE = 1e-9


class ExperimentKind(str, Enum):
    """实验类型"""
    TRACE = "trace"
    PURIFY = "purify"
    PDC = "pdc"
    SWEEP = "sweep"


class SweepTarget(str, Enum):
    """扫描对象"""
    BITFLIP = "bitflip"      # e 轴：四模式后选择保真度
    LOSS = "loss"            # (p, m) 网格：有损光源保真度
    SIMPLEX = "simplex"      # (α, β, δ, η) 单纯形网格：确定性检查
    DRIFT = "drift"          # φ 轴：相位补偿


class ExperimentStatus(str, Enum):
    """工作流状态"""
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class ExperimentStep(str, Enum):
    """处理步骤"""
    CONFIG_CHECK = "config_check"
    TRACE = "trace"
    PURIFY = "purify"
    PDC = "pdc"
    SWEEP = "sweep"
    OUTPUT_ASSEMBLY = "output_assembly"


class GridAxis(BaseModel):
    """闭区间 [start, stop] 上步长为 step 的等距网格"""
    model_config = ConfigDict(frozen=True)

    start: float = Field(description="起点")
    stop: float = Field(description="终点（包含）")
    step: float = Field(gt=0.0, description="步长")

    @model_validator(mode="after")
    def _check_order(self) -> "GridAxis":
        if self.stop < self.start:
            raise ValueError(f"网格终点 {self.stop} 小于起点 {self.start}")
        return self

    def values(self) -> List[float]:
        count = int(math.floor((self.stop - self.start) / self.step + GRID_TOLERANCE)) + 1
        return [round(self.start + i * self.step, 12) for i in range(count)]

    @classmethod
    def single(cls, value: float) -> "GridAxis":
        return cls(start=value, stop=value, step=1.0)


class SweepConfig(BaseModel):
    """扫描配置"""
    model_config = ConfigDict(frozen=True)

    target: SweepTarget = Field(default=SweepTarget.BITFLIP, description="扫描对象")
    e: GridAxis = Field(default=GridAxis(start=0.0, stop=1.0, step=0.1), description="比特翻转概率网格")
    p: GridAxis = Field(default=GridAxis(start=0.05, stop=0.1, step=0.05), description="单对发射概率网格")
    m: GridAxis = Field(default=GridAxis(start=0.05, stop=0.5, step=0.05), description="损耗率网格")
    phi: GridAxis = Field(default=GridAxis(start=0.0, stop=math.pi, step=math.pi / 8), description="漂移相位网格")
    simplex_step: float = Field(default=0.1, gt=0.0, le=1.0, description="单纯形网格间距")

    @field_validator("e", "m")
    @classmethod
    def _probability_axis(cls, axis: GridAxis) -> GridAxis:
        if axis.start < 0.0 or axis.stop > 1.0:
            raise ValueError("概率网格必须位于 [0, 1] 内")
        return axis

    @field_validator("p")
    @classmethod
    def _emission_axis(cls, axis: GridAxis) -> GridAxis:
        if axis.start <= 0.0 or axis.stop + axis.stop ** 2 > 1.0:
            raise ValueError("发射概率网格必须满足 0 < p 且 p + p² ≤ 1")
        return axis

    @field_validator("simplex_step")
    @classmethod
    def _divides_unit(cls, value: float) -> float:
        divisions = round(1.0 / value)
        if abs(divisions * value - 1.0) > GRID_TOLERANCE:
            raise ValueError(f"单纯形网格间距 {value} 不能整除 1")
        return value

    def simplex_points(self) -> List[Tuple[float, float, float, float]]:
        """单纯形上的全部网格点，间距 0.1 时共 286 个"""
        n = round(1.0 / self.simplex_step)
        points = []
        for i in range(n + 1):
            for j in range(n + 1 - i):
                for k in range(n + 1 - i - j):
                    rest = n - i - j - k
                    points.append(tuple(round(x / n, 12) for x in (i, j, k, rest)))
        return points


class RunConfig(BaseModel):
    """一次实验运行的全部参数"""
    model_config = ConfigDict(frozen=True)

    kind: ExperimentKind = Field(default=ExperimentKind.PURIFY, description="实验类型")
    trace_input: str = Field(default="phi+", description="trace 的输入偏振 Bell 态")
    noise: BellMixtureParams = Field(default_factory=BellMixtureParams, description="Bell 对角噪声")
    drift: DriftParams = Field(default_factory=DriftParams, description="空间相位漂移")
    source: PdcParams = Field(default_factory=PdcParams, description="参量下转换光源")
    e: float = Field(default=0.0, ge=0.0, le=1.0, description="比特翻转概率")
    loss: LossParams = Field(default_factory=LossParams, description="单光子损耗")
    sweep: SweepConfig = Field(default_factory=SweepConfig, description="扫描配置")
    output: Optional[str] = Field(default=None, description="输出 CSV 路径")

    @field_validator("trace_input")
    @classmethod
    def _known_bell_state(cls, value: str) -> str:
        if value not in BELL_NAMES:
            raise ValueError(f"未知的 Bell 态 {value}，可选 {list(BELL_NAMES)}")
        return value


class StepResult(BaseModel):
    """步骤执行结果"""
    step: ExperimentStep = Field(description="处理步骤")
    status: ExperimentStatus = Field(description="步骤状态")
    start_time: str = Field(default_factory=lambda: datetime.now().isoformat())
    end_time: Optional[str] = Field(default=None, description="结束时间")
    error_message: Optional[str] = Field(default=None, description="错误信息")
    data: Optional[Dict[str, Any]] = Field(default=None, description="步骤数据")

    def mark_completed(self, data: Optional[Dict[str, Any]] = None):
        self.status = ExperimentStatus.COMPLETED
        self.end_time = datetime.now().isoformat()
        if data:
            self.data = data

    def mark_failed(self, error_message: str):
        self.status = ExperimentStatus.FAILED
        self.end_time = datetime.now().isoformat()
        self.error_message = error_message


class ExperimentError(BaseModel):
    """工作流错误信息"""
    step: ExperimentStep = Field(description="出错步骤")
    error_type: str = Field(description="错误类型")
    error_message: str = Field(description="错误消息")


class ExperimentState(BaseModel):
    """实验工作流状态"""
    config: RunConfig = Field(description="运行配置")
    output_path: Optional[str] = Field(default=None, description="解析后的输出 CSV 路径")
    status: ExperimentStatus = Field(default=ExperimentStatus.PENDING, description="整体状态")
    current_step: Optional[ExperimentStep] = Field(default=None, description="当前步骤")

    # 结果数据
    columns: List[str] = Field(default_factory=list, description="CSV 列名")
    rows: List[Dict[str, Any]] = Field(default_factory=list, description="CSV 行")
    text_lines: List[str] = Field(default_factory=list, description="人类可读的文本输出")
    report: Optional[Dict[str, Any]] = Field(default=None, description="JSON 报告内容")
    output_files: Dict[str, str] = Field(default_factory=dict, description="输出文件路径")

    # 执行记录
    step_results: List[StepResult] = Field(default_factory=list, description="步骤结果列表")
    errors: List[ExperimentError] = Field(default_factory=list, description="错误列表")

    def start_step(self, step: ExperimentStep) -> StepResult:
        self.current_step = step
        result = StepResult(step=step, status=ExperimentStatus.RUNNING)
        self.step_results.append(result)
        return result

    def complete_step(self, step: ExperimentStep, data: Optional[Dict[str, Any]] = None):
        for result in reversed(self.step_results):
            if result.step == step and result.status == ExperimentStatus.RUNNING:
                result.mark_completed(data)
                break

    def fail_step(self, step: ExperimentStep, error: Exception):
        for result in reversed(self.step_results):
            if result.step == step and result.status == ExperimentStatus.RUNNING:
                result.mark_failed(str(error))
                break
        self.errors.append(ExperimentError(
            step=step,
            error_type=type(error).__name__,
            error_message=str(error),
        ))

    def is_step_failed(self, step: ExperimentStep) -> bool:
        for result in reversed(self.step_results):
            if result.step == step:
                return result.status == ExperimentStatus.FAILED
        return False


class ExperimentOutput(BaseModel):
    """工作流输出结果"""
    kind: ExperimentKind = Field(description="实验类型")
    status: ExperimentStatus = Field(description="最终状态")
    columns: List[str] = Field(default_factory=list, description="CSV 列名")
    rows: List[Dict[str, Any]] = Field(default_factory=list, description="CSV 行")
    text_lines: List[str] = Field(default_factory=list, description="文本输出")
    report: Optional[Dict[str, Any]] = Field(default=None, description="报告内容")
    output_files: Dict[str, str] = Field(default_factory=dict, description="输出文件路径")
    errors: List[ExperimentError] = Field(default_factory=list, description="错误列表")

    @property
    def is_successful(self) -> bool:
        return self.status == ExperimentStatus.COMPLETED and not self.errors

    @classmethod
    def from_state(cls, state: ExperimentState) -> "ExperimentOutput":
        return cls(
            kind=state.config.kind,
            status=state.status,
            columns=state.columns,
            rows=state.rows,
            text_lines=state.text_lines,
            report=state.report,
            output_files=state.output_files,
            errors=state.errors,
        )
