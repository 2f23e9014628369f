"""
纯化线路

a1、b1 上的 HWP1/HWP2 → 两个 PBS (a1,a2→c1,c2)、(b1,b2→d1,d2) → c2、d2 上的 HWP3/HWP4。

PBS 之后 Ψ± 分支在 c2d1、c1d2 上带着 |VH>+|HV> 形式的偏振，
HWP3/HWP4 翻转 c2 与 d2 后所有样式上的偏振都回到 |HH>+|VV>。
"""

from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from fock.mode_map import ModeMap
from fock.state import FockState, apply_mode_map
from models.modes import OUTPUT_BASIS, TRANSMISSION_BASIS, SpatialLabel, Stage
from models.optics import ElementKind, ElementSpec
from optics.elements import build_element, compose, direct_sum, extend

SOURCE_STAGE = "source"

DEPP_LAYOUT: Tuple[Tuple[str, Tuple[ElementSpec, ...]], ...] = (
    ("HWP1/HWP2", (
        ElementSpec(kind=ElementKind.HWP, name="HWP1", spatial=(SpatialLabel.A1,)),
        ElementSpec(kind=ElementKind.HWP, name="HWP2", spatial=(SpatialLabel.B1,)),
    )),
    ("PBS_a/PBS_b", (
        ElementSpec(kind=ElementKind.PBS, name="PBS_a",
                    spatial=(SpatialLabel.A1, SpatialLabel.A2, SpatialLabel.C1, SpatialLabel.C2)),
        ElementSpec(kind=ElementKind.PBS, name="PBS_b",
                    spatial=(SpatialLabel.B1, SpatialLabel.B2, SpatialLabel.D1, SpatialLabel.D2)),
    )),
    ("HWP3/HWP4", (
        ElementSpec(kind=ElementKind.HWP, name="HWP3", spatial=(SpatialLabel.C2,)),
        ElementSpec(kind=ElementKind.HWP, name="HWP4", spatial=(SpatialLabel.D2,)),
    )),
)


def _full_basis(mode_map: ModeMap, side: str):
    modes = mode_map.input_basis if side == "input" else mode_map.output_basis
    return TRANSMISSION_BASIS if modes[0].stage is Stage.TRANSMISSION else OUTPUT_BASIS


def stage_map(elements: Sequence[ElementSpec]) -> ModeMap:
    """把同一级并联的元件拼成完整 8 模式基上的映射"""
    parallel = direct_sum([build_element(spec) for spec in elements])
    if parallel.is_square:
        return extend(parallel, _full_basis(parallel, "input"))
    return direct_sum([parallel], _full_basis(parallel, "input"), _full_basis(parallel, "output"))


@lru_cache(maxsize=1)
def depp_stages() -> Tuple[Tuple[str, ModeMap], ...]:
    return tuple((label, stage_map(elements)) for label, elements in DEPP_LAYOUT)


@lru_cache(maxsize=1)
def build_depp_circuit() -> ModeMap:
    """整条纯化线路：传输端 8 模式 → 输出端 8 模式的等距映射"""
    return compose([mode_map for _, mode_map in depp_stages()])


def trace_evolution(
    input_state: FockState,
    stages: Optional[Sequence[Tuple[str, ModeMap]]] = None,
) -> List[Tuple[str, FockState]]:
    """逐级记录态的演化，第一项为输入态"""
    stages = depp_stages() if stages is None else stages
    trace = [(SOURCE_STAGE, input_state)]
    state = input_state
    for label, mode_map in stages:
        state = apply_mode_map(state, mode_map)
        trace.append((label, state))
    return trace


def run_circuit(state: FockState) -> FockState:
    return apply_mode_map(state, build_depp_circuit())
