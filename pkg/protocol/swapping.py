"""
纠缠交换关联

对四模式符合态，Alice 在 (c1, c2) 两个光子的偏振上做理想 Bell 测量，
Bob 在 (d1, d2) 上的条件态按 Bell 基分解，得到 4x4 联合概率表。
"""

import logging
from typing import Sequence

import numpy as np

from fock.density import BELL_NAMES, BELL_VECTORS
from fock.state import FockState, positions_of
from models.modes import OUTPUT_BASIS, modes_of
from models.report import OUTPUT_LABELS, SwappingTable
from protocol.detection import pattern_counts
from utils.errors import BasisMismatchError, OccupancyError

logger = logging.getLogger(__name__)

_V_POSITIONS = positions_of(OUTPUT_BASIS, [modes_of(label)[1] for label in OUTPUT_LABELS])


def _polarization_tensor(state: FockState) -> np.ndarray:
    """振幅张量 T[c1, c2, d1, d2]，下标 0 为 H、1 为 V"""
    if state.basis != OUTPUT_BASIS:
        raise BasisMismatchError("纠缠交换只作用于线路输出端模式基上的态")
    tensor = np.zeros((2, 2, 2, 2), dtype=complex)
    for occupation, amplitude in state.terms.items():
        if pattern_counts(occupation) != (1, 1, 1, 1):
            raise OccupancyError(f"输入态含有非四模式符合的项: {pattern_counts(occupation)}")
        tensor[tuple(occupation[k] for k in _V_POSITIONS)] += amplitude
    return tensor


def swapping_correlation(state: FockState) -> SwappingTable:
    """
    Alice Bell 测量结果与 Bob 条件态 Bell 分量的联合概率

    对两个 Φ+ 分别位于 c1d2、c2d1 的态，表为 1/4 乘以置换矩阵。
    """
    tensor = _polarization_tensor(state.normalized())
    bells = np.stack([BELL_VECTORS[name].reshape(2, 2) for name in BELL_NAMES])
    amplitudes = np.einsum("iab,jxy,abxy->ij", bells.conj(), bells.conj(), tensor)
    table = np.abs(amplitudes) ** 2
    mutual_information = mutual_information_bits(table)
    logger.debug("纠缠交换联合概率表:\n%s", table)
    return SwappingTable(
        outcomes=list(BELL_NAMES),
        table=table.tolist(),
        mutual_information=mutual_information,
    )


def mutual_information_bits(table: Sequence[Sequence[float]]) -> float:
    """联合分布的互信息（以 2 为底）"""
    joint = np.asarray(table, dtype=float)
    joint = joint / joint.sum()
    rows = joint.sum(axis=1, keepdims=True)
    cols = joint.sum(axis=0, keepdims=True)
    mask = joint > 0
    return float(np.sum(joint[mask] * np.log2(joint[mask] / (rows @ cols)[mask])))
