"""
参考态

两对发射经线路后的两个四模式符合态，以及 Bell 态偏振向量。
"""

from typing import Tuple

import numpy as np

from fock.density import BELL_VECTORS
from fock.state import FockState, state_from_creations
from models.modes import OUTPUT_BASIS, ModeId
from utils.errors import ParameterError


def _phi_plus_pair_product(first: Tuple[str, str], second: Tuple[str, str]) -> FockState:
    """两个 Φ+ 对的乘积 ½(HH+VV)_first (HH+VV)_second"""
    terms = []
    for pol_1 in ("H", "V"):
        for pol_2 in ("H", "V"):
            modes = (
                ModeId.of(first[0], pol_1), ModeId.of(first[1], pol_1),
                ModeId.of(second[0], pol_2), ModeId.of(second[1], pol_2),
            )
            terms.append((1.0, modes))
    return state_from_creations(OUTPUT_BASIS, terms)


def coincidence_state_no_error() -> FockState:
    """无错两对发射在四模式符合下的态：c1d1 与 c2d2 上各一个 Φ+"""
    return _phi_plus_pair_product(("c1", "d1"), ("c2", "d2"))


def coincidence_state_double_error() -> FockState:
    """双错两对发射在四模式符合下的态：c1d2 与 c2d1 上各一个 Φ+"""
    return _phi_plus_pair_product(("c1", "d2"), ("c2", "d1"))


def bell_state(name: str) -> np.ndarray:
    """HH, HV, VH, VV 基下的 Bell 态向量（返回副本）"""
    try:
        return BELL_VECTORS[name].copy()
    except KeyError as exc:
        raise ParameterError(f"未知的 Bell 态: {name}，可选 {list(BELL_VECTORS)}") from exc
