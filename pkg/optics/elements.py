"""
线性光学元件

半波片、偏振分束器、相移器的模式映射构造，以及映射的拼接与复合。
所有元件都是实置换矩阵或对角幺模矩阵，因而都是等距映射。
"""

import cmath
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np

from fock.mode_map import ModeMap, basis_index, check_basis
from models.modes import ModeId, SpatialLabel, modes_of
from models.optics import ElementKind, ElementSpec
from utils.errors import BasisMismatchError, ModeError, ParameterError


def _label(spatial) -> str:
    try:
        return SpatialLabel(spatial).value
    except ValueError as exc:
        raise ModeError(f"未知的空间模式标签: {spatial}") from exc


def identity_map(basis: Sequence[ModeId]) -> ModeMap:
    return ModeMap.identity(basis)


def hwp(spatial: str) -> ModeMap:
    """45° 半波片：交换该空间模式的 H 与 V，无全局相位"""
    h_mode, v_mode = modes_of(_label(spatial))
    matrix = np.array([[0, 1], [1, 0]], dtype=complex)
    return ModeMap((h_mode, v_mode), (h_mode, v_mode), matrix)


def pbs(in_upper: str, in_lower: str, out_transmit: str, out_reflect: str) -> ModeMap:
    """
    偏振分束器：透射 H、反射 V，反射不带相位

    in_upper 的 H -> out_transmit 的 H，V -> out_reflect 的 V；
    in_lower 的 H -> out_reflect 的 H，V -> out_transmit 的 V。
    """
    labels = [_label(s) for s in (in_upper, in_lower, out_transmit, out_reflect)]
    if len(set(labels)) != 4:
        raise ModeError(f"PBS 的四个空间标签必须互不相同: {labels}")
    upper, lower, transmit, reflect = labels
    input_basis = modes_of(upper) + modes_of(lower)
    output_basis = modes_of(transmit) + modes_of(reflect)
    routes = {
        (upper, "H"): (transmit, "H"),
        (upper, "V"): (reflect, "V"),
        (lower, "H"): (reflect, "H"),
        (lower, "V"): (transmit, "V"),
    }
    out_index = basis_index(output_basis)
    matrix = np.zeros((4, 4), dtype=complex)
    for i, mode in enumerate(input_basis):
        target = ModeId.of(*routes[(mode.spatial.value, mode.polarization.value)])
        matrix[out_index[target], i] = 1.0
    return ModeMap(input_basis, output_basis, matrix)


def phase_shift(modes: Iterable[ModeId], phi: float) -> ModeMap:
    """对所列模式的产生算符乘 e^{iφ}"""
    basis = check_basis(dict.fromkeys(modes))
    if not np.isfinite(phi):
        raise ParameterError(f"相位必须是有限值: {phi}")
    factor = cmath.exp(1j * phi)
    return ModeMap(basis, basis, np.eye(len(basis), dtype=complex) * factor)


def compose(maps: Sequence[ModeMap]) -> ModeMap:
    """按顺序复合映射（第一个最先作用）"""
    if not maps:
        raise ParameterError("复合至少需要一个映射")
    return reduce(lambda first, second: first.then(second), maps)


def _reorder(mode_map: ModeMap, input_basis: Sequence[ModeId], output_basis: Sequence[ModeId]) -> ModeMap:
    input_basis = check_basis(input_basis)
    output_basis = check_basis(output_basis)
    if set(input_basis) != set(mode_map.input_basis) or set(output_basis) != set(mode_map.output_basis):
        raise BasisMismatchError("重排的目标模式基必须是原模式基的置换")
    in_index = basis_index(mode_map.input_basis)
    out_index = basis_index(mode_map.output_basis)
    rows = [out_index[m] for m in output_basis]
    cols = [in_index[m] for m in input_basis]
    return ModeMap(input_basis, output_basis, mode_map.matrix[np.ix_(rows, cols)])


def direct_sum(
    maps: Sequence[ModeMap],
    input_basis: Optional[Sequence[ModeId]] = None,
    output_basis: Optional[Sequence[ModeId]] = None,
) -> ModeMap:
    """并联元件：块对角拼接，可选地重排到指定的模式基顺序"""
    if not maps:
        raise ParameterError("直和至少需要一个映射")
    joined_in = tuple(m for mode_map in maps for m in mode_map.input_basis)
    joined_out = tuple(m for mode_map in maps for m in mode_map.output_basis)
    matrix = np.zeros((len(joined_out), len(joined_in)), dtype=complex)
    row = col = 0
    for mode_map in maps:
        rows, cols = mode_map.matrix.shape
        matrix[row:row + rows, col:col + cols] = mode_map.matrix
        row += rows
        col += cols
    combined = ModeMap(joined_in, joined_out, matrix)
    if input_basis is None and output_basis is None:
        return combined
    return _reorder(combined, input_basis or joined_in, output_basis or joined_out)


def extend(mode_map: ModeMap, basis: Sequence[ModeId]) -> ModeMap:
    """把作用于部分模式的方阵映射扩展到完整模式基，其余模式保持不变"""
    if not mode_map.is_square:
        raise BasisMismatchError("只有输入输出模式基相同的映射可以扩展")
    basis = check_basis(basis)
    index = basis_index(basis)
    missing = [m.label for m in mode_map.input_basis if m not in index]
    if missing:
        raise ModeError(f"模式 {missing} 不在目标模式基中")
    matrix = np.eye(len(basis), dtype=complex)
    positions = [index[m] for m in mode_map.input_basis]
    matrix[np.ix_(positions, positions)] = mode_map.matrix
    return ModeMap(basis, basis, matrix)


def build_element(spec: ElementSpec) -> ModeMap:
    """由元件描述构造映射"""
    if spec.kind is ElementKind.HWP:
        return hwp(spec.spatial[0].value)
    if spec.kind is ElementKind.PBS:
        return pbs(*(s.value for s in spec.spatial))
    return phase_shift(spec.modes, spec.phase)
