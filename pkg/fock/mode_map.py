"""
模式线性映射

ModeMap 描述产生算符的线性变换 a†_in,i ↦ Σ_j U[j,i] a†_out,j，
是所有线性光学元件的统一表示。
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Sequence, Tuple

import numpy as np

from models.modes import ModeId
from utils.errors import BasisMismatchError, ModeError

ISOMETRY_TOLERANCE = 1e-12


def check_basis(basis: Sequence[ModeId]) -> Tuple[ModeId, ...]:
    """校验模式基非空且无重复"""
    basis = tuple(basis)
    if not basis:
        raise ModeError("模式基不能为空")
    if len(set(basis)) != len(basis):
        seen = set()
        duplicates = [m.label for m in basis if m in seen or seen.add(m)]
        raise ModeError(f"模式基中存在重复模式: {duplicates}")
    return basis


def basis_index(basis: Sequence[ModeId]) -> Dict[ModeId, int]:
    return {mode: i for i, mode in enumerate(basis)}


@dataclass(frozen=True, eq=False)
class ModeMap:
    """产生算符上的线性映射，matrix 形状为 (输出模式数, 输入模式数)"""
    input_basis: Tuple[ModeId, ...]
    output_basis: Tuple[ModeId, ...]
    matrix: np.ndarray

    def __post_init__(self):
        input_basis = check_basis(self.input_basis)
        output_basis = check_basis(self.output_basis)
        matrix = np.array(self.matrix, dtype=complex)
        expected = (len(output_basis), len(input_basis))
        if matrix.shape != expected:
            raise BasisMismatchError(f"映射矩阵形状 {matrix.shape} 与模式基 {expected} 不符")
        matrix.setflags(write=False)
        object.__setattr__(self, "input_basis", input_basis)
        object.__setattr__(self, "output_basis", output_basis)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, basis: Sequence[ModeId]) -> "ModeMap":
        basis = check_basis(basis)
        return cls(basis, basis, np.eye(len(basis), dtype=complex))

    @cached_property
    def sparse_columns(self) -> Tuple[Tuple[Tuple[int, complex], ...], ...]:
        """每个输入模式映射到的 (输出下标, 系数) 列表"""
        columns = []
        for i in range(self.matrix.shape[1]):
            column = self.matrix[:, i]
            columns.append(tuple((int(j), complex(column[j])) for j in np.flatnonzero(column)))
        return tuple(columns)

    @property
    def is_square(self) -> bool:
        return self.input_basis == self.output_basis

    def is_isometry(self, tolerance: float = ISOMETRY_TOLERANCE) -> bool:
        """列向量是否正交归一"""
        gram = self.matrix.conj().T @ self.matrix
        return bool(np.allclose(gram, np.eye(gram.shape[0]), rtol=0.0, atol=tolerance))

    def allclose(self, other: "ModeMap", tolerance: float = ISOMETRY_TOLERANCE) -> bool:
        if self.input_basis != other.input_basis or self.output_basis != other.output_basis:
            return False
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=tolerance))

    def then(self, other: "ModeMap") -> "ModeMap":
        """先作用 self 再作用 other"""
        if self.output_basis != other.input_basis:
            raise BasisMismatchError(
                f"映射无法衔接: 输出基 {[m.label for m in self.output_basis]} "
                f"!= 输入基 {[m.label for m in other.input_basis]}"
            )
        return ModeMap(self.input_basis, other.output_basis, other.matrix @ self.matrix)
