"""
两比特偏振密度矩阵

把多模 Fock 态（或系综）约化到一对空间模式上的偏振双比特，
偏振基顺序为 HH, HV, VH, VV（Alice 在前）。
"""

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Tuple, Union

import numpy as np

from fock.state import FockState, MixedState, as_mixture, positions_of
from models.modes import Party, SpatialLabel, modes_of
from utils.errors import ModeError, OccupancyError, ParameterError

DENSITY_TOLERANCE = 1e-12

_SQRT_HALF = 1.0 / math.sqrt(2.0)

BELL_VECTORS: Dict[str, np.ndarray] = {
    "phi+": np.array([_SQRT_HALF, 0, 0, _SQRT_HALF], dtype=complex),
    "phi-": np.array([_SQRT_HALF, 0, 0, -_SQRT_HALF], dtype=complex),
    "psi+": np.array([0, _SQRT_HALF, _SQRT_HALF, 0], dtype=complex),
    "psi-": np.array([0, _SQRT_HALF, -_SQRT_HALF, 0], dtype=complex),
}
BELL_NAMES: Tuple[str, ...] = tuple(BELL_VECTORS)


@dataclass(frozen=True, eq=False)
class TwoQubitDensity:
    """指定 (Alice 空间模式, Bob 空间模式) 上的偏振密度矩阵"""
    matrix: np.ndarray
    alice_spatial: str = "c1"
    bob_spatial: str = "d1"

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (4, 4):
            raise ParameterError(f"密度矩阵形状应为 (4, 4)，实际为 {matrix.shape}")
        if not np.allclose(matrix, matrix.conj().T, rtol=0.0, atol=DENSITY_TOLERANCE):
            raise ParameterError("密度矩阵不是厄米矩阵")
        trace = np.trace(matrix).real
        if abs(trace - 1.0) > DENSITY_TOLERANCE:
            raise ParameterError(f"密度矩阵迹为 {trace}，应为 1")
        if np.linalg.eigvalsh(matrix).min() < -DENSITY_TOLERANCE:
            raise ParameterError("密度矩阵不是半正定的")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_vector(cls, vector: np.ndarray, alice_spatial: str = "c1", bob_spatial: str = "d1") -> "TwoQubitDensity":
        vector = np.asarray(vector, dtype=complex)
        vector = vector / np.linalg.norm(vector)
        return cls(np.outer(vector, vector.conj()), alice_spatial, bob_spatial)

    @property
    def pair(self) -> str:
        return f"{self.alice_spatial}{self.bob_spatial}"

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    @property
    def relative_phase(self) -> float:
        """|HH> 与 |VV> 之间的相对相位 θ，态形如 (|HH> + e^{iθ}|VV>)/√2；无相干时为 0"""
        coherence = self.matrix[3, 0]
        if abs(coherence) < DENSITY_TOLERANCE:
            return 0.0
        return float(np.angle(coherence))

    def fidelity_to(self, vector: np.ndarray) -> float:
        vector = np.asarray(vector, dtype=complex)
        value = float(np.real(vector.conj() @ self.matrix @ vector))
        return min(1.0, max(0.0, value))


def _pair_positions(basis, spatial: str, party: Party) -> Tuple[int, int]:
    label = SpatialLabel(spatial)
    if label.party is not party:
        raise ModeError(f"空间模式 {spatial} 不属于参与方 {party.value}")
    h_mode, v_mode = modes_of(spatial)
    h, v = positions_of(basis, (h_mode, v_mode))
    return h, v


def reduce_to_polarization_pair(
    source: Union[FockState, MixedState],
    alice_spatial: str,
    bob_spatial: str,
) -> TwoQubitDensity:
    """
    对其余模式求偏迹，得到指定空间模式对上的偏振密度矩阵

    每个分支的每一项都必须在 alice_spatial 与 bob_spatial 中各有恰好一个光子，
    否则抛出 OccupancyError（调用方需先后选择）。
    """
    mixture = as_mixture(source)
    basis = mixture.basis
    a_h, a_v = _pair_positions(basis, alice_spatial, Party.ALICE)
    b_h, b_v = _pair_positions(basis, bob_spatial, Party.BOB)
    traced = [k for k in range(len(basis)) if k not in (a_h, a_v, b_h, b_v)]

    rho = np.zeros((4, 4), dtype=complex)
    for branch in mixture.branches:
        blocks: Dict[Tuple[int, ...], np.ndarray] = defaultdict(lambda: np.zeros(4, dtype=complex))
        for occupation, amplitude in branch.state.terms.items():
            if occupation[a_h] + occupation[a_v] != 1 or occupation[b_h] + occupation[b_v] != 1:
                raise OccupancyError(
                    f"分支 {branch.tag!r} 中模式 {alice_spatial}/{bob_spatial} 不是各含一个光子"
                )
            index = 2 * occupation[a_v] + occupation[b_v]
            rest = tuple(occupation[k] for k in traced)
            blocks[rest][index] += amplitude
        norm_squared = branch.state.norm_squared
        for vector in blocks.values():
            rho += branch.weight / norm_squared * np.outer(vector, vector.conj())

    total = np.trace(rho).real
    if total <= 0.0:
        raise OccupancyError("系综为空，无法约化")
    return TwoQubitDensity(rho / total, alice_spatial, bob_spatial)


def fidelity_phi_plus(rho: TwoQubitDensity) -> float:
    """<Φ+|ρ|Φ+>"""
    if not isinstance(rho, TwoQubitDensity):
        rho = TwoQubitDensity(rho)
    return rho.fidelity_to(BELL_VECTORS["phi+"])
