"""
测试公共夹具
"""

import sys
from pathlib import Path

import pytest

# 添加项目根目录到Python路径
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from fock.state import state_from_creations
from models.modes import OUTPUT_BASIS, ModeId
from utils.settings import AppSettings

TOLERANCE = 1e-12


def output_pair_state(parts):
    """由 [(系数, ((模式, 偏振), ...)), ...] 构造输出端的未归一化态"""
    monomials = [
        (coefficient, tuple(ModeId.of(spatial, polarization) for spatial, polarization in modes))
        for coefficient, modes in parts
    ]
    return state_from_creations(OUTPUT_BASIS, monomials, normalize_result=False)


def phi_plus_terms(alice: str, bob: str, coefficient: complex = 0.5):
    return [
        (coefficient, ((alice, "H"), (bob, "H"))),
        (coefficient, ((alice, "V"), (bob, "V"))),
    ]


@pytest.fixture
def settings(tmp_path):
    return AppSettings(output_dir=str(tmp_path / "output"), max_concurrency=2, log_level="WARNING")
