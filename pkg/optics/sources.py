"""
光源态制备

理想超纠缠对，以及截断到两对发射的参量下转换光源。
"""

import cmath
from typing import List, Sequence, Tuple

from fock.state import FockState, MixedState, state_from_creations, vacuum
from models.channels import PdcParams
from models.modes import TRANSMISSION_BASIS, ModeId

# 单对产生算符多项式中的各项：(空间编号, 偏振)
PAIR_CHANNELS: Tuple[Tuple[str, str], ...] = (("1", "H"), ("1", "V"), ("2", "H"), ("2", "V"))

Monomial = Tuple[complex, Tuple[ModeId, ...]]


def pair_terms(params: PdcParams = PdcParams(), flip_bob: bool = False) -> List[Monomial]:
    """
    单对发射多项式 Σ c_i a†_i b†_i 的各项

    flip_bob=True 时 Bob 一侧偏振翻转（比特翻转后的多项式）。
    """
    lower = params.r * cmath.exp(1j * params.pump_phase)
    terms = []
    for path, polarization in PAIR_CHANNELS:
        coefficient = 1.0 if path == "1" else lower
        bob_polarization = {"H": "V", "V": "H"}[polarization] if flip_bob else polarization
        modes = (ModeId.of(f"a{path}", polarization), ModeId.of(f"b{path}", bob_polarization))
        terms.append((coefficient, modes))
    return terms


def product_terms(first: Sequence[Monomial], second: Sequence[Monomial]) -> List[Monomial]:
    """两个产生算符多项式相乘（共 len(first)·len(second) 项）"""
    return [(c1 * c2, m1 + m2) for c1, m1 in first for c2, m2 in second]


def ideal_hyper_pair() -> FockState:
    """½(|HH>+|VV>)(|a1b1>+|a2b2>)，即四项振幅均为 1/2 的双光子态"""
    return state_from_creations(TRANSMISSION_BASIS, pair_terms())


def pdc_single_pair_state(params: PdcParams = PdcParams()) -> FockState:
    """含 r 与泵浦相位的单对态，r=1、相位为 0 时与 ideal_hyper_pair 相同"""
    return state_from_creations(TRANSMISSION_BASIS, pair_terms(params))


def pdc_two_pair_state(params: PdcParams = PdcParams()) -> FockState:
    """
    两对发射态 (Σ c_i a†_i b†_i)²|0>，数值归一化

    r=1 时 16 个算符乘积合并为 10 个占据数项，双占据项带玻色增强因子。
    """
    terms = pair_terms(params)
    return state_from_creations(TRANSMISSION_BASIS, product_terms(terms, terms))


def pdc_emission_ensemble(params: PdcParams = PdcParams()) -> MixedState:
    """截断发射系综：真空 1-p-p²，单对 p，两对 p²"""
    p = params.p
    return MixedState.from_weighted([
        (1.0 - p - p ** 2, vacuum(TRANSMISSION_BASIS), "vacuum"),
        (p, pdc_single_pair_state(params), "single-pair"),
        (p ** 2, pdc_two_pair_state(params), "two-pair"),
    ])
