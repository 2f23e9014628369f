"""
信道噪声模型

Bell 对角偏振噪声、空间相位漂移、两对发射的成对比特翻转，以及逐光子损耗。
"""

import logging
import math
from collections import defaultdict
from itertools import product
from typing import Dict, Iterator, List, Tuple, Union

from fock.mode_map import ModeMap
from fock.state import (
    Branch, FockState, MixedState, Occupation, apply_mode_map, as_mixture, multiply,
    state_from_creations,
)
from fock.tags import join_tags
from models.channels import BellMixtureParams, DriftParams, LossParams, PdcParams
from models.modes import TRANSMISSION_BASIS, ModeId, Party, modes_of
from optics.elements import compose, direct_sum, extend, hwp, phase_shift
from optics.sources import pair_terms, pdc_two_pair_state, product_terms
from utils.errors import OccupancyError, ParameterError

logger = logging.getLogger(__name__)

_PARTY_PATHS = {Party.ALICE: ("a1", "a2"), Party.BOB: ("b1", "b2")}


def _check_probability(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} = {value} 不在 [0, 1] 内")
    return float(value)


def pauli_x(party: Party = Party.BOB) -> ModeMap:
    """比特翻转：该参与方两条路径上各放一块半波片"""
    upper, lower = _PARTY_PATHS[party]
    return extend(direct_sum([hwp(upper), hwp(lower)]), TRANSMISSION_BASIS)


def pauli_z(party: Party = Party.BOB) -> ModeMap:
    """相位翻转：该参与方的 V 模式乘 -1"""
    upper, lower = _PARTY_PATHS[party]
    v_modes = (modes_of(upper)[1], modes_of(lower)[1])
    return extend(phase_shift(v_modes, math.pi), TRANSMISSION_BASIS)


def _bell_error_maps() -> Dict[str, ModeMap]:
    identity = ModeMap.identity(TRANSMISSION_BASIS)
    x_bob, z_bob = pauli_x(Party.BOB), pauli_z(Party.BOB)
    return {
        "phi+": identity,
        "phi-": z_bob,
        "psi+": x_bob,
        # 先 Z 后 X，得到 (|HV>-|VH>) 而不带额外的全局负号
        "psi-": compose([z_bob, x_bob]),
    }


def require_single_pair(state: FockState) -> None:
    if state.basis != TRANSMISSION_BASIS:
        raise OccupancyError("输入态必须定义在传输端模式基上")
    for occupation in state.terms:
        alice = sum(occupation[:4])
        bob = sum(occupation[4:])
        if alice != 1 or bob != 1:
            raise OccupancyError("输入态必须是 Alice、Bob 各一个光子的单对态")


def bell_mixture_channel(input_state: FockState, params: BellMixtureParams) -> MixedState:
    """
    Bell 对角噪声信道

    仅在 Bob 的偏振上作用 {I, Z, X, XZ}，生成权重 (α, β, δ, η) 的四个分支，
    空间态保持不变。权重为 0 的分支被省略。
    """
    require_single_pair(input_state)
    state = input_state.normalized()
    maps = _bell_error_maps()
    items = [
        (weight, apply_mode_map(state, maps[name]), f"error={name}")
        for name, weight in params.weights().items()
    ]
    return MixedState.from_weighted(items)


def spatial_drift(
    source: Union[FockState, MixedState],
    params: DriftParams,
) -> Union[FockState, MixedState]:
    """
    空间相位漂移：整个相对相位记在下路径，|a2b2> 分支获得 e^{iφ}

    约定上只对 Alice 的 a2 模式加相位，a2、b2 共同贡献一次相对因子。
    """
    drift = extend(phase_shift(modes_of("a2"), params.phi), TRANSMISSION_BASIS)
    if isinstance(source, MixedState):
        return source.map_states(lambda s: apply_mode_map(s, drift))
    return apply_mode_map(source, drift)


def single_pair_bitflip_ensemble(pair: FockState, e: float) -> MixedState:
    """单对比特翻转：无错 1-e，Bob 偏振翻转 e"""
    e = _check_probability("e", e)
    require_single_pair(pair)
    flipped = apply_mode_map(pair, pauli_x(Party.BOB))
    return MixedState.from_weighted([
        (1.0 - e, pair.normalized(), "bitflip=none"),
        (e, flipped.normalized(), "bitflip=one"),
    ])


def two_pair_bitflip_ensemble(
    two_pair: FockState,
    e: float,
    params: PdcParams = PdcParams(),
) -> MixedState:
    """
    两对发射的成对比特翻转系综

    无错 S²|0>、单错 S·S'|0>、双错 S'²|0>，权重 (1-e)²、2e(1-e)、e²，
    其中 S' 是 Bob 偏振全部翻转后的单对多项式。params 必须与 two_pair 一致。
    """
    e = _check_probability("e", e)
    if not two_pair.allclose(pdc_two_pair_state(params)):
        raise ParameterError("输入态与给定光源参数的两对发射态不一致")
    clean = pair_terms(params)
    flipped = pair_terms(params, flip_bob=True)
    return MixedState.from_weighted([
        ((1.0 - e) ** 2, two_pair.normalized(), "bitflip=none"),
        (2.0 * e * (1.0 - e), state_from_creations(TRANSMISSION_BASIS, product_terms(clean, flipped)), "bitflip=one"),
        (e ** 2, state_from_creations(TRANSMISSION_BASIS, product_terms(flipped, flipped)), "bitflip=two"),
    ])


def _loss_amplitude(kept: int, lost: int, m: float) -> float:
    return math.sqrt(math.comb(kept + lost, lost) * (1.0 - m) ** kept * m ** lost)


def _loss_components(
    state: FockState,
    m: float,
) -> Iterator[Tuple[Occupation, FockState]]:
    """
    按环境中的光子分布 l 分解损耗后的态

    每个模式等效一个透过率 1-m 的分束器，环境模式在占据数基下被求迹，
    第 l 个分量为 Σ_n c_n Π sqrt(C(n,l)(1-m)^{n-l} m^l) |n-l>（未归一化）。
    """
    components: Dict[Occupation, Dict[Occupation, complex]] = defaultdict(lambda: defaultdict(complex))
    for occupation, amplitude in state.terms.items():
        for lost in product(*(range(n + 1) for n in occupation)):
            factor = 1.0
            for n, l in zip(occupation, lost):
                factor *= _loss_amplitude(n - l, l, m)
            if factor == 0.0:
                continue
            kept = tuple(n - l for n, l in zip(occupation, lost))
            components[lost][kept] += amplitude * factor
    for lost in sorted(components):
        yield lost, FockState(state.basis, components[lost])


def _lost_by_party(basis: Tuple[ModeId, ...], lost: Occupation) -> Tuple[int, int]:
    alice = sum(n for mode, n in zip(basis, lost) if mode.party is Party.ALICE)
    bob = sum(n for mode, n in zip(basis, lost) if mode.party is Party.BOB)
    return alice, bob


def _lossy_branches(branch: Branch, m: float) -> Iterator[Tuple[float, FockState, int, int]]:
    for lost, component in _loss_components(branch.state, m):
        weight = branch.weight * component.norm_squared
        if component.is_zero or weight == 0.0:
            continue
        lost_a, lost_b = _lost_by_party(component.basis, lost)
        yield weight, component.normalized(), lost_a, lost_b


def photon_loss(mixture: Union[FockState, MixedState], params: LossParams) -> MixedState:
    """
    逐光子独立损耗

    每个分支按所有存活样式展开，新分支标签记录丢失光子数及各方丢失数，总权重守恒。
    """
    mixture = as_mixture(mixture)
    m = params.m
    if m == 0.0:
        return mixture
    branches: List[Branch] = []
    for branch in mixture.branches:
        for weight, state, lost_a, lost_b in _lossy_branches(branch, m):
            tag = join_tags(branch.tag, f"lost={lost_a + lost_b}", f"lost_A={lost_a}", f"lost_B={lost_b}")
            branches.append(Branch(weight, state, tag))
    logger.debug("损耗 m=%s: %d 个分支展开为 %d 个", m, len(mixture.branches), len(branches))
    return MixedState(tuple(branches), conditioned=mixture.conditioned)


def classify_two_pair_survivors(lost: Tuple[int, int, int, int]) -> str:
    """
    由 (第一对 A 丢失, 第一对 B 丢失, 第二对 A 丢失, 第二对 B 丢失) 判断幸存组合

    恰好丢两个光子时分为 perfect（某一对完整保留）、cross（两对各留一个、分属两方）
    与 same-party（两个幸存光子在同一方）。
    """
    a1, b1, a2, b2 = lost
    total = a1 + b1 + a2 + b2
    if total != 2:
        return f"lost{total}"
    if a1 + b1 == 2 or a2 + b2 == 2:
        return "perfect"
    if a1 + a2 == 2 or b1 + b2 == 2:
        return "same-party"
    return "cross"


def pair_resolved_loss(
    pair_1: Union[FockState, MixedState],
    pair_2: Union[FockState, MixedState],
    params: LossParams,
) -> MixedState:
    """
    把两对发射视为可区分的两对分别施加损耗，再合并幸存光子

    标签中的 kept 字段给出幸存组合分类，用于恰好丢两个光子时的 2:2:2 计数。
    两对幸存光子落在同一模式时按归一化乘积处理，这类样式都会被后选择拒绝。
    """
    m = params.m
    first = list(_all_branches(as_mixture(pair_1), m))
    second = list(_all_branches(as_mixture(pair_2), m))
    branches: List[Branch] = []
    for w1, s1, a1, b1, t1 in first:
        for w2, s2, a2, b2, t2 in second:
            kept = classify_two_pair_survivors((a1, b1, a2, b2))
            merged = multiply(s1, s2).normalized()
            tag = join_tags(
                f"pair1={t1}" if t1 else "", f"pair2={t2}" if t2 else "",
                f"lost={a1 + b1 + a2 + b2}", f"kept={kept}",
            )
            branches.append(Branch(w1 * w2, merged, tag))
    return MixedState(tuple(branches))


def _all_branches(mixture: MixedState, m: float) -> Iterator[Tuple[float, FockState, int, int, str]]:
    for branch in mixture.branches:
        # 标签里可能含 '=' 与 ';'，这里只保留比特翻转信息
        origin = branch.tag.replace("bitflip=", "").replace(";", ",")
        for weight, state, lost_a, lost_b in _lossy_branches(branch, m):
            yield weight, state, lost_a, lost_b, origin
