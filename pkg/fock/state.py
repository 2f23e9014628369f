"""
稀疏 Fock 态

态表示为 {占据数向量: 复振幅}，占据数向量按固定的模式基排列。
所有对象构造后不可变，运算均返回新对象。
"""

import math
from collections import defaultdict
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from fock.mode_map import ModeMap, basis_index, check_basis
from fock.tags import join_tags
from models.modes import ModeId
from utils.errors import BasisMismatchError, ModeError, ParameterError, PhotonNumberError

Occupation = Tuple[int, ...]

MAX_PHOTONS = 4
PRUNE_THRESHOLD = 1e-15
NORM_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class FockState:
    """多模玻色态（不自动归一化）"""
    basis: Tuple[ModeId, ...]
    terms: Mapping[Occupation, complex]

    def __post_init__(self):
        basis = check_basis(self.basis)
        pruned: Dict[Occupation, complex] = {}
        for occupation, amplitude in dict(self.terms).items():
            occupation = tuple(int(n) for n in occupation)
            if len(occupation) != len(basis):
                raise BasisMismatchError(
                    f"占据数向量长度 {len(occupation)} 与模式基长度 {len(basis)} 不符"
                )
            if any(n < 0 for n in occupation):
                raise PhotonNumberError(f"占据数不能为负: {occupation}")
            if sum(occupation) > MAX_PHOTONS:
                raise PhotonNumberError(f"光子数 {sum(occupation)} 超过上限 {MAX_PHOTONS}")
            amplitude = complex(amplitude)
            if abs(amplitude) >= PRUNE_THRESHOLD:
                pruned[occupation] = amplitude
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "terms", MappingProxyType(pruned))

    @property
    def index(self) -> Dict[ModeId, int]:
        return basis_index(self.basis)

    @property
    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.terms.values()))

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_squared)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_squared - 1.0) <= NORM_TOLERANCE

    @property
    def photon_numbers(self) -> Tuple[int, ...]:
        """各项出现的总光子数（升序去重）"""
        return tuple(sorted({sum(occ) for occ in self.terms}))

    def amplitude(self, occupation: Union[Occupation, Mapping[ModeId, int]]) -> complex:
        if isinstance(occupation, Mapping):
            occupation = occupation_vector(self.basis, occupation)
        return self.terms.get(tuple(occupation), 0j)

    def scaled(self, factor: complex) -> "FockState":
        return FockState(self.basis, {occ: factor * amp for occ, amp in self.terms.items()})

    def normalized(self) -> "FockState":
        norm = self.norm
        if norm < PRUNE_THRESHOLD:
            raise ParameterError("零向量无法归一化")
        return self.scaled(1.0 / norm)

    def allclose(self, other: "FockState", tolerance: float = NORM_TOLERANCE) -> bool:
        """逐项振幅比较"""
        if self.basis != other.basis:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.amplitude(k) - other.amplitude(k)) <= tolerance for k in keys)

    def describe(self, precision: int = 6) -> str:
        """可读形式，例如 0.5|a1H b1H> + 0.5|a2V b2V>"""
        if self.is_zero:
            return "0"
        parts = []
        for occupation in sorted(self.terms):
            amplitude = self.terms[occupation]
            parts.append(f"({format_complex(amplitude, precision)})|{format_occupation(self.basis, occupation)}>")
        return " + ".join(parts)


def occupation_vector(basis: Sequence[ModeId], counts: Mapping[ModeId, int]) -> Occupation:
    index = basis_index(basis)
    vector = [0] * len(index)
    for mode, n in counts.items():
        if mode not in index:
            raise ModeError(f"模式 {mode} 不在模式基中")
        vector[index[mode]] = int(n)
    return tuple(vector)


def format_occupation(basis: Sequence[ModeId], occupation: Occupation) -> str:
    if not any(occupation):
        return "vac"
    labels = []
    for mode, n in zip(basis, occupation):
        if n == 1:
            labels.append(mode.label)
        elif n > 1:
            labels.append(f"{mode.label}^{n}")
    return " ".join(labels)


def format_complex(value: complex, precision: int = 12) -> str:
    return f"{value.real:.{precision}g},{value.imag:.{precision}g}"


def vacuum(basis: Sequence[ModeId]) -> FockState:
    """真空态 |0>"""
    basis = check_basis(basis)
    return FockState(basis, {(0,) * len(basis): 1.0 + 0j})


def fock_basis_state(basis: Sequence[ModeId], counts: Mapping[ModeId, int]) -> FockState:
    """归一化的占据数本征态 |n>"""
    basis = check_basis(basis)
    return FockState(basis, {occupation_vector(basis, counts): 1.0 + 0j})


def create(state: FockState, mode: ModeId) -> FockState:
    """作用产生算符 a†：|n> -> sqrt(n+1)|n+1>"""
    index = state.index
    if mode not in index:
        raise ModeError(f"模式 {mode} 不在模式基中")
    k = index[mode]
    terms: Dict[Occupation, complex] = {}
    for occupation, amplitude in state.terms.items():
        raised = list(occupation)
        raised[k] += 1
        terms[tuple(raised)] = amplitude * math.sqrt(raised[k])
    return FockState(state.basis, terms)


def create_all(state: FockState, modes: Iterable[ModeId]) -> FockState:
    for mode in modes:
        state = create(state, mode)
    return state


def superpose(parts: Sequence[Tuple[complex, FockState]]) -> FockState:
    """线性叠加 Σ c_k |ψ_k>，不归一化"""
    if not parts:
        raise ParameterError("叠加至少需要一个分量")
    basis = parts[0][1].basis
    terms: Dict[Occupation, complex] = defaultdict(complex)
    for coefficient, state in parts:
        if state.basis != basis:
            raise BasisMismatchError("叠加的各分量模式基不一致")
        for occupation, amplitude in state.terms.items():
            terms[occupation] += coefficient * amplitude
    return FockState(basis, terms)


def inner(a: FockState, b: FockState) -> complex:
    """内积 <a|b>"""
    if a.basis != b.basis:
        raise BasisMismatchError("内积的两个态模式基不一致")
    return complex(sum(amp.conjugate() * b.terms[occ] for occ, amp in a.terms.items() if occ in b.terms))


def _factorial_root(occupation: Occupation) -> float:
    return math.sqrt(math.prod(math.factorial(n) for n in occupation))


def apply_mode_map(state: FockState, mode_map: ModeMap) -> FockState:
    """
    将线性模式映射作用到态上

    每一项 |n> = Π (a†_i)^{n_i}/sqrt(n_i!) |0> 被改写为映射后产生算符的乘积，
    展开后再按玻色组合因子 sqrt(k!) 折算回占据数基。
    """
    if state.basis != mode_map.input_basis:
        raise BasisMismatchError(
            f"态的模式基 {[m.label for m in state.basis]} 与映射输入基 "
            f"{[m.label for m in mode_map.input_basis]} 不一致"
        )
    columns = mode_map.sparse_columns
    out_dim = len(mode_map.output_basis)
    result: Dict[Occupation, complex] = defaultdict(complex)

    for occupation, amplitude in state.terms.items():
        prefactor = amplitude / _factorial_root(occupation)
        polynomial: Dict[Occupation, complex] = {(0,) * out_dim: 1.0 + 0j}
        for i, n in enumerate(occupation):
            for _ in range(n):
                expanded: Dict[Occupation, complex] = defaultdict(complex)
                for monomial, coefficient in polynomial.items():
                    for j, u in columns[i]:
                        raised = list(monomial)
                        raised[j] += 1
                        expanded[tuple(raised)] += coefficient * u
                polynomial = expanded
        for monomial, coefficient in polynomial.items():
            result[monomial] += prefactor * coefficient * _factorial_root(monomial)

    return FockState(mode_map.output_basis, result)


def multiply(a: FockState, b: FockState) -> FockState:
    """
    两个态的产生算符多项式相乘后作用于真空

    |n>|k> 合并为 sqrt((n+k)!/(n!k!)) |n+k>；两态占据不同模式时结果仍归一化。
    """
    if a.basis != b.basis:
        raise BasisMismatchError("相乘的两个态模式基不一致")
    terms: Dict[Occupation, complex] = defaultdict(complex)
    for occ_a, amp_a in a.terms.items():
        for occ_b, amp_b in b.terms.items():
            merged = tuple(x + y for x, y in zip(occ_a, occ_b))
            factor = _factorial_root(merged) / (_factorial_root(occ_a) * _factorial_root(occ_b))
            terms[merged] += amp_a * amp_b * factor
    return FockState(a.basis, terms)


@dataclass(frozen=True, eq=False)
class Branch:
    """系综分支：权重、归一化态与来源标签"""
    weight: float
    state: FockState
    tag: str = ""


@dataclass(frozen=True, eq=False)
class MixedState:
    """纯态系综。conditioned=True 表示已后选择、允许总权重小于 1"""
    branches: Tuple[Branch, ...]
    conditioned: bool = False

    def __post_init__(self):
        branches = tuple(self.branches)
        if not branches:
            raise ParameterError("系综至少需要一个分支")
        basis = branches[0].state.basis
        for branch in branches:
            if branch.weight < -NORM_TOLERANCE:
                raise ParameterError(f"分支 {branch.tag!r} 权重为负: {branch.weight}")
            if branch.state.basis != basis:
                raise BasisMismatchError("系综各分支模式基不一致")
            if not branch.state.is_normalized:
                raise ParameterError(f"分支 {branch.tag!r} 的态未归一化 (norm²={branch.state.norm_squared})")
        total = sum(b.weight for b in branches)
        if self.conditioned:
            if total > 1.0 + NORM_TOLERANCE:
                raise ParameterError(f"条件系综总权重 {total} 超过 1")
        elif abs(total - 1.0) > NORM_TOLERANCE:
            raise ParameterError(f"系综总权重 {total} 不为 1")
        object.__setattr__(self, "branches", branches)

    @classmethod
    def pure(cls, state: FockState, tag: str = "") -> "MixedState":
        return cls((Branch(1.0, state.normalized(), tag),))

    @classmethod
    def from_weighted(
        cls,
        items: Iterable[Tuple[float, FockState, str]],
        conditioned: bool = False,
        drop_below: float = 0.0,
    ) -> "MixedState":
        """由 (权重, 态, 标签) 构造，权重为 drop_below 及以下的分支被省略"""
        branches = [Branch(float(w), s, t) for w, s, t in items if w > drop_below]
        return cls(tuple(branches), conditioned=conditioned)

    @property
    def basis(self) -> Tuple[ModeId, ...]:
        return self.branches[0].state.basis

    @property
    def total_weight(self) -> float:
        return float(sum(b.weight for b in self.branches))

    @property
    def tags(self) -> List[str]:
        return [b.tag for b in self.branches]

    def weight_by_tag(self) -> Dict[str, float]:
        weights: Dict[str, float] = defaultdict(float)
        for branch in self.branches:
            weights[branch.tag] += branch.weight
        return dict(weights)

    def map_states(self, transform) -> "MixedState":
        """对每个分支的态作用同一个保范变换"""
        return MixedState(
            tuple(Branch(b.weight, transform(b.state), b.tag) for b in self.branches),
            conditioned=self.conditioned,
        )

    def with_prefix(self, prefix: str, scale: float = 1.0) -> List[Branch]:
        """为标签加前缀并按比例缩放权重，用于拼接系综"""
        return [
            Branch(b.weight * scale, b.state, join_tags(prefix, b.tag))
            for b in self.branches
        ]


def as_mixture(source: Union[FockState, MixedState], tag: str = "") -> MixedState:
    if isinstance(source, MixedState):
        return source
    return MixedState.pure(source, tag)


def combine(
    parts: Sequence[Tuple[float, MixedState, str]],
    conditioned: bool = False,
    drop_below: float = 0.0,
) -> MixedState:
    """按外层权重拼接多个系综，标签加上外层前缀"""
    branches: List[Branch] = []
    for weight, mixture, prefix in parts:
        if weight <= drop_below:
            continue
        branches.extend(b for b in mixture.with_prefix(prefix, weight) if b.weight > drop_below)
    return MixedState(tuple(branches), conditioned=conditioned)


def positions_of(basis: Sequence[ModeId], modes: Iterable[ModeId]) -> List[int]:
    index = basis_index(basis)
    try:
        return [index[m] for m in modes]
    except KeyError as exc:
        raise ModeError(f"模式 {exc.args[0]} 不在模式基中") from exc


def state_from_creations(
    basis: Sequence[ModeId],
    monomials: Sequence[Tuple[complex, Sequence[ModeId]]],
    normalize_result: bool = True,
) -> FockState:
    """由产生算符单项式之和 Σ c Π a†|0> 构造态"""
    base = vacuum(basis)
    parts = [(coefficient, create_all(base, modes)) for coefficient, modes in monomials]
    state = superpose(parts)
    return state.normalized() if normalize_result else state
