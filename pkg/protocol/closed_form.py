"""
闭式预测

两对发射比特翻转下四模式后选择的保真度，以及有损参量下转换光源下
双模符合事件的保真度（三种记账方式）。
"""

from utils.errors import ParameterError

# 恰好丢两个光子且被接受的事件对分子的贡献，以 p²m²(1-m)² 为单位
BOSONIC_TWO_LOST_CREDIT = 2.8
PAIR_RESOLVED_TWO_LOST_CREDIT = 2.5
PERFECT_PAIR_TWO_LOST_CREDIT = 2.0


def _check_unit_interval(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} = {value} 不在 [0, 1] 内")
    return float(value)


def postselected_bitflip_fidelity(e: float) -> float:
    """
    F = ((1-e)² + e²/4) / ((1-e)² + e²)

    单错分支不产生四模式符合；双错分支经纠缠交换后 (c1,d1) 上为最大混合态，只贡献 1/4。
    """
    e = _check_unit_interval("e", e)
    clean = (1.0 - e) ** 2
    double = e ** 2
    return (clean + double / 4.0) / (clean + double)


def _lossy_denominator(p: float, m: float) -> float:
    survive = (1.0 - m) ** 2
    return p * survive + 4.0 * p ** 2 * m ** 2 * survive


def _check_source(p: float, m: float):
    if not 0.0 < p <= 1.0:
        raise ParameterError(f"p = {p} 不在 (0, 1] 内")
    m = _check_unit_interval("m", m)
    if m == 1.0:
        raise ParameterError("m = 1 时没有光子到达，保真度无定义")
    return float(p), m


def _lossy_fidelity(p: float, m: float, two_lost_credit: float) -> float:
    p, m = _check_source(p, m)
    survive = (1.0 - m) ** 2
    numerator = p * survive + two_lost_credit * p ** 2 * m ** 2 * survive
    return numerator / _lossy_denominator(p, m)


def lossy_source_fidelity(p: float, m: float) -> float:
    """
    F' = (p(1-m)² + 2p²m²(1-m)²) / (p(1-m)² + 4p²m²(1-m)²)

    分子只计单对无损事件和两对中一对完整保留的事件；与比特翻转概率无关。
    """
    return _lossy_fidelity(p, m, PERFECT_PAIR_TWO_LOST_CREDIT)


def lossy_source_oracle_fidelity(p: float, m: float) -> float:
    """两对按可区分处理时的精确值：交叉幸存事件以 1/4 计入"""
    return _lossy_fidelity(p, m, PAIR_RESOLVED_TWO_LOST_CREDIT)


def lossy_source_oracle_deviation(p: float, m: float) -> float:
    """0.5·p²m²(1-m)² / 分母"""
    p, m = _check_source(p, m)
    return 0.5 * p ** 2 * m ** 2 * (1.0 - m) ** 2 / _lossy_denominator(p, m)


def bosonic_lossy_source_fidelity(p: float, m: float) -> float:
    """e = 0 时全玻色不可区分模型的精确值"""
    return _lossy_fidelity(p, m, BOSONIC_TWO_LOST_CREDIT)
