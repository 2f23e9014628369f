"""
参数扫描节点

网格上的各点相互独立，受信号量限制并发计算，结果按网格顺序输出。
"""

import asyncio
import logging
import math
from typing import Any, Callable, Dict, List, Sequence

from models.channels import BellMixtureParams, DriftParams, PdcParams
from models.experiment import RunConfig, SweepTarget
from optics.channels import two_pair_bitflip_ensemble
from optics.sources import pdc_two_pair_state
from protocol.closed_form import lossy_source_oracle_deviation, postselected_bitflip_fidelity
from protocol.purification import four_mode_probability, pdc_pipeline, postselected_bitflip_oracle
from utils.settings import AppSettings
from workflow.nodes.pdc_node import PDC_COLUMNS, pdc_row
from workflow.nodes.purify_node import run_purification

logger = logging.getLogger(__name__)

SWEEP_COLUMNS: Dict[SweepTarget, List[str]] = {
    SweepTarget.BITFLIP: ["e", "closed_form_fidelity", "oracle_fidelity", "difference", "four_mode_probability"],
    SweepTarget.LOSS: PDC_COLUMNS,
    SweepTarget.SIMPLEX: [
        "alpha", "beta", "delta", "eta",
        "accepted_probability", "conditional_fidelity", "min_fidelity", "c1d1_c2d2", "c2d1_c1d2",
    ],
    SweepTarget.DRIFT: [
        "phi", "accepted_probability", "conditional_fidelity", "expected_fidelity",
        "min_purity", "compensated_fidelity", "max_phase_error",
    ],
}


def bitflip_cell(e: float) -> Dict[str, Any]:
    closed_form = postselected_bitflip_fidelity(e)
    oracle = postselected_bitflip_oracle(e)
    ensemble = two_pair_bitflip_ensemble(pdc_two_pair_state(), e)
    return {
        "e": e,
        "closed_form_fidelity": closed_form,
        "oracle_fidelity": oracle,
        "difference": oracle - closed_form,
        "four_mode_probability": four_mode_probability(ensemble),
    }


def loss_cell(config: RunConfig, p: float, m: float) -> Dict[str, Any]:
    source = PdcParams(p=p, r=config.source.r, pump_phase=config.source.pump_phase)
    report = pdc_pipeline(source, config.e, m)
    return pdc_row(report, source.r, source.pump_phase, lossy_source_oracle_deviation(p, m))


def simplex_cell(config: RunConfig, point: Sequence[float]) -> Dict[str, Any]:
    alpha, beta, delta, eta = point
    noise = BellMixtureParams(alpha=alpha, beta=beta, delta=delta, eta=eta)
    report = run_purification(config.model_copy(update={"noise": noise, "drift": DriftParams()}))
    accepted = report.accepted_outcomes
    return {
        "alpha": alpha,
        "beta": beta,
        "delta": delta,
        "eta": eta,
        "accepted_probability": report.accepted_probability,
        "conditional_fidelity": report.conditional_fidelity,
        "min_fidelity": min(o.fidelity for o in accepted),
        "c1d1_c2d2": report.probability_of("c1d1") + report.probability_of("c2d2"),
        "c2d1_c1d2": report.probability_of("c2d1") + report.probability_of("c1d2"),
    }


def drift_cell(config: RunConfig, phi: float) -> Dict[str, Any]:
    drift = DriftParams(phi=phi)
    report = run_purification(config.model_copy(update={"drift": drift}))
    accepted = report.accepted_outcomes
    return {
        "phi": phi,
        "accepted_probability": report.accepted_probability,
        "conditional_fidelity": report.conditional_fidelity,
        "expected_fidelity": math.cos(phi / 2.0) ** 2,
        "min_purity": min(o.purity for o in accepted),
        "compensated_fidelity": report.compensated_fidelity,
        "max_phase_error": max(
            abs(math.remainder(o.relative_phase - drift.reduced_phi, 2 * math.pi)) for o in accepted
        ),
    }


class SweepNode:
    """参数扫描节点"""

    def __init__(self, settings: AppSettings):
        self.settings = settings

    def build_cells(self, config: RunConfig) -> List[Callable[[], Dict[str, Any]]]:
        """按网格顺序列出每个点的计算函数"""
        sweep = config.sweep
        if sweep.target is SweepTarget.BITFLIP:
            return [lambda e=e: bitflip_cell(e) for e in sweep.e.values()]
        if sweep.target is SweepTarget.LOSS:
            return [
                lambda p=p, m=m: loss_cell(config, p, m)
                for p in sweep.p.values() for m in sweep.m.values()
            ]
        if sweep.target is SweepTarget.SIMPLEX:
            return [lambda point=point: simplex_cell(config, point) for point in sweep.simplex_points()]
        return [lambda phi=phi: drift_cell(config, phi) for phi in sweep.phi.values()]

    async def run_sweep(self, config: RunConfig) -> Dict[str, Any]:
        cells = self.build_cells(config)
        semaphore = asyncio.Semaphore(self.settings.max_concurrency)

        async def evaluate(cell: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
            async with semaphore:
                return await asyncio.to_thread(cell)

        # gather 按传入顺序返回结果，与完成顺序无关
        rows = await asyncio.gather(*(evaluate(cell) for cell in cells))
        target = config.sweep.target
        logger.info("扫描 %s 完成: %d 个网格点", target.value, len(rows))
        columns = SWEEP_COLUMNS[target]
        return {
            "columns": columns,
            "rows": list(rows),
            "text_lines": [],
            "report": {"kind": "sweep", "target": target.value, "points": len(rows)},
        }
