"""
参量下转换光源节点

有损两对发射源的完整链路，输出三种保真度记账与闭式值的比较。
"""

import asyncio
import logging
from typing import Any, Dict

from models.experiment import RunConfig
from models.report import PdcReport
from protocol.closed_form import lossy_source_oracle_deviation
from protocol.purification import pdc_pipeline
from utils.settings import AppSettings

logger = logging.getLogger(__name__)

PDC_COLUMNS = [
    "p", "m", "e", "r", "pump_phase",
    "accepted_probability", "closed_form_fidelity", "intact_pair_fidelity", "oracle_fidelity",
    "oracle_deviation", "expected_deviation", "bosonic_fidelity", "bosonic_accepted_probability",
    "single_pair", "perfect_pair", "cross_pair", "other",
]


def pdc_row(report: PdcReport, r: float, pump_phase: float, expected_deviation: float) -> Dict[str, Any]:
    return {
        "p": report.p,
        "m": report.m,
        "e": report.e,
        "r": r,
        "pump_phase": pump_phase,
        "accepted_probability": report.accepted_probability,
        "closed_form_fidelity": report.closed_form_fidelity,
        "intact_pair_fidelity": report.intact_pair_fidelity,
        "oracle_fidelity": report.oracle_fidelity,
        "oracle_deviation": report.oracle_deviation,
        "expected_deviation": expected_deviation,
        "bosonic_fidelity": report.bosonic_fidelity,
        "bosonic_accepted_probability": report.bosonic_accepted_probability,
        **report.accounting.model_dump(),
    }


class PdcNode:
    """有损光源节点"""

    def __init__(self, settings: AppSettings):
        self.settings = settings

    async def run_pdc(self, config: RunConfig) -> Dict[str, Any]:
        report = await asyncio.to_thread(pdc_pipeline, config.source, config.e, config.loss.m)
        row = pdc_row(
            report, config.source.r, config.source.pump_phase,
            lossy_source_oracle_deviation(config.source.p, config.loss.m),
        )
        logger.info("PDC 节点完成: 接受概率 %.6g", report.accepted_probability)
        text_lines = [f"{name:<28} {row[name]}" for name in PDC_COLUMNS]
        return {
            "columns": PDC_COLUMNS,
            "rows": [row],
            "text_lines": text_lines,
            "report": {"kind": "pdc", **report.model_dump()},
        }
