"""
线路追踪节点

输出输入态经过每一级元件后的 Fock 展开。
"""

import asyncio
import logging
from typing import Any, Dict, List, Tuple

from fock.state import FockState, format_complex, format_occupation
from models.channels import BellMixtureParams
from models.experiment import RunConfig
from optics.channels import bell_mixture_channel, spatial_drift
from optics.sources import ideal_hyper_pair
from protocol.circuit import trace_evolution
from utils.settings import AppSettings

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["input", "phi", "stage", "term", "occupation", "amplitude"]


class TraceNode:
    """线路追踪节点"""

    def __init__(self, settings: AppSettings):
        self.settings = settings

    @staticmethod
    def prepare_input(config: RunConfig) -> FockState:
        """理想超纠缠对加上所选 Bell 误差与空间漂移"""
        noisy = bell_mixture_channel(ideal_hyper_pair(), BellMixtureParams.pure(config.trace_input))
        return spatial_drift(noisy.branches[0].state, config.drift)

    def render_lines(self, trace: List[Tuple[str, FockState]]) -> List[str]:
        """每一级一行，标签列对齐"""
        width = max(len(label) for label, _ in trace)
        digits = self.settings.float_digits
        return [f"{label:<{width}}  {state.describe(digits)}" for label, state in trace]

    async def run_trace(self, config: RunConfig) -> Dict[str, Any]:
        trace = await asyncio.to_thread(trace_evolution, self.prepare_input(config))
        digits = self.settings.float_digits
        rows = []
        stages = []
        for label, state in trace:
            terms = {}
            for index, occupation in enumerate(sorted(state.terms)):
                readable = format_occupation(state.basis, occupation)
                amplitude = state.terms[occupation]
                rows.append({
                    "input": config.trace_input,
                    "phi": config.drift.phi,
                    "stage": label,
                    "term": index,
                    "occupation": readable,
                    "amplitude": amplitude,
                })
                terms[readable] = format_complex(amplitude, digits)
            stages.append({"stage": label, "terms": terms, "norm": state.norm})
        logger.info("追踪完成: %d 级, %d 项", len(trace), len(rows))
        return {
            "columns": TRACE_COLUMNS,
            "rows": rows,
            "text_lines": self.render_lines(trace),
            "report": {"kind": "trace", "input": config.trace_input, "phi": config.drift.phi, "stages": stages},
        }
