"""
实验工作流

基于 LangGraph 的实验编排：配置检查 → 按实验类型分派 → 输出组装。
"""

import logging
from pathlib import Path
from typing import Any, Awaitable, Callable, Dict, Optional

from langgraph.graph import END, StateGraph

from models.experiment import (
    ExperimentKind, ExperimentOutput, ExperimentState, ExperimentStatus, ExperimentStep, RunConfig,
)
from utils.errors import EXIT_INTERNAL, EXIT_OK, exit_code_for
from utils.file_utils import FileUtils
from utils.settings import AppSettings, get_settings
from workflow.nodes.pdc_node import PdcNode
from workflow.nodes.purify_node import PurifyNode
from workflow.nodes.sweep_node import SweepNode
from workflow.nodes.trace_node import TraceNode

logger = logging.getLogger(__name__)

KIND_STEPS = {
    ExperimentKind.TRACE: ExperimentStep.TRACE,
    ExperimentKind.PURIFY: ExperimentStep.PURIFY,
    ExperimentKind.PDC: ExperimentStep.PDC,
    ExperimentKind.SWEEP: ExperimentStep.SWEEP,
}


class ExperimentWorkflow:
    """实验工作流类"""

    def __init__(self, settings: Optional[AppSettings] = None):
        self.settings = settings or get_settings()

        # 初始化节点
        self.trace_node = TraceNode(self.settings)
        self.purify_node = PurifyNode(self.settings)
        self.pdc_node = PdcNode(self.settings)
        self.sweep_node = SweepNode(self.settings)

        # 构建工作流图
        self.workflow_graph = self._build_workflow_graph()

    def _build_workflow_graph(self):
        """构建 LangGraph 工作流图"""
        workflow = StateGraph(ExperimentState)

        workflow.add_node("config_check", self._config_check_node)
        workflow.add_node("trace", self._compute_node(ExperimentStep.TRACE, self.trace_node.run_trace))
        workflow.add_node("purify", self._compute_node(ExperimentStep.PURIFY, self.purify_node.run_purify))
        workflow.add_node("pdc", self._compute_node(ExperimentStep.PDC, self.pdc_node.run_pdc))
        workflow.add_node("sweep", self._compute_node(ExperimentStep.SWEEP, self.sweep_node.run_sweep))
        workflow.add_node("output_assembler", self._output_assembly_node)
        workflow.add_node("error_handler", self._error_handler_node)

        workflow.set_entry_point("config_check")

        # 按实验类型分派
        workflow.add_conditional_edges(
            "config_check",
            self._route_by_kind,
            {
                "trace": "trace",
                "purify": "purify",
                "pdc": "pdc",
                "sweep": "sweep",
                "error": "error_handler",
            }
        )

        for step in KIND_STEPS.values():
            workflow.add_conditional_edges(
                step.value,
                self._continue_or_error(step),
                {"continue": "output_assembler", "error": "error_handler"},
            )

        workflow.add_conditional_edges(
            "output_assembler",
            self._continue_or_error(ExperimentStep.OUTPUT_ASSEMBLY),
            {"continue": END, "error": "error_handler"},
        )
        workflow.add_edge("error_handler", END)

        return workflow.compile()

    async def run(self, config: RunConfig, output_path: Optional[str] = None) -> ExperimentOutput:
        """
        执行一次实验

        Args:
            config: 运行配置
            output_path: 输出 CSV 路径，优先于配置中的 output

        Returns:
            ExperimentOutput: 工作流输出结果
        """
        path = output_path or config.output or FileUtils.default_output_path(
            self.settings.output_dir, config.kind.value
        )
        initial_state = ExperimentState(config=config, output_path=path, status=ExperimentStatus.RUNNING)
        result = await self.workflow_graph.ainvoke(initial_state)
        final_state = ExperimentState.model_validate(result)
        return ExperimentOutput.from_state(final_state)

    @staticmethod
    def exit_code(output: ExperimentOutput) -> int:
        if output.is_successful:
            return EXIT_OK
        return max(exit_code_for(error.error_type) for error in output.errors) if output.errors else EXIT_INTERNAL

    # 工作流节点实现

    async def _config_check_node(self, state: ExperimentState) -> Dict[str, Any]:
        """配置检查节点：输出目录必须可写"""
        state.start_step(ExperimentStep.CONFIG_CHECK)
        try:
            parent = Path(state.output_path).parent
            if parent.exists() and not parent.is_dir():
                raise NotADirectoryError(f"输出路径的上级不是目录: {parent}")
            state.complete_step(ExperimentStep.CONFIG_CHECK, {"kind": state.config.kind.value})
        except Exception as e:
            state.fail_step(ExperimentStep.CONFIG_CHECK, e)
        return {"step_results": state.step_results, "errors": state.errors, "current_step": state.current_step}

    def _compute_node(
        self,
        step: ExperimentStep,
        compute: Callable[[RunConfig], Awaitable[Dict[str, Any]]],
    ) -> Callable[[ExperimentState], Awaitable[Dict[str, Any]]]:
        """把节点的计算函数包装为工作流节点，异常记录到状态中"""

        async def node(state: ExperimentState) -> Dict[str, Any]:
            state.start_step(step)
            update: Dict[str, Any] = {}
            try:
                update = await compute(state.config)
                state.complete_step(step, {"rows": len(update.get("rows", []))})
            except Exception as e:
                logger.error("步骤 %s 失败: %s", step.value, e, exc_info=logger.isEnabledFor(logging.DEBUG))
                state.fail_step(step, e)
                update = {}
            update.update(step_results=state.step_results, errors=state.errors, current_step=step)
            return update

        return node

    async def _output_assembly_node(self, state: ExperimentState) -> Dict[str, Any]:
        """输出组装节点：写出 CSV、文本与报告"""
        state.start_step(ExperimentStep.OUTPUT_ASSEMBLY)
        output_files: Dict[str, str] = {}
        status = ExperimentStatus.COMPLETED
        try:
            output_files = FileUtils.create_complete_output(
                ExperimentOutput.from_state(state), state.output_path, self.settings.float_digits
            )
            state.complete_step(ExperimentStep.OUTPUT_ASSEMBLY, {"files": len(output_files)})
        except Exception as e:
            logger.error("写出结果失败: %s", e)
            state.fail_step(ExperimentStep.OUTPUT_ASSEMBLY, e)
            status = ExperimentStatus.FAILED
        return {
            "output_files": output_files,
            "status": status,
            "step_results": state.step_results,
            "errors": state.errors,
            "current_step": ExperimentStep.OUTPUT_ASSEMBLY,
        }

    async def _error_handler_node(self, state: ExperimentState) -> Dict[str, Any]:
        """错误处理节点"""
        if state.errors:
            last = state.errors[-1]
            logger.error("实验失败 [%s] %s: %s", last.step.value, last.error_type, last.error_message)
        return {"status": ExperimentStatus.FAILED}

    # 条件判断函数

    def _route_by_kind(self, state: ExperimentState) -> str:
        if state.is_step_failed(ExperimentStep.CONFIG_CHECK):
            return "error"
        return state.config.kind.value

    @staticmethod
    def _continue_or_error(step: ExperimentStep) -> Callable[[ExperimentState], str]:
        def decide(state: ExperimentState) -> str:
            return "error" if state.is_step_failed(step) else "continue"
        return decide
