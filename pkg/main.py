"""
DEPP 模拟器 - 主入口文件

命令行界面，用于运行线路追踪、纯化、有损光源链路与参数扫描。
"""

import asyncio
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

# 添加项目根目录到Python路径
sys.path.insert(0, str(Path(__file__).parent))

from models.experiment import ExperimentOutput, RunConfig, SweepTarget
from protocol.reference_states import coincidence_state_double_error, coincidence_state_no_error
from protocol.swapping import swapping_correlation
from utils.config_loader import load_config
from utils.errors import EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, ConfigError, SimulationError
from utils.file_utils import FileUtils
from utils.log_utils import setup_logging
from utils.settings import get_settings
from workflow.experiment_workflow import ExperimentWorkflow

console = Console()

DISPLAY_DIGITS = 6
MAX_DISPLAY_ROWS = 40


def experiment_options(func):
    """各实验子命令共用的选项"""
    options = [
        click.option("--config", "config_path", type=click.Path(), default=None, help="实验配置文件（INI）"),
        click.option("--out", "out", type=click.Path(), default=None, help="输出 CSV 路径"),
        click.option("--alpha", type=float, default=None, help="Φ+ 比例"),
        click.option("--beta", type=float, default=None, help="Φ- 比例"),
        click.option("--delta", type=float, default=None, help="Ψ+ 比例"),
        click.option("--eta", type=float, default=None, help="Ψ- 比例"),
        click.option("--phi", type=float, default=None, help="空间漂移相位（弧度）"),
        click.option("--p", "p", type=float, default=None, help="单对发射概率"),
        click.option("--m", "m", type=float, default=None, help="单光子损耗率"),
        click.option("--e", "e", type=float, default=None, help="比特翻转概率"),
        click.option("--verbose", "-v", is_flag=True, help="显示详细日志"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def collect_overrides(options: Dict[str, Any], kind: str) -> Dict[str, Any]:
    """命令行参数映射为 section.key 覆盖项"""
    return {
        "experiment.kind": kind,
        "noise.alpha": options.get("alpha"),
        "noise.beta": options.get("beta"),
        "noise.delta": options.get("delta"),
        "noise.eta": options.get("eta"),
        "drift.phi": options.get("phi"),
        "source.p": options.get("p"),
        "loss.m": options.get("m"),
        "errors.e": options.get("e"),
        "experiment.input": options.get("trace_input"),
        "sweep.target": options.get("target"),
    }


def run_experiment(ctx: click.Context, kind: str, options: Dict[str, Any]) -> None:
    """解析配置、执行工作流并以退出码结束"""
    settings = get_settings()
    setup_logging("DEBUG" if options.get("verbose") else settings.log_level)

    try:
        config = load_config(options.get("config_path"), collect_overrides(options, kind))
    except ConfigError as e:
        console.print(f"[red]❌ 配置错误: {escape(str(e))}[/red]")
        ctx.exit(EXIT_USAGE)

    if options.get("verbose"):
        display_config(config)

    with console.status(f"[bold green]正在运行 {kind}..."):
        output = asyncio.run(ExperimentWorkflow(settings).run(config, options.get("out")))

    code = ExperimentWorkflow.exit_code(output)
    if code == EXIT_OK:
        display_results(output)
    else:
        display_errors(output)
    ctx.exit(code)


def display_config(config: RunConfig):
    """显示配置信息"""
    config_table = Table(title="配置信息")
    config_table.add_column("配置项", style="cyan")
    config_table.add_column("值", style="magenta")
    config_table.add_row("实验类型", config.kind.value)
    config_table.add_row("噪声 (α,β,δ,η)", str(tuple(config.noise.weights().values())))
    config_table.add_row("漂移 φ", f"{config.drift.phi:.6g}")
    config_table.add_row("光源 (p,r,ϕ)", f"({config.source.p}, {config.source.r}, {config.source.pump_phase})")
    config_table.add_row("比特翻转 e", str(config.e))
    config_table.add_row("损耗 m", str(config.loss.m))
    if config.kind.value == "sweep":
        config_table.add_row("扫描对象", config.sweep.target.value)
    console.print(config_table)


def display_rows(columns: List[str], rows: List[Dict[str, Any]], title: str):
    table = Table(title=title)
    for column in columns:
        table.add_column(column, style="cyan" if column == columns[0] else "white")
    for row in rows[:MAX_DISPLAY_ROWS]:
        table.add_row(*(FileUtils.format_value(row.get(c), DISPLAY_DIGITS) for c in columns))
    console.print(table)
    if len(rows) > MAX_DISPLAY_ROWS:
        console.print(f"[dim]... 共 {len(rows)} 行，完整结果见 CSV[/dim]")


def display_results(output: ExperimentOutput):
    """显示处理结果"""
    console.print("[green]✅ 完成[/green]")
    if output.kind.value == "trace":
        for line in output.text_lines:
            console.print(line, highlight=False, markup=False)
    else:
        display_rows(output.columns, output.rows, title=f"{output.kind.value} 结果")

    if output.output_files:
        console.print("\n[bold cyan]输出文件:[/bold cyan]")
        for file_type, file_path in sorted(output.output_files.items()):
            console.print(f"  📄 {file_type}: {file_path}")


def display_errors(output: ExperimentOutput):
    """显示错误信息"""
    console.print("[red]❌ 运行失败[/red]")
    for error in output.errors:
        console.print(f"  🔸 {error.step.value} {error.error_type}: {escape(error.error_message)}")


@click.group()
def cli():
    """DEPP 模拟器 - 基于空间纠缠的确定性偏振纠缠纯化"""
    pass


@cli.command()
@experiment_options
@click.option("--input", "trace_input", type=click.Choice(["phi+", "phi-", "psi+", "psi-"]), default=None,
              help="输入偏振 Bell 态")
@click.pass_context
def trace(ctx, **options):
    """逐级追踪线路中的态演化"""
    run_experiment(ctx, "trace", options)


@cli.command()
@experiment_options
@click.pass_context
def purify(ctx, **options):
    """单对光源经噪声与漂移后的纯化"""
    run_experiment(ctx, "purify", options)


@cli.command()
@experiment_options
@click.pass_context
def pdc(ctx, **options):
    """有损参量下转换光源的完整链路"""
    run_experiment(ctx, "pdc", options)


@cli.command()
@experiment_options
@click.option("--target", type=click.Choice([t.value for t in SweepTarget]), default=None, help="扫描对象")
@click.pass_context
def sweep(ctx, **options):
    """参数网格扫描"""
    run_experiment(ctx, "sweep", options)


@cli.command()
@click.option("--state", "which", type=click.Choice(["double-error", "no-error"]), default="double-error",
              help="四模式符合态")
@click.pass_context
def swap(ctx, which):
    """显示纠缠交换的 Bell 结果联合概率表"""
    state = coincidence_state_double_error() if which == "double-error" else coincidence_state_no_error()
    try:
        result = swapping_correlation(state)
    except SimulationError as e:
        console.print(f"[red]❌ {escape(str(e))}[/red]")
        ctx.exit(EXIT_INTERNAL)

    table = Table(title=f"纠缠交换联合概率 ({which})")
    table.add_column("Alice \\ Bob", style="cyan")
    for name in result.outcomes:
        table.add_column(name, style="white")
    for name, row in zip(result.outcomes, result.table):
        table.add_row(name, *(FileUtils.format_value(v, DISPLAY_DIGITS) for v in row))
    console.print(table)
    console.print(f"互信息: {result.mutual_information:.6f} 比特")


@cli.command()
def info():
    """显示运行设置与默认参数"""
    console.print(Panel.fit(
        "[bold blue]DEPP 模拟器 系统信息[/bold blue]",
        border_style="blue"
    ))

    settings = get_settings()
    env_table = Table(title="运行设置 (DEPP_*)")
    env_table.add_column("配置项", style="cyan")
    env_table.add_column("值", style="white")
    for name, value in settings.model_dump().items():
        env_table.add_row(name, str(value))
    console.print(env_table)

    defaults = RunConfig()
    defaults_table = Table(title="默认实验参数")
    defaults_table.add_column("参数", style="cyan")
    defaults_table.add_column("默认值", style="white")
    defaults_table.add_row("noise (α,β,δ,η)", str(tuple(defaults.noise.weights().values())))
    defaults_table.add_row("drift φ", str(defaults.drift.phi))
    defaults_table.add_row("source (p, r, ϕ)", f"({defaults.source.p}, {defaults.source.r}, {defaults.source.pump_phase})")
    defaults_table.add_row("e", str(defaults.e))
    defaults_table.add_row("m", str(defaults.loss.m))
    defaults_table.add_row("sweep.target", defaults.sweep.target.value)
    console.print(defaults_table)


def main(argv: Optional[List[str]] = None) -> int:
    """命令行入口：用法错误返回 1，内部错误返回 2"""
    try:
        result = cli.main(args=argv, prog_name="depp", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        console.print("\n[yellow]⚠️ 用户中断操作[/yellow]")
        return EXIT_USAGE
    except SimulationError as e:
        console.print(f"[red]❌ 发生错误: {escape(str(e))}[/red]")
        return EXIT_INTERNAL
    return result if isinstance(result, int) else EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
