"""
文件处理工具函数

提供 CSV、trace 文本与 JSON 报告的确定性输出。
产物中不写入时间戳，相同配置得到逐字节相同的文件。
"""

import csv
import io
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence

import numpy as np
import orjson

from models.experiment import ExperimentOutput


class FileUtils:
    """文件处理工具类"""

    @staticmethod
    def ensure_output_directory(output_dir: str) -> Path:
        """确保输出目录存在"""
        output_path = Path(output_dir)
        output_path.mkdir(parents=True, exist_ok=True)
        return output_path

    @staticmethod
    def format_value(value: Any, digits: int = 12) -> str:
        """浮点按有效数字输出，复数输出为 "re,im" """
        if isinstance(value, bool) or value is None:
            return "" if value is None else str(value).lower()
        if isinstance(value, (complex, np.complexfloating)):
            return f"{value.real:.{digits}g},{value.imag:.{digits}g}"
        if isinstance(value, (float, np.floating)):
            return f"{float(value):.{digits}g}"
        return str(value)

    @staticmethod
    def render_csv(columns: Sequence[str], rows: Sequence[Mapping[str, Any]], digits: int = 12) -> str:
        """生成 CSV 文本：表头一行，列顺序固定"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([FileUtils.format_value(row.get(column), digits) for column in columns])
        return buffer.getvalue()

    @staticmethod
    def save_csv(
        columns: Sequence[str],
        rows: Sequence[Mapping[str, Any]],
        file_path: str,
        digits: int = 12,
    ) -> str:
        """保存 CSV"""
        path = Path(file_path)
        FileUtils.ensure_output_directory(str(path.parent))
        path.write_text(FileUtils.render_csv(columns, rows, digits), encoding="utf-8")
        return str(path)

    @staticmethod
    def save_text(lines: Sequence[str], file_path: str) -> str:
        """保存对齐的文本输出"""
        path = Path(file_path)
        FileUtils.ensure_output_directory(str(path.parent))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(path)

    @staticmethod
    def to_serializable(value: Any, digits: int = 12) -> Any:
        """把报告中的 numpy 数组与复数转成可序列化的结构"""
        if isinstance(value, np.ndarray):
            return [FileUtils.to_serializable(v, digits) for v in value.tolist()]
        if isinstance(value, (complex, np.complexfloating)):
            return FileUtils.format_value(value, digits)
        if isinstance(value, (float, np.floating)):
            return float(f"{float(value):.{digits}g}")
        if isinstance(value, Mapping):
            return {str(k): FileUtils.to_serializable(v, digits) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [FileUtils.to_serializable(v, digits) for v in value]
        return value

    @staticmethod
    def save_report(report: Dict[str, Any], file_path: str, digits: int = 12) -> str:
        """保存 JSON 报告（键排序、缩进）"""
        path = Path(file_path)
        FileUtils.ensure_output_directory(str(path.parent))
        data = orjson.dumps(
            FileUtils.to_serializable(report, digits),
            option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS,
        )
        path.write_bytes(data + b"\n")
        return str(path)

    @staticmethod
    def create_complete_output(
        output: ExperimentOutput,
        csv_path: str,
        digits: int = 12,
    ) -> Dict[str, str]:
        """按 CSV 路径写出 CSV，并在同目录写出同名的 .json 报告与 .txt 文本"""
        path = Path(csv_path)
        output_files = {"csv": FileUtils.save_csv(output.columns, output.rows, str(path), digits)}
        if output.report is not None:
            output_files["report"] = FileUtils.save_report(output.report, str(path.with_suffix(".json")), digits)
        if output.text_lines:
            output_files["text"] = FileUtils.save_text(output.text_lines, str(path.with_suffix(".txt")))
        return output_files

    @staticmethod
    def default_output_path(output_dir: str, kind: str) -> str:
        return str(Path(output_dir) / f"{kind}.csv")

    @staticmethod
    def read_csv(file_path: str) -> List[Dict[str, str]]:
        with open(file_path, newline="", encoding="utf-8") as f:
            return list(csv.DictReader(f))

