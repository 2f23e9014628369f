"""
实验配置加载

INI 风格的扁平配置文档（[section] 与 key = value）解析为 RunConfig。
所有诊断信息都以 section.key 指出出错的配置项。
"""

import configparser
import logging
import math
import re
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from pydantic import ValidationError

from models.channels import DriftParams
from models.experiment import RunConfig
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

AXES = ("e", "p", "m", "phi")

# section -> 允许的 key
KNOWN_KEYS: Dict[str, Tuple[str, ...]] = {
    "experiment": ("kind", "input"),
    "noise": ("alpha", "beta", "delta", "eta"),
    "drift": ("phi", "k", "delta_l"),
    "source": ("p", "r", "pump_phase"),
    "errors": ("e",),
    "loss": ("m",),
    "sweep": ("target", "simplex_step") + tuple(f"{axis}_{part}" for axis in AXES for part in ("start", "stop", "step")),
    "output": ("path",),
}

TEXT_KEYS = {"experiment.kind", "experiment.input", "sweep.target", "output.path"}

PRODUCT_TOKEN = re.compile(r"([*/])")


class ConfigLoader:
    """配置文档加载器"""

    @staticmethod
    def read_document(text: str) -> Dict[str, str]:
        """把文档解析为 {section.key: 原始字符串}"""
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"配置文档格式错误: {exc}") from exc

        values: Dict[str, str] = {}
        for section in parser.sections():
            if section not in KNOWN_KEYS:
                raise ConfigError(f"未知的配置段，可选 {list(KNOWN_KEYS)}", key=section)
            for key, raw in parser.items(section):
                if key not in KNOWN_KEYS[section]:
                    raise ConfigError(f"未知的配置项，[{section}] 可选 {list(KNOWN_KEYS[section])}", key=f"{section}.{key}")
                values[f"{section}.{key}"] = raw.strip()
        return values

    @staticmethod
    def _number(key: str, raw: Any) -> float:
        if isinstance(raw, (int, float)):
            return float(raw)
        text = str(raw).strip().lower()
        try:
            return ConfigLoader._product(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"无法解析为数值: {raw!r}", key=key) from exc

    @staticmethod
    def _operand(token: str) -> float:
        """单个操作数：数值字面量或带符号的 pi"""
        token = token.strip()
        if token.lstrip("+-").strip() == "pi":
            return -math.pi if token.startswith("-") else math.pi
        return float(token)

    @staticmethod
    def _product(text: str) -> float:
        """支持 pi/7、2*pi 这类简单乘除；2pi 这样省略运算符的写法不接受"""
        tokens = PRODUCT_TOKEN.split(text)
        value = ConfigLoader._operand(tokens[0])
        for operator, operand in zip(tokens[1::2], tokens[2::2]):
            number = ConfigLoader._operand(operand)
            value = value * number if operator == "*" else value / number
        return value

    @classmethod
    def build_payload(cls, values: Mapping[str, Any]) -> Dict[str, Any]:
        """把 section.key 形式的值组装为 RunConfig 的嵌套字典"""
        numbers = {
            key: cls._number(key, raw) for key, raw in values.items()
            if key not in TEXT_KEYS and raw is not None
        }
        payload: Dict[str, Any] = {}

        if "experiment.kind" in values:
            payload["kind"] = values["experiment.kind"]
        if "experiment.input" in values:
            payload["trace_input"] = values["experiment.input"]
        if values.get("output.path"):
            payload["output"] = values["output.path"]

        noise = {name: numbers[f"noise.{name}"] for name in ("beta", "delta", "eta") if f"noise.{name}" in numbers}
        if "noise.alpha" in numbers:
            noise["alpha"] = numbers["noise.alpha"]
        elif noise:
            # 只给出 β、δ、η 时 α 补足单纯形
            alpha = 1.0 - sum(noise.values())
            noise["alpha"] = 0.0 if abs(alpha) < 1e-12 else alpha
        if noise:
            payload["noise"] = noise

        if "drift.phi" in numbers:
            payload["drift"] = {"phi": numbers["drift.phi"]}
        elif "drift.k" in numbers or "drift.delta_l" in numbers:
            if "drift.k" not in numbers or "drift.delta_l" not in numbers:
                missing = "drift.k" if "drift.k" not in numbers else "drift.delta_l"
                raise ConfigError("由光程差给出相位时 k 与 delta_l 必须同时给出", key=missing)
            try:
                drift = DriftParams.from_path_difference(numbers["drift.k"], numbers["drift.delta_l"])
            except ValidationError as exc:
                raise ConfigError("k·delta_l 不是有限值", key="drift.delta_l") from exc
            payload["drift"] = {"phi": drift.phi}

        source = {name: numbers[f"source.{name}"] for name in ("p", "r", "pump_phase") if f"source.{name}" in numbers}
        if source:
            payload["source"] = source
        if "errors.e" in numbers:
            payload["e"] = numbers["errors.e"]
        if "loss.m" in numbers:
            payload["loss"] = {"m": numbers["loss.m"]}

        sweep: Dict[str, Any] = {}
        if "sweep.target" in values:
            sweep["target"] = values["sweep.target"]
        if "sweep.simplex_step" in numbers:
            sweep["simplex_step"] = numbers["sweep.simplex_step"]
        for axis in AXES:
            parts = {part: numbers[f"sweep.{axis}_{part}"] for part in ("start", "stop", "step") if f"sweep.{axis}_{part}" in numbers}
            if not parts:
                continue
            if "start" in parts and "stop" not in parts:
                parts["stop"] = parts["start"]
            parts.setdefault("step", 1.0)
            if "start" not in parts:
                raise ConfigError("网格缺少起点", key=f"sweep.{axis}_start")
            sweep[axis] = parts
        if sweep:
            payload["sweep"] = sweep
        return payload

    @staticmethod
    def _error_key(location: Tuple[Any, ...]) -> str:
        """把 pydantic 错误位置映射回配置项名"""
        top = {
            "kind": "experiment.kind",
            "trace_input": "experiment.input",
            "e": "errors.e",
            "output": "output.path",
        }
        if not location:
            return "config"
        head = str(location[0])
        if head in top:
            return top[head]
        if head == "sweep" and len(location) >= 3 and location[1] in AXES:
            return f"sweep.{location[1]}_{location[2]}"
        if len(location) >= 2 and isinstance(location[1], str):
            return f"{head}.{location[1]}"
        return head

    @classmethod
    def validate(cls, values: Mapping[str, Any]) -> RunConfig:
        payload = cls.build_payload(values)
        try:
            return RunConfig.model_validate(payload)
        except ValidationError as exc:
            first = exc.errors()[0]
            message = first["msg"].removeprefix("Value error, ")
            raise ConfigError(message, key=cls._error_key(first["loc"])) from exc


def parse_config(text: str, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """
    解析配置文档并合并覆盖项

    overrides 的键为 section.key（例如 noise.alpha），值为 None 的项忽略；
    覆盖项优先于文档，文档优先于默认值。
    """
    values: Dict[str, Any] = ConfigLoader.read_document(text)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        section = key.split(".", 1)[0]
        if key.split(".", 1)[-1] not in KNOWN_KEYS.get(section, ()):
            raise ConfigError("未知的覆盖项", key=key)
        values[key] = value
    config = ConfigLoader.validate(values)
    logger.debug("配置解析完成: %s", config.model_dump())
    return config


def load_config(path: Optional[str], overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """从文件读取配置；path 为 None 时只用默认值与覆盖项"""
    text = ""
    if path is not None:
        file_path = Path(path)
        if not file_path.is_file():
            raise ConfigError(f"配置文件不存在: {file_path}")
        text = file_path.read_text(encoding="utf-8")
    return parse_config(text, overrides)
