"""
异常定义

模拟器各层共用的异常类型。输入错误同时继承 ValueError，
内部数值不变量失败单独归为 InvariantViolation。
"""

from typing import Optional


class SimulationError(Exception):
    """模拟器异常基类"""


class ModeError(SimulationError, ValueError):
    """模式标签未知、重复或与参与方不一致"""


class BasisMismatchError(SimulationError, ValueError):
    """两个对象的模式基不一致"""


class PhotonNumberError(SimulationError, ValueError):
    """光子数超出支持范围"""


class OccupancyError(SimulationError, ValueError):
    """后选择前提不满足（指定空间模式中的光子数不对）"""


class ParameterError(SimulationError, ValueError):
    """概率或物理参数越界"""


class ConfigError(SimulationError, ValueError):
    """配置文档错误，key 指出出错的配置项"""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


class InvariantViolation(SimulationError, RuntimeError):
    """内部数值不变量被破坏"""


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2


def exit_code_for(error_type: str) -> int:
    """按异常类型名给出进程退出码：输入与配置错误为 1，其余为 2"""
    usage_errors = {
        cls.__name__ for cls in (
            ModeError, BasisMismatchError, PhotonNumberError, OccupancyError,
            ParameterError, ConfigError, ValueError,
        )
    }
    usage_errors.add("ValidationError")
    return EXIT_USAGE if error_type in usage_errors else EXIT_INTERNAL
