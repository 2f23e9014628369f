"""
进程级设置

从环境变量（前缀 DEPP_）和 .env 文件读取，与实验配置文档分开。
"""

from functools import lru_cache

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# 加载环境变量
load_dotenv()


class AppSettings(BaseSettings):
    """运行设置"""
    model_config = SettingsConfigDict(env_prefix="DEPP_", env_file=".env", extra="ignore")

    output_dir: str = Field(default="./output", description="未指定 --out 时的输出目录")
    log_level: str = Field(default="WARNING", description="日志级别")
    max_concurrency: int = Field(default=4, ge=1, description="扫描时同时计算的网格点数")
    float_digits: int = Field(default=12, ge=1, le=17, description="CSV 浮点有效数字")


@lru_cache(maxsize=1)
def get_settings() -> AppSettings:
    return AppSettings()
