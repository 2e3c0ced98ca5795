"""
-*- coding: utf-8 -*-
@Author: li
@FileName: config.py
@DateTime: 2025/07/02 10:12:00
@Docs: 进程级设置（日志、输出目录、检查点版本、套件并发）；实验超参数见 app.schemas.config
"""

from functools import lru_cache
from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app import __version__

LOG_LEVELS = {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}


class Settings(BaseSettings):
    """进程级设置，读取环境变量与 .env"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    APP_NAME: str = Field(default="rtnet")
    APP_VERSION: str = Field(default=__version__)
    APP_DESCRIPTION: str = Field(default="基于强化数据选择器的部分域自适应训练框架")
    # 开启后未处理异常打印完整堆栈
    DEBUG: bool = Field(default=False)
    ENVIRONMENT: str = Field(default="development")

    BASE_DIR: Path = Path(__file__).parent.parent.parent

    LOG_LEVEL: str = Field(default="INFO")
    LOG_TO_FILE: bool = Field(default=True)
    LOG_DIR: Path | None = Field(default=None, description="日志目录，为空时使用 BASE_DIR/logs")
    RUN_LOG_FILE: str | None = Field(default="train.log", description="每次训练在输出目录写入的日志文件名，为空时不写")

    OUTPUT_ROOT: Path = Field(default=Path("runs"), description="未指定 --out 时的输出根目录")
    CHECKPOINT_VERSION: int = Field(default=1, ge=1)
    SUITE_WORKERS: int = Field(default=1, ge=1, description="实验套件并行进程数，1 为顺序执行")

    @property
    def IS_TESTING(self) -> bool:
        return self.ENVIRONMENT.lower() == "testing"

    @property
    def LOG_PATH(self) -> Path:
        return self.LOG_DIR if self.LOG_DIR is not None else self.BASE_DIR / "logs"

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"不支持的日志级别: {v}")
        return level


@lru_cache
def get_settings() -> Settings:
    """设置单例，环境变量与 .env 只读取一次"""
    return Settings()


settings = get_settings()
