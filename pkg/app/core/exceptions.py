"""
-*- coding: utf-8 -*-
@Author: li
@FileName: exceptions.py
@DateTime: 2025/07/02 10:30:00
@Docs: 应用程序异常定义与命令行异常处理
"""

from typing import Any

from pydantic import ValidationError

from app.core.config import settings
from app.utils.logger import logger

# 退出码
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2


class RTNetException(Exception):
    """异常基类"""

    exit_code: int = EXIT_RUNTIME_ERROR

    def __init__(
        self,
        message: str = "运行时错误",
        detail: str | dict[str, Any] | None = None,
        exit_code: int | None = None,
    ):
        self.message = message
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code
        super().__init__(self.message)


class ConfigurationException(RTNetException):
    """配置错误（维度不匹配、任务定义退化、配置项非法等）"""

    exit_code = EXIT_CONFIG_ERROR

    def __init__(self, message: str = "配置错误", detail: str | dict[str, Any] | None = None):
        super().__init__(message=message, detail=detail)


class UsageException(RTNetException):
    """接口误用（未前向即反向、形状不一致、标签越界等）"""

    def __init__(self, message: str = "接口使用错误", detail: str | dict[str, Any] | None = None):
        super().__init__(message=message, detail=detail)


class EmptySelectionException(UsageException):
    """选择后的源批次样本数不足 2，调用方需执行空选择回退"""

    def __init__(self, selected: int):
        self.selected = selected
        super().__init__(message=f"选择后的源批次仅有 {selected} 个样本，至少需要 2 个", detail={"selected": selected})


class NumericalException(RTNetException):
    """数值错误（出现 NaN/Inf）"""

    def __init__(self, message: str = "数值错误", detail: str | dict[str, Any] | None = None):
        super().__init__(message=message, detail=detail)


class DatasetParseException(RTNetException):
    """数据集文件解析错误"""

    exit_code = EXIT_CONFIG_ERROR

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        location = f"{path or '<stream>'}:{line}" if line is not None else (path or "<stream>")
        super().__init__(message=f"{location}: {message}", detail={"line": line, "path": path})


class CheckpointException(RTNetException):
    """检查点读取或版本错误"""

    def __init__(self, message: str = "检查点错误", detail: str | dict[str, Any] | None = None):
        super().__init__(message=message, detail=detail)


class TrainingAbortedException(RTNetException):
    """训练中止，记录出错的回合与批次"""

    def __init__(self, episode: int, batch: int | None, cause: RTNetException):
        self.episode = episode
        self.batch = batch
        self.cause = cause
        where = f"episode {episode}" + (f", batch {batch}" if batch is not None else "")
        super().__init__(
            message=f"训练在 {where} 中止: {cause.message}",
            detail={"episode": episode, "batch": batch, "cause": cause.detail},
            exit_code=cause.exit_code,
        )


def handle_cli_exception(exc: BaseException) -> int:
    """命令行统一异常处理器

    Args:
        exc: 捕获到的异常

    Returns:
        进程退出码
    """
    if isinstance(exc, RTNetException):
        # DEBUG 时附带堆栈
        logger.opt(exception=exc if settings.DEBUG else None).error(
            f"{type(exc).__name__}: {exc.message} - 详细信息: {exc.detail}"
        )
        return exc.exit_code

    if isinstance(exc, ValidationError):
        error_details = [
            {"loc": error.get("loc", []), "msg": error.get("msg", ""), "type": error.get("type", "")}
            for error in exc.errors()
        ]
        logger.error(f"配置验证失败: {error_details}")
        return EXIT_CONFIG_ERROR

    if isinstance(exc, FloatingPointError):
        logger.error(f"数值错误: {exc}")
        return EXIT_RUNTIME_ERROR

    logger.exception(f"未处理的异常: {exc}")
    return EXIT_RUNTIME_ERROR
