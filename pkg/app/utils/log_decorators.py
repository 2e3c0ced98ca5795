"""
@Author: li
@FileName: log_decorators.py
@DateTime: 2025-07-03
@Docs: 服务层日志装饰器，记录调用开始、完成、失败与耗时
"""

import time
from collections.abc import Callable
from functools import wraps
from typing import Any, TypeVar

from app.utils.logger import logger

# 使用类型变量支持泛型
F = TypeVar("F", bound=Callable[..., Any])


class LogConfig:
    """日志配置类"""

    def __init__(
        self,
        log_args: bool = False,
        log_result: bool = False,
        exclude_args: list[str] | None = None,
        operation: str | None = None,
    ):
        self.log_args = log_args  # 是否记录参数
        self.log_result = log_result  # 是否记录返回值
        self.exclude_args = exclude_args or []  # 排除的关键字参数
        self.operation = operation  # 操作名称，为空时使用函数名


def _summarize(value: Any, limit: int = 300) -> str:
    """截断过长的对象表示"""
    text = repr(value)
    if len(text) > limit:
        text = text[:limit] + "...[truncated]"
    return text


def _prepare_log_data(args: tuple, kwargs: dict, result: Any = None, config: LogConfig | None = None) -> dict[str, str]:
    """准备日志数据"""
    if config is None:
        config = LogConfig()

    log_data: dict[str, str] = {}

    if config.log_args and args:
        log_data["args"] = _summarize(args)

    if config.log_args and kwargs:
        filtered_kwargs = {k: v for k, v in kwargs.items() if k not in config.exclude_args}
        if filtered_kwargs:
            log_data["kwargs"] = _summarize(filtered_kwargs)

    if config.log_result and result is not None:
        log_data["result"] = _summarize(result, limit=1000)

    return log_data


def system_log(config: LogConfig | None = None) -> Callable[[F], F]:
    """服务日志装饰器

    Args:
        config: 日志配置

    Usage:
        @system_log()
        def evaluate(model, dataset) -> float:
            ...

        @system_log(LogConfig(operation="训练", log_result=True))
        def train(config) -> TrainingResult:
            ...
    """
    if config is None:
        config = LogConfig()

    def decorator(func: F) -> F:
        operation = config.operation or func.__name__

        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            logger.bind(**_prepare_log_data(args, kwargs, config=config)).info(f"{operation} 已开始")
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                elapsed = time.perf_counter() - start_time
                logger.error(f"{operation} 失败 ({elapsed:.2f}s): {e}")
                raise

            elapsed = time.perf_counter() - start_time
            log_data = _prepare_log_data((), {}, result, config)
            logger.bind(**log_data).info(f"{operation} 完成 ({elapsed:.2f}s)")
            return result

        return wrapper  # type: ignore

    return decorator


# 预定义的常用配置
class LogConfigs:
    """预定义的日志配置"""

    # 静默参数（参数体积大，如数据集与模型）
    QUIET = LogConfig(log_args=False, log_result=False)
