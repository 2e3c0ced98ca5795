"""
-*- coding: utf-8 -*-
@Author: li
@FileName: logger.py
@DateTime: 2025/07/02 10:20:00
@Docs: 日志：控制台、全局轮转文件与单次训练的运行日志
"""

import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from functools import wraps
from pathlib import Path

from loguru import logger

from app.core.config import settings

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
    "{extra} | <level>{message}</level>"
)
# 运行日志不带颜色与调用位置，便于与 metrics.csv 对照
RUN_LOG_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {message}"


def setup_logger(level: str | None = None) -> None:
    """配置日志系统

    控制台输出到 stderr，stdout 留给命令结果。测试环境或 LOG_TO_FILE=false 时不写文件。

    Args:
        level: 控制台日志级别，为空时使用 settings.LOG_LEVEL
    """
    logger.remove()
    console_level = (level or settings.LOG_LEVEL).upper()
    if settings.DEBUG and not level:
        console_level = "DEBUG"
    logger.add(sys.stderr, format=LOG_FORMAT, level=console_level, backtrace=settings.DEBUG, diagnose=settings.DEBUG)

    if not settings.LOG_TO_FILE or settings.IS_TESTING:
        return

    log_dir = settings.LOG_PATH
    log_dir.mkdir(parents=True, exist_ok=True)
    for suffix, file_level in (("", "DEBUG"), ("_error", "ERROR")):
        logger.add(
            log_dir / f"{settings.APP_NAME}{suffix}_{{time:YYYY-MM-DD}}.log",
            format=LOG_FORMAT,
            level=file_level,
            rotation="00:00",
            retention="30 days",
            compression="zip",
            encoding="utf-8",
        )


@contextmanager
def run_log(output_dir: Path, level: str = "INFO") -> Iterator[Path | None]:
    """在训练输出目录追加一个运行日志文件，离开时移除该 sink

    只接收绑定了当前 run 标识的记录，并行套件中各运行互不混写。
    """
    if not settings.RUN_LOG_FILE:
        yield None
        return
    path = Path(output_dir) / settings.RUN_LOG_FILE
    run_id = str(Path(output_dir).resolve())
    handler_id = logger.add(
        path,
        format=RUN_LOG_FORMAT,
        level=level,
        encoding="utf-8",
        filter=lambda record: record["extra"].get("run") == run_id,
    )
    try:
        with logger.contextualize(run=run_id):
            yield path
    finally:
        logger.remove(handler_id)


def log_function_calls(*, include_args: bool = False, include_result: bool = False):
    """记录函数进入、完成与耗时的装饰器

    Args:
        include_args: 是否记录函数参数
        include_result: 是否记录返回值（截断到 200 字符）
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            name = func.__qualname__
            logger.debug(f"调用 {name}: args={args}, kwargs={kwargs}" if include_args else f"调用 {name}")
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                logger.error(f"{name} 失败: {e}")
                raise
            elapsed = time.perf_counter() - start
            tail = f": {str(result)[:200]}" if include_result else ""
            logger.debug(f"{name} 完成 ({elapsed:.3f}s){tail}")
            return result

        return wrapper

    return decorator


setup_logger()

__all__ = ["logger", "log_function_calls", "run_log", "setup_logger"]
