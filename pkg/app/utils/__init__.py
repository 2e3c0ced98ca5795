"""
-*- coding: utf-8 -*-
@Author: li
@FileName: __init__.py
@DateTime: 2025/07/02 10:18:00
@Docs: 实用程序模块
"""

from .log_decorators import LogConfig, LogConfigs, system_log
from .logger import log_function_calls, logger, run_log, setup_logger

__all__ = [
    "logger",
    "log_function_calls",
    "setup_logger",
    "run_log",
    "system_log",
    "LogConfig",
    "LogConfigs",
]
