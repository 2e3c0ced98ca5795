"""
@Author: li
@FileName: __init__.py
@DateTime: 2025-07-12
@Docs: 命令行模块
"""

from .main import build_parser, main

__all__ = ["build_parser", "main"]
