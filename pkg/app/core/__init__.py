"""
-*- coding: utf-8 -*-
@Author: li
@FileName: __init__.py
@DateTime: 2025/07/02 10:00:00
@Docs: 核心模块（配置与异常）
"""
