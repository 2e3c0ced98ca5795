"""
-*- coding: utf-8 -*-
@Author: li
@FileName: __init__.py
@DateTime: 2025/07/02 09:50:00
@Docs: RTNet 部分域自适应训练框架
"""

__version__ = "0.1.0"
