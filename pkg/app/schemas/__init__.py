"""
@Author: li
@FileName: __init__.py
@DateTime: 2025-07-04
@Docs: 校验模型包初始化文件，导出所有校验模型
"""

from .config import DaHyperparams, ExperimentConfig, PdaTaskSpec, RlHyperparams
from .metrics import CsvRow, MetricsRow, RetentionRow, SweepRow

__all__ = [
    # 实验配置
    "PdaTaskSpec",
    "DaHyperparams",
    "RlHyperparams",
    "ExperimentConfig",
    # 输出表格行
    "CsvRow",
    "MetricsRow",
    "RetentionRow",
    "SweepRow",
]
