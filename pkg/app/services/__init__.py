"""
@Author: li
@FileName: __init__.py
@DateTime: 2025-07-11
@Docs: 服务层模块，导出训练、评估与实验套件服务
"""

from .evaluation_service import (
    EvaluationService,
    evaluate,
    export_features,
    feature_rows,
    retention_gap,
    retention_probabilities,
    retention_report,
)
from .suite_service import SuiteService, median_by_value, run_suite, sweep_config
from .trainer_service import (
    CONFIG_FILE,
    TaskData,
    TrainerService,
    TrainingEvent,
    TrainingResult,
    load_task_data,
    train,
)

__all__ = [
    # 训练服务
    "TrainerService",
    "TrainingEvent",
    "TrainingResult",
    "TaskData",
    "CONFIG_FILE",
    "load_task_data",
    "train",
    # 评估服务
    "EvaluationService",
    "evaluate",
    "retention_probabilities",
    "retention_report",
    "retention_gap",
    "feature_rows",
    "export_features",
    # 实验套件
    "SuiteService",
    "sweep_config",
    "run_suite",
    "median_by_value",
]
