"""
@Author: li
@FileName: __init__.py
@DateTime: 2025-07-10
@Docs: 文件存取层模块，导出所有 DAO 类
"""

from .base_dao import BaseDAO
from .checkpoint_dao import CheckpointDAO, checkpoint_name
from .config_dao import ConfigDAO, build_config, known_keys, parse_lines
from .dataset_dao import (
    SOURCE_FILE,
    TARGET_TEST_FILE,
    TARGET_TRAIN_FILE,
    DatasetDAO,
    load_dataset,
    load_task,
    save_dataset,
    save_task,
)
from .metrics_dao import (
    FEATURES_FILE,
    METRICS_FILE,
    RETENTION_FILE,
    SWEEP_FILE,
    CsvStreamWriter,
    CsvTableDAO,
    features_dao,
    format_cell,
    metrics_dao,
    retention_dao,
    sweep_dao,
)

__all__ = [
    # 基础DAO
    "BaseDAO",
    # 数据集
    "DatasetDAO",
    "SOURCE_FILE",
    "TARGET_TRAIN_FILE",
    "TARGET_TEST_FILE",
    "save_dataset",
    "load_dataset",
    "save_task",
    "load_task",
    # 检查点
    "CheckpointDAO",
    "checkpoint_name",
    # 配置文件
    "ConfigDAO",
    "build_config",
    "known_keys",
    "parse_lines",
    # CSV 表格
    "CsvTableDAO",
    "CsvStreamWriter",
    "METRICS_FILE",
    "RETENTION_FILE",
    "SWEEP_FILE",
    "FEATURES_FILE",
    "format_cell",
    "metrics_dao",
    "retention_dao",
    "sweep_dao",
    "features_dao",
]
