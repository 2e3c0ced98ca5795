"""
@Author: li
@FileName: evaluation_service.py
@DateTime: 2025-07-11
@Docs: 评估服务：目标测试集准确率、按类保留概率报告与特征导出
"""

import os
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from app.core.exceptions import UsageException
from app.data import Dataset
from app.domain_adaptation import DaModel, predict
from app.models.bundle import RTNetModel
from app.repositories import CsvTableDAO, features_dao, retention_dao
from app.schemas.metrics import RetentionRow
from app.selector import build_states, policy_forward, target_label_distribution
from app.utils import LogConfigs, system_log
from app.utils.logger import logger


def _da_model(model: RTNetModel | DaModel) -> DaModel:
    return model.da if isinstance(model, RTNetModel) else model


def evaluate(model: RTNetModel | DaModel, dataset: Dataset) -> float:
    """argmax 预测在全部 |C_s| 个类别上的准确率（不屏蔽离群类别）"""
    if dataset.size == 0:
        raise UsageException("评估数据集不能为空")
    probs = predict(_da_model(model), dataset.inputs)
    return float(np.mean(np.argmax(probs, axis=1) == dataset.labels))


def retention_probabilities(model: RTNetModel, source: Dataset, target_inputs: np.ndarray) -> np.ndarray:
    """每个源样本的保留概率 π(keep|s)，α 取自对全部目标数据的一次前向"""
    alpha = target_label_distribution(predict(model.da, target_inputs))
    states = build_states(model.da.features(source.inputs), source.labels, alpha)
    return policy_forward(model.policy, states)[:, 1]


def retention_report(model: RTNetModel, source: Dataset, target: Dataset) -> list[RetentionRow]:
    """按源类别平均保留概率；共享类别由目标数据集中出现的类别确定"""
    if source.size == 0 or target.size == 0:
        raise UsageException("保留概率报告需要非空的源域与目标域数据")
    keep = retention_probabilities(model, source, target.inputs)
    shared = set(target.classes)
    rows = []
    for class_id in range(model.num_classes):
        mask = source.labels == class_id
        count = int(mask.sum())
        rows.append(
            RetentionRow(
                class_id=class_id,
                shared=class_id in shared,
                count=count,
                keep_probability=float(np.mean(keep[mask])) if count else None,
            )
        )
    return rows


def retention_gap(rows: Sequence[RetentionRow]) -> float:
    """共享类别平均保留概率 − 离群类别平均保留概率"""
    shared = [row.keep_probability for row in rows if row.shared and row.keep_probability is not None]
    outlier = [row.keep_probability for row in rows if not row.shared and row.keep_probability is not None]
    if not shared or not outlier:
        raise UsageException("保留概率差需要同时存在共享类别与离群类别")
    return float(np.mean(shared) - np.mean(outlier))


def feature_rows(model: RTNetModel | DaModel, datasets: Sequence[Dataset]) -> list[dict[str, object]]:
    """适配层特征与标签、域标记"""
    da = _da_model(model)
    rows: list[dict[str, object]] = []
    for dataset in datasets:
        features = da.features(dataset.inputs) if dataset.size else np.zeros((0, da.feature_dim))
        for label, z in zip(dataset.labels, features, strict=True):
            row: dict[str, object] = {"domain": dataset.domain.value, "label": int(label)}
            row.update({f"f_{i}": float(v) for i, v in enumerate(z)})
            rows.append(row)
    return rows


class EvaluationService:
    """评估服务类"""

    def __init__(self, retention: CsvTableDAO | None = None):
        self.retention = retention or retention_dao()

    @system_log(LogConfigs.QUIET)
    def report(self, model: RTNetModel, source: Dataset, target: Dataset, output_dir: str | os.PathLike) -> Path:
        """写出 retention.csv"""
        rows = retention_report(model, source, target)
        path = self.retention.save(rows, Path(output_dir) / str(self.retention.filename))
        try:
            logger.info(f"保留概率差 (共享 − 离群): {retention_gap(rows):.4f}")
        except UsageException:
            logger.info("目标域覆盖全部源类别，无离群类别")
        return path

    @system_log(LogConfigs.QUIET)
    def export_features(
        self, model: RTNetModel | DaModel, datasets: Sequence[Dataset], path: str | os.PathLike
    ) -> Path:
        """导出特征表供外部做嵌入可视化"""
        dao = features_dao(_da_model(model).feature_dim)
        target = Path(path)
        if target.is_dir() or not target.suffix:
            target = target / str(dao.filename)
        return dao.save(feature_rows(model, datasets), target)


def export_features(model: RTNetModel | DaModel, datasets: Sequence[Dataset], path: str | os.PathLike) -> Path:
    return EvaluationService().export_features(model, datasets, path)
