"""
@Author: li
@FileName: state.py
@DateTime: 2025-07-07
@Docs: 选择器状态构建：[z ∥ one_hot(y) ∥ α]
"""

import numpy as np

from app.core.exceptions import UsageException
from app.engine import DTYPE, Tensor, as_tensor


def state_dim(feature_dim: int, num_classes: int) -> int:
    """状态长度 l = d + 2·|C_s|"""
    return feature_dim + 2 * num_classes


def target_label_distribution(target_probs: Tensor) -> Tensor:
    """目标批次的平均预测分布 α = (1/n)·Σ ŷ_i"""
    target_probs = as_tensor(target_probs, ndim=2, name="target_probs")
    if target_probs.shape[0] == 0:
        raise UsageException("目标批次不能为空")
    return target_probs.mean(axis=0)


def build_states(features: Tensor, labels: np.ndarray, alpha: Tensor) -> Tensor:
    """按固定顺序拼接状态 [z ∥ one_hot(y) ∥ α]

    Args:
        features: 源样本特征 Z (n×d)
        labels: 源样本标签 (n,)
        alpha: 目标批次平均预测分布 (|C_s|,)，批内所有状态共享

    Returns:
        状态矩阵 (n×l)
    """
    features = as_tensor(features, ndim=2, name="features")
    alpha = as_tensor(alpha, ndim=1, name="alpha")
    labels = np.asarray(labels)
    num_classes = alpha.shape[0]
    n = features.shape[0]
    if labels.shape != (n,):
        raise UsageException("标签数量与特征行数不一致")
    if n and (labels.min() < 0 or labels.max() >= num_classes):
        raise UsageException(f"标签超出范围 [0, {num_classes})")

    one_hot = np.zeros((n, num_classes), dtype=DTYPE)
    one_hot[np.arange(n), labels] = 1.0
    return np.hstack([features, one_hot, np.broadcast_to(alpha, (n, num_classes))])
