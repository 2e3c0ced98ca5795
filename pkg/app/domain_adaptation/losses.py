"""
@Author: li
@FileName: losses.py
@DateTime: 2025-07-05
@Docs: 域自适应损失：CORAL、源域交叉熵、目标域熵（均附解析梯度）
"""

import numpy as np

from app.core.exceptions import UsageException
from app.engine.tensor import Tensor, as_tensor

# 取对数前的概率下限
PROB_FLOOR = 1e-12


def covariance(z: Tensor) -> Tensor:
    """未归一化协方差 Zᵀ J_n Z，J_n = I − (1/n)·11ᵀ"""
    z = as_tensor(z, ndim=2, name="features")
    centered = z - z.mean(axis=0, keepdims=True)
    return centered.T @ centered


def coral_loss_and_grad(z_source: Tensor, z_target: Tensor) -> tuple[float, Tensor, Tensor]:
    """CORAL 损失 ‖Cov(Z_s) − Cov(Z_t)‖_F² 及其对两侧特征的梯度

    两个域各自使用自己的批大小做中心化，不做 1/(n−1) 或 1/(4d²) 归一化。

    Returns:
        (loss, dL/dZ_s, dL/dZ_t)
    """
    z_source = as_tensor(z_source, ndim=2, name="Z_s")
    z_target = as_tensor(z_target, ndim=2, name="Z_t")
    if z_source.shape[0] < 2 or z_target.shape[0] < 2:
        raise UsageException(
            "CORAL 损失要求每个域至少 2 个样本",
            detail={"n_s": z_source.shape[0], "n_t": z_target.shape[0]},
        )
    if z_source.shape[1] != z_target.shape[1]:
        raise UsageException("CORAL 两侧特征维度不一致")

    centered_s = z_source - z_source.mean(axis=0, keepdims=True)
    centered_t = z_target - z_target.mean(axis=0, keepdims=True)
    diff = centered_s.T @ centered_s - centered_t.T @ centered_t
    loss = float(np.sum(diff * diff))
    # 中心化后的列均值为零，J_n 的投影不改变 4·Z_c·D
    grad_source = 4.0 * centered_s @ diff
    grad_target = -4.0 * centered_t @ diff
    return loss, grad_source, grad_target


def coral_loss(z_source: Tensor, z_target: Tensor) -> float:
    """CORAL 损失值"""
    return coral_loss_and_grad(z_source, z_target)[0]


def _check_labels(labels: np.ndarray, num_classes: int) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1 or not np.issubdtype(labels.dtype, np.integer):
        raise UsageException("标签必须是一维整数数组")
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise UsageException(f"标签超出范围 [0, {num_classes})", detail={"min": int(labels.min()), "max": int(labels.max())})
    return labels


def source_ce_loss_and_grad(probs: Tensor, labels: np.ndarray) -> tuple[float, Tensor]:
    """源域交叉熵（批均值）及其对概率的梯度"""
    probs = as_tensor(probs, ndim=2, name="probs")
    labels = _check_labels(labels, probs.shape[1])
    if labels.shape[0] != probs.shape[0]:
        raise UsageException("标签数量与概率行数不一致")
    n = probs.shape[0]
    rows = np.arange(n)
    picked = probs[rows, labels]
    clamped = np.maximum(picked, PROB_FLOOR)
    loss = float(np.mean(-np.log(clamped)))

    grad = np.zeros_like(probs)
    # 被下限截断的位置梯度为零
    grad[rows, labels] = np.where(picked > PROB_FLOOR, -1.0 / (n * clamped), 0.0)
    return loss, grad


def source_ce_loss(probs: Tensor, labels: np.ndarray) -> float:
    """源域交叉熵 L_s"""
    return source_ce_loss_and_grad(probs, labels)[0]


def target_entropy_loss_and_grad(probs: Tensor) -> tuple[float, Tensor]:
    """目标域预测熵（批均值）及其对概率的梯度"""
    probs = as_tensor(probs, ndim=2, name="probs")
    n = probs.shape[0]
    if n == 0:
        raise UsageException("目标批次不能为空")
    log_p = np.log(np.maximum(probs, PROB_FLOOR))
    loss = float(np.mean(-np.sum(probs * log_p, axis=1)))
    grad = -(log_p + 1.0) / n
    return loss, grad


def target_entropy_loss(probs: Tensor) -> float:
    """目标域熵最小化损失 L_t"""
    return target_entropy_loss_and_grad(probs)[0]
