"""
@Author: li
@FileName: gradcheck.py
@DateTime: 2025-07-04
@Docs: 中心差分梯度校验
"""

from collections.abc import Callable, Mapping

import numpy as np

from app.core.exceptions import NumericalException, UsageException
from app.engine.tensor import GradientSet, Tensor

LossFn = Callable[[], tuple[float, GradientSet | Mapping[str, Tensor]]]


def finite_diff_check(loss_fn: LossFn, params: Mapping[str, Tensor], eps: float = 1e-5, floor: float = 1e-3) -> float:
    """用中心差分校验解析梯度

    loss_fn 在当前参数上返回 (loss, 解析梯度)；参数被原地扰动后恢复。
    相对误差按 |a − n| / max(|a|, |n|, floor) 逐坐标计算，两者皆为零时为 0。
    |a| 与 |n| 都小于 floor 的坐标实际按绝对误差 |a − n| / floor 计量，
    避免近零梯度上的差分噪声被放大；floor=0 时为纯相对误差。

    Args:
        loss_fn: 确定性的损失函数
        params: 参与校验的参数（数组引用）
        eps: 差分步长
        floor: 相对误差分母下限，默认 1e-3

    Returns:
        最大（带下限的）相对误差
    """
    if eps <= 0:
        raise UsageException(f"差分步长必须为正，当前为 {eps}")

    loss, analytic = loss_fn()
    if not np.isfinite(loss):
        raise NumericalException("梯度校验中损失为非有限值")
    analytic_map = analytic.grads if isinstance(analytic, GradientSet) else analytic

    worst = 0.0
    for key, param in params.items():
        grad = analytic_map.get(key)
        grad = np.zeros_like(param) if grad is None else grad
        for index in np.ndindex(param.shape):
            original = param[index]
            param[index] = original + eps
            loss_plus, _ = loss_fn()
            param[index] = original - eps
            loss_minus, _ = loss_fn()
            param[index] = original
            if not (np.isfinite(loss_plus) and np.isfinite(loss_minus)):
                raise NumericalException(f"梯度校验中参数 {key}[{index}] 扰动后损失为非有限值")
            numeric = (loss_plus - loss_minus) / (2.0 * eps)
            exact = grad[index]
            diff = abs(exact - numeric)
            if diff == 0.0:
                continue
            worst = max(worst, diff / max(abs(exact), abs(numeric), floor))
    return float(worst)
