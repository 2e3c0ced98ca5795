"""
@Author: li
@FileName: optim.py
@DateTime: 2025-07-03
@Docs: Adam 优化器
"""

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from app.core.exceptions import UsageException
from app.engine.tensor import GradientSet, Tensor, ensure_finite


@dataclass
class AdamState:
    """Adam 状态：一阶/二阶矩累积量与步数"""

    first_moment: dict[str, Tensor] = field(default_factory=dict)
    second_moment: dict[str, Tensor] = field(default_factory=dict)
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def for_params(cls, params: Mapping[str, Tensor], **kwargs) -> "AdamState":
        """按参数形状创建全零累积量"""
        return cls(
            first_moment={k: np.zeros_like(p) for k, p in params.items()},
            second_moment={k: np.zeros_like(p) for k, p in params.items()},
            **kwargs,
        )


def adam_step(
    params: Mapping[str, Tensor],
    grads: GradientSet | Mapping[str, Tensor],
    state: AdamState,
    lr: float,
) -> tuple[Mapping[str, Tensor], AdamState]:
    """执行一步带偏差校正的 Adam 更新（原地修改参数与状态）

    未出现在 grads 中的参数按零梯度处理。

    Args:
        params: 参数字典（数组引用）
        grads: 梯度集合
        state: Adam 状态
        lr: 学习率，须 ≥ 0

    Returns:
        (params, state)
    """
    if lr < 0:
        raise UsageException(f"学习率必须非负，当前为 {lr}")
    if not isinstance(grads, GradientSet):
        grads = GradientSet(dict(grads))
    grads.validate_against(params)
    grad_map = grads.grads
    for key, param in params.items():
        if key not in state.first_moment:
            state.first_moment[key] = np.zeros_like(param)
            state.second_moment[key] = np.zeros_like(param)
        elif state.first_moment[key].shape != param.shape:
            raise UsageException(f"Adam 累积量 {key} 与参数形状不一致")

    state.step += 1
    t = state.step
    correction1 = 1.0 - state.beta1**t
    correction2 = 1.0 - state.beta2**t

    for key, param in params.items():
        grad = grad_map.get(key)
        m = state.first_moment[key]
        v = state.second_moment[key]
        if grad is None:
            m *= state.beta1
            v *= state.beta2
        else:
            m *= state.beta1
            m += (1.0 - state.beta1) * grad
            v *= state.beta2
            v += (1.0 - state.beta2) * grad * grad
        m_hat = m / correction1
        v_hat = v / correction2
        param -= lr * m_hat / (np.sqrt(v_hat) + state.eps)
        ensure_finite(param, f"参数 {key}")

    return params, state
