"""
@Author: li
@FileName: tensor.py
@DateTime: 2025-07-03
@Docs: 张量与梯度集合（numpy float64）
"""

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.core.exceptions import NumericalException, UsageException

# 全部计算使用 64 位浮点
Tensor = NDArray[np.float64]
DTYPE = np.float64


def as_tensor(value: ArrayLike, ndim: int | None = None, name: str = "tensor") -> Tensor:
    """转换为 float64 张量

    Args:
        value: 输入数组
        ndim: 期望的维数，为空时不校验
        name: 错误信息中使用的名称

    Returns:
        float64 数组（必要时复制）
    """
    array = np.asarray(value, dtype=DTYPE)
    if ndim is not None and array.ndim != ndim:
        raise UsageException(f"{name} 需要 {ndim} 维，实际为 {array.ndim} 维", detail={"shape": list(array.shape)})
    return array


def ensure_finite(array: np.ndarray, name: str = "tensor") -> np.ndarray:
    """校验数组中不含 NaN/Inf"""
    if not np.all(np.isfinite(array)):
        raise NumericalException(f"{name} 出现非有限值", detail={"shape": list(np.shape(array))})
    return array


@dataclass
class GradientSet:
    """参数标识 -> 梯度张量 的映射

    input_grad 为对网络输入的梯度，用于跨网络链式传播。
    """

    grads: dict[str, Tensor] = field(default_factory=dict)
    input_grad: Tensor | None = None

    def __getitem__(self, key: str) -> Tensor:
        return self.grads[key]

    def __contains__(self, key: object) -> bool:
        return key in self.grads

    def __iter__(self) -> Iterator[str]:
        return iter(self.grads)

    def __len__(self) -> int:
        return len(self.grads)

    def keys(self):
        return self.grads.keys()

    def items(self):
        return self.grads.items()

    def flat(self) -> Tensor:
        """按键排序拼接为一维向量"""
        if not self.grads:
            return np.zeros(0, dtype=DTYPE)
        return np.concatenate([self.grads[k].ravel() for k in sorted(self.grads)])

    def validate_against(self, params: Mapping[str, Tensor]) -> None:
        """校验每个键都对应已有参数且形状一致"""
        for key, grad in self.grads.items():
            if key not in params:
                raise UsageException(f"梯度键 {key} 没有对应的参数")
            if grad.shape != params[key].shape:
                raise UsageException(
                    f"梯度 {key} 形状不一致",
                    detail={"grad": list(grad.shape), "param": list(params[key].shape)},
                )
