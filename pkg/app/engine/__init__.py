"""
@Author: li
@FileName: __init__.py
@DateTime: 2025-07-03
@Docs: 数值内核：张量、全连接网络、反向传播、Adam 与梯度校验
"""

from .gradcheck import finite_diff_check
from .network import DenseLayer, DenseNetwork, softmax
from .optim import AdamState, adam_step
from .tensor import DTYPE, GradientSet, Tensor, as_tensor, ensure_finite

__all__ = [
    "DTYPE",
    "Tensor",
    "GradientSet",
    "as_tensor",
    "ensure_finite",
    "DenseLayer",
    "DenseNetwork",
    "softmax",
    "AdamState",
    "adam_step",
    "finite_diff_check",
]
