"""
@Author: li
@FileName: __init__.py
@DateTime: 2025-07-06
@Docs: 重构生成器与奖励
"""

from .reconstruction import (
    GeneratorPair,
    compute_reward,
    pretrain_generators,
    reconstruction_error,
    update_generators,
)

__all__ = [
    "GeneratorPair",
    "reconstruction_error",
    "compute_reward",
    "update_generators",
    "pretrain_generators",
]
