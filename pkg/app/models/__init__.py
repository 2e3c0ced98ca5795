"""
@Author: li
@FileName: __init__.py
@DateTime: 2025-07-03
@Docs: 模型包：枚举定义；模型包类型见 app.models.bundle
"""

from .data_enum import (
    ActivationEnum,
    DomainEnum,
    RowTypeEnum,
    RunStatusEnum,
    SelectorActionEnum,
    SweepAxisEnum,
    TrainingEventEnum,
    VariantEnum,
)

__all__ = [
    "ActivationEnum",
    "DomainEnum",
    "RowTypeEnum",
    "RunStatusEnum",
    "SelectorActionEnum",
    "SweepAxisEnum",
    "TrainingEventEnum",
    "VariantEnum",
]
