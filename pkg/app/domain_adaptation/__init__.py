"""
@Author: li
@FileName: __init__.py
@DateTime: 2025-07-05
@Docs: 域自适应模型（F、C）与损失函数
"""

from .losses import (
    PROB_FLOOR,
    coral_loss,
    coral_loss_and_grad,
    covariance,
    source_ce_loss,
    source_ce_loss_and_grad,
    target_entropy_loss,
    target_entropy_loss_and_grad,
)
from .model import DaModel, DaObjective, da_objective, predict, update_da_model

__all__ = [
    "PROB_FLOOR",
    "covariance",
    "coral_loss",
    "coral_loss_and_grad",
    "source_ce_loss",
    "source_ce_loss_and_grad",
    "target_entropy_loss",
    "target_entropy_loss_and_grad",
    "DaModel",
    "DaObjective",
    "da_objective",
    "update_da_model",
    "predict",
]
