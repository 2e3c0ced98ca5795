"""
@Author: li
@FileName: __init__.py
@DateTime: 2025-07-07
@Docs: 强化数据选择器
"""

from app.selector.history import EpisodeHistory, StepRecord, advantage, discounted_returns
from app.selector.policy import (
    PolicyNet,
    Selection,
    ValueNet,
    epsilon_schedule,
    policy_forward,
    sample_actions,
    select_batch,
    value_forward,
)
from app.selector.state import build_states, state_dim, target_label_distribution
from app.selector.updates import policy_gradient, update_policy, update_value, value_gradient

__all__ = [
    "EpisodeHistory",
    "PolicyNet",
    "Selection",
    "StepRecord",
    "ValueNet",
    "advantage",
    "build_states",
    "discounted_returns",
    "epsilon_schedule",
    "policy_forward",
    "policy_gradient",
    "sample_actions",
    "select_batch",
    "state_dim",
    "target_label_distribution",
    "update_policy",
    "update_value",
    "value_forward",
    "value_gradient",
]
