"""
@Author: li
@FileName: updates.py
@DateTime: 2025-07-08
@Docs: actor-critic 回合后更新：策略梯度上升与价值回归
"""

import numpy as np

from app.core.exceptions import UsageException
from app.domain_adaptation.losses import PROB_FLOOR
from app.engine import GradientSet, Tensor, adam_step, as_tensor
from app.selector.history import EpisodeHistory, advantage
from app.selector.policy import PolicyNet, ValueNet


def _check_returns(history: EpisodeHistory, returns: Tensor) -> Tensor:
    returns = as_tensor(returns, ndim=1, name="returns")
    if returns.shape[0] != len(history):
        raise UsageException(f"回报数量 {returns.shape[0]} 与历史步数 {len(history)} 不一致")
    return returns


def policy_gradient(policy: PolicyNet, states: Tensor, actions: np.ndarray, advantages: Tensor) -> GradientSet:
    """损失 −(1/n)·Σ v_i·log π(a_i|s_i) 对 θ 的梯度（Adam 之前）

    下降该损失即沿 (1/n)·Σ v_i·∇θ log π 上升；概率按 1e-12 截断，截断处梯度为 0。
    """
    states = as_tensor(states, ndim=2, name="states")
    advantages = as_tensor(advantages, ndim=1, name="advantages")
    actions = np.asarray(actions, dtype=np.int64)
    n = states.shape[0]
    if actions.shape != (n,) or advantages.shape != (n,):
        raise UsageException("状态、动作与优势数量不一致")

    probs = policy.network.forward(states)
    rows = np.arange(n)
    chosen = probs[rows, actions]
    upstream = np.zeros_like(probs)
    upstream[rows, actions] = np.where(chosen > PROB_FLOOR, -advantages / (n * np.maximum(chosen, PROB_FLOOR)), 0.0)
    return GradientSet(policy.network.backward(upstream).grads)


def value_gradient(value: ValueNet, states: Tensor, batch_return: float) -> tuple[float, GradientSet]:
    """均方误差 (1/n)·Σ (r'_b − V(s_i))² 及其对 Ω 的梯度"""
    states = as_tensor(states, ndim=2, name="states")
    estimates = value.network.forward(states)
    residual = batch_return - estimates
    loss = float(np.mean(residual[:, 0] ** 2))
    grads = value.network.backward(-2.0 * residual / states.shape[0])
    return loss, GradientSet(grads.grads)


def update_policy(policy: PolicyNet, history: EpisodeHistory, returns: Tensor, lr: float) -> PolicyNet:
    """按批次顺序对每条记录执行一步策略梯度上升（Adam）

    优势使用采集时记录的 V(s_i)，动作为回退后的记录动作。
    """
    returns = _check_returns(history, returns)
    for record, batch_return in zip(history, returns, strict=True):
        advantages = advantage(float(batch_return), record.values)
        grads = policy_gradient(policy, record.states, record.actions, advantages)
        adam_step(policy.network.parameters(), grads, policy.state, lr)
    return policy


def update_value(value: ValueNet, history: EpisodeHistory, returns: Tensor, lr: float) -> ValueNet:
    """按批次顺序对每条记录执行一步价值回归（Adam）"""
    returns = _check_returns(history, returns)
    for record, batch_return in zip(history, returns, strict=True):
        _, grads = value_gradient(value, record.states, float(batch_return))
        adam_step(value.network.parameters(), grads, value.state, lr)
    return value
