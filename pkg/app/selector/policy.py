"""
@Author: li
@FileName: policy.py
@DateTime: 2025-07-07
@Docs: 策略网络 π、价值网络 V、ε-greedy 动作采样、批次筛选与 ε 衰减
"""

import math
from dataclasses import dataclass

import numpy as np

from app.core.exceptions import ConfigurationException, UsageException
from app.engine import AdamState, DenseNetwork, Tensor, as_tensor
from app.models.data_enum import ActivationEnum, SelectorActionEnum


@dataclass
class PolicyNet:
    """策略网络 softmax(W₂·relu(W₁s + b₁) + b₂)，输出 (drop, keep)"""

    network: DenseNetwork
    state: AdamState

    def __post_init__(self):
        if self.network.out_dim != 2 or self.network.layers[-1].activation is not ActivationEnum.SOFTMAX:
            raise ConfigurationException("策略网络必须输出 2 维 softmax")

    @classmethod
    def build(cls, state_dim: int, rng: np.random.Generator, hidden_dim: int = 64, zero_init: bool = False) -> "PolicyNet":
        network = DenseNetwork.build(
            [state_dim, hidden_dim, 2], [ActivationEnum.RELU, ActivationEnum.SOFTMAX], rng, name="policy"
        )
        if zero_init:
            network.zero_()
        return cls(network, AdamState.for_params(network.parameters()))


@dataclass
class ValueNet:
    """价值网络：与策略网络同构，最后一层为线性回归输出"""

    network: DenseNetwork
    state: AdamState

    def __post_init__(self):
        if self.network.out_dim != 1 or self.network.layers[-1].activation is not ActivationEnum.LINEAR:
            raise ConfigurationException("价值网络必须输出 1 维线性值")

    @classmethod
    def build(cls, state_dim: int, rng: np.random.Generator, hidden_dim: int = 64, zero_init: bool = False) -> "ValueNet":
        network = DenseNetwork.build(
            [state_dim, hidden_dim, 1], [ActivationEnum.RELU, ActivationEnum.LINEAR], rng, name="value"
        )
        if zero_init:
            network.zero_()
        return cls(network, AdamState.for_params(network.parameters()))


def policy_forward(policy: PolicyNet, states: Tensor) -> Tensor:
    """动作概率 (n×2)：第 0 列 drop，第 1 列 keep"""
    return policy.network.infer(states)


def value_forward(value: ValueNet, states: Tensor) -> Tensor:
    """状态价值估计 (n,)"""
    return value.network.infer(states)[:, 0]


def sample_actions(probs: Tensor, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    """ε-greedy 动作采样

    每个样本以概率 ε 按 π 的分布采样，否则取 argmax（平局取 keep）。
    每个样本固定消耗两个均匀随机数，抽取顺序按样本下标。

    Returns:
        动作数组 (n,)，取值 {0, 1}
    """
    if not 0.0 <= epsilon <= 1.0:
        raise UsageException(f"ε 必须在 [0, 1] 内，当前为 {epsilon}")
    probs = as_tensor(probs, ndim=2, name="probs")
    draws = rng.random((probs.shape[0], 2))
    keep_prob = probs[:, SelectorActionEnum.KEEP]
    explore = draws[:, 0] < epsilon
    sampled = draws[:, 1] < keep_prob
    greedy = keep_prob >= probs[:, SelectorActionEnum.DROP]
    return np.where(explore, sampled, greedy).astype(np.int64)


@dataclass
class Selection:
    """批次筛选结果"""

    inputs: Tensor
    labels: np.ndarray
    actions: np.ndarray  # 记录到历史中的动作（回退后为全 keep）
    fallback: bool

    @property
    def n_selected(self) -> int:
        return int(self.inputs.shape[0])


def select_batch(source_x: Tensor, source_y: np.ndarray, actions: np.ndarray, min_selected: int = 2) -> Selection:
    """保留 a=1 的样本（保持原顺序）

    选中数少于 min_selected 时执行空选择回退：使用完整批次，记录动作为全 keep。
    """
    source_x = as_tensor(source_x, ndim=2, name="source_x")
    source_y = np.asarray(source_y)
    actions = np.asarray(actions, dtype=np.int64)
    if not (source_x.shape[0] == source_y.shape[0] == actions.shape[0]):
        raise UsageException("样本、标签与动作数量不一致")

    mask = actions == SelectorActionEnum.KEEP
    if int(mask.sum()) < min_selected:
        return Selection(source_x, source_y, np.ones_like(actions), fallback=True)
    return Selection(source_x[mask], source_y[mask], actions.copy(), fallback=False)


def epsilon_schedule(
    episode: int,
    total_episodes: int,
    start: float = 1.0,
    end: float = 0.0,
    decay_fraction: float = 0.8,
) -> float:
    """线性衰减 ε：第 1 回合为 start，在 ⌈decay_fraction·L⌉ 个回合后到达 end 并保持

    默认参数下 ε = max(0, 1 − (e−1)/⌈0.8·L⌉)。
    """
    if total_episodes < 1 or not 1 <= episode <= total_episodes:
        raise UsageException(f"回合序号 {episode} 超出范围 [1, {total_episodes}]")
    decay_episodes = max(1, math.ceil(round(decay_fraction * total_episodes, 9)))
    progress = min(1.0, (episode - 1) / decay_episodes)
    return start + (end - start) * progress
