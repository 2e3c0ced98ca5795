"""
@Author: li
@FileName: history.py
@DateTime: 2025-07-08
@Docs: 回合历史、折扣回报与优势估计
"""

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from app.core.exceptions import UsageException
from app.engine import Tensor, as_tensor


@dataclass(frozen=True)
class StepRecord:
    """单个批次（步）的记录"""

    batch_id: int
    states: Tensor  # n×l
    actions: np.ndarray  # n，回退后的动作
    reward: float
    values: Tensor  # n，采集时的 V(s_i)

    def __post_init__(self):
        n = self.states.shape[0]
        if self.actions.shape != (n,) or self.values.shape != (n,):
            raise UsageException(
                f"批次 {self.batch_id} 的状态、动作与价值数量不一致",
                detail={"states": n, "actions": list(self.actions.shape), "values": list(self.values.shape)},
            )

    @property
    def size(self) -> int:
        return int(self.states.shape[0])


@dataclass
class EpisodeHistory:
    """一个回合内按批次顺序追加的记录"""

    episode: int = 1
    records: list[StepRecord] = field(default_factory=list)

    def append(self, record: StepRecord) -> None:
        """追加记录，批次编号须从 1 开始严格递增"""
        expected = len(self.records) + 1
        if record.batch_id != expected:
            raise UsageException(f"批次编号应为 {expected}，实际为 {record.batch_id}")
        self.records.append(record)

    def __iter__(self) -> Iterator[StepRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def rewards(self) -> list[float]:
        return [record.reward for record in self.records]


def discounted_returns(rewards: Sequence[float], gamma: float) -> Tensor:
    """折扣回报 r'_b = Σ_{j=0..N−b} γʲ·r_{b+j}，按 r'_b = r_b + γ·r'_{b+1} 逆序递推"""
    if not 0.0 <= gamma <= 1.0:
        raise UsageException(f"γ 必须在 [0, 1] 内，当前为 {gamma}")
    rewards = as_tensor(rewards, ndim=1, name="rewards")
    if rewards.shape[0] == 0:
        raise UsageException("奖励序列不能为空")
    returns = np.empty_like(rewards)
    running = 0.0
    for index in range(rewards.shape[0] - 1, -1, -1):
        running = rewards[index] + gamma * running
        returns[index] = running
    return returns


def advantage(batch_return: float, values: Tensor) -> Tensor:
    """优势估计 v_i = r'_b − V(s_i)，批内所有状态共享同一回报"""
    return batch_return - as_tensor(values, name="values")
