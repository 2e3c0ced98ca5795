"""
@Author: li
@FileName: batching.py
@DateTime: 2025-07-09
@Docs: 按回合确定性打乱并配对源/目标批次
"""

from dataclasses import dataclass

import numpy as np

from app.core.exceptions import ConfigurationException
from app.data.dataset import Dataset, UnlabeledDataset
from app.engine import Tensor


@dataclass(frozen=True)
class BatchPair:
    """第 b 个源批次与第 b 个目标批次（目标批次无标签）"""

    batch_id: int
    source_inputs: Tensor
    source_labels: np.ndarray
    target_inputs: Tensor


def num_batches(source_size: int, target_size: int, batch_size: int) -> int:
    """每回合完整批次数 N = ⌊min(n_s, n_t)/n⌋"""
    if batch_size < 2:
        raise ConfigurationException(f"批大小至少为 2，当前为 {batch_size}")
    smallest = min(source_size, target_size)
    if batch_size > smallest:
        raise ConfigurationException(
            f"批大小 {batch_size} 超过较小域的样本数 {smallest}",
            detail={"source": source_size, "target": target_size},
        )
    return smallest // batch_size


def batches(
    source: Dataset,
    target: UnlabeledDataset,
    batch_size: int,
    seed: int,
    episode: int,
) -> list[BatchPair]:
    """对两个域分别做回合内独立打乱，按顺序切分并配对，丢弃不足一批的余数"""
    count = num_batches(source.size, target.size, batch_size)
    rng = np.random.default_rng([seed, episode])
    source_order = rng.permutation(source.size)
    target_order = rng.permutation(target.size)

    pairs = []
    for b in range(count):
        s_index = source_order[b * batch_size : (b + 1) * batch_size]
        t_index = target_order[b * batch_size : (b + 1) * batch_size]
        pairs.append(
            BatchPair(
                batch_id=b + 1,
                source_inputs=source.inputs[s_index],
                source_labels=source.labels[s_index],
                target_inputs=target.inputs[t_index],
            )
        )
    return pairs
