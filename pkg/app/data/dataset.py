"""
@Author: li
@FileName: dataset.py
@DateTime: 2025-07-09
@Docs: 数据集类型：带标签数据集与训练器可见的无标签视图
"""

from dataclasses import dataclass

import numpy as np

from app.core.exceptions import UsageException
from app.engine import DTYPE, Tensor
from app.models.data_enum import DomainEnum


@dataclass(frozen=True)
class UnlabeledDataset:
    """无标签视图：目标域训练集交给训练器时只暴露输入"""

    inputs: Tensor
    domain: DomainEnum

    @property
    def size(self) -> int:
        return int(self.inputs.shape[0])

    @property
    def input_dim(self) -> int:
        return int(self.inputs.shape[1])


@dataclass(frozen=True)
class Dataset:
    """带标签数据集

    目标训练集的标签仅供评估读取，训练器通过 as_unlabeled() 获得无标签视图。
    """

    inputs: Tensor
    labels: np.ndarray
    domain: DomainEnum
    num_classes: int

    def __post_init__(self):
        if self.inputs.ndim != 2:
            raise UsageException("数据集输入必须是二维矩阵", detail={"shape": list(self.inputs.shape)})
        if self.labels.shape != (self.inputs.shape[0],):
            raise UsageException("标签数量与样本数量不一致")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.num_classes):
            raise UsageException(f"标签超出范围 [0, {self.num_classes})")

    @classmethod
    def create(cls, inputs, labels, domain: DomainEnum, num_classes: int) -> "Dataset":
        inputs = np.asarray(inputs, dtype=DTYPE)
        labels = np.asarray(labels, dtype=np.int64)
        return cls(inputs, labels, DomainEnum(domain), int(num_classes))

    @property
    def size(self) -> int:
        return int(self.inputs.shape[0])

    @property
    def input_dim(self) -> int:
        return int(self.inputs.shape[1])

    @property
    def classes(self) -> list[int]:
        """实际出现的类别（升序）"""
        return sorted(int(c) for c in np.unique(self.labels))

    def as_unlabeled(self) -> UnlabeledDataset:
        return UnlabeledDataset(self.inputs, self.domain)

    def equals(self, other: "Dataset") -> bool:
        """逐位比较输入、标签与元数据"""
        return (
            self.domain is other.domain
            and self.num_classes == other.num_classes
            and self.inputs.shape == other.inputs.shape
            and np.array_equal(self.inputs, other.inputs)
            and np.array_equal(self.labels, other.labels)
        )
