"""
@Author: li
@FileName: bundle.py
@DateTime: 2025-07-10
@Docs: 训练结果模型包：域自适应模型、生成器、策略与价值网络
"""

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from app.core.exceptions import ConfigurationException
from app.domain_adaptation import DaModel
from app.engine import AdamState, DenseNetwork
from app.generators import GeneratorPair
from app.models.data_enum import VariantEnum
from app.selector import PolicyNet, ValueNet, state_dim


@dataclass
class RTNetModel:
    """完整模型包"""

    da: DaModel
    generators: GeneratorPair
    policy: PolicyNet
    value: ValueNet
    variant: VariantEnum = VariantEnum.RTNET
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.generators.source_generator.in_dim != self.da.feature_dim:
            raise ConfigurationException("生成器输入维度与特征维度不一致")
        if self.generators.source_generator.out_dim != self.input_dim:
            raise ConfigurationException("生成器输出维度与输入维度不一致")
        expected = state_dim(self.da.feature_dim, self.da.num_classes)
        if self.policy.network.in_dim != expected or self.value.network.in_dim != expected:
            raise ConfigurationException(f"策略/价值网络输入维度应为 {expected}")

    @classmethod
    def build(
        cls,
        input_dim: int,
        num_classes: int,
        *,
        model_rng: np.random.Generator,
        generator_rng: np.random.Generator,
        selector_rng: np.random.Generator,
        feature_dim: int = 16,
        hidden_dim: int = 32,
        selector_hidden_dim: int = 64,
        variant: VariantEnum = VariantEnum.RTNET,
    ) -> "RTNetModel":
        """按组件使用独立随机流初始化，变体之间 F、C 的初值一致"""
        da = DaModel.build(input_dim, num_classes, model_rng, feature_dim=feature_dim, hidden_dim=hidden_dim)
        generators = GeneratorPair.build(feature_dim, input_dim, generator_rng, hidden_dim=hidden_dim)
        length = state_dim(feature_dim, num_classes)
        policy = PolicyNet.build(length, selector_rng, hidden_dim=selector_hidden_dim)
        value = ValueNet.build(length, selector_rng, hidden_dim=selector_hidden_dim)
        return cls(da, generators, policy, value, variant)

    @property
    def input_dim(self) -> int:
        return self.da.feature_extractor.in_dim

    @property
    def num_classes(self) -> int:
        return self.da.num_classes

    @property
    def feature_dim(self) -> int:
        return self.da.feature_dim

    def networks(self) -> dict[str, DenseNetwork]:
        """按固定名称列出全部网络"""
        return {
            "F": self.da.feature_extractor,
            "C": self.da.classifier,
            "G_s": self.generators.source_generator,
            "G_t": self.generators.target_generator,
            "policy": self.policy.network,
            "value": self.value.network,
        }

    @classmethod
    def from_networks(
        cls,
        networks: dict[str, DenseNetwork],
        variant: VariantEnum = VariantEnum.RTNET,
        metadata: dict[str, Any] | None = None,
    ) -> "RTNetModel":
        """由网络字典重建（优化器状态重新初始化）"""
        missing = {"F", "C", "G_s", "G_t", "policy", "value"} - set(networks)
        if missing:
            raise ConfigurationException(f"缺少网络: {sorted(missing)}")
        return cls(
            da=DaModel.from_networks(networks["F"], networks["C"]),
            generators=GeneratorPair.from_networks(networks["G_s"], networks["G_t"]),
            policy=PolicyNet(networks["policy"], AdamState.for_params(networks["policy"].parameters())),
            value=ValueNet(networks["value"], AdamState.for_params(networks["value"].parameters())),
            variant=variant,
            metadata=dict(metadata or {}),
        )
