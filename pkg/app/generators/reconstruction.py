"""
@Author: li
@FileName: reconstruction.py
@DateTime: 2025-07-06
@Docs: 源/目标重构生成器 G_s、G_t，重构误差奖励与生成器（预）训练
"""

from dataclasses import dataclass

import numpy as np

from app.core.exceptions import ConfigurationException, UsageException
from app.engine import AdamState, DenseNetwork, Tensor, adam_step, as_tensor
from app.models.data_enum import ActivationEnum
from app.utils.logger import log_function_calls, logger


@dataclass
class GeneratorPair:
    """生成器对：特征 d 维 → 输入空间"""

    source_generator: DenseNetwork
    target_generator: DenseNetwork
    source_state: AdamState
    target_state: AdamState

    def __post_init__(self):
        if self.source_generator.in_dim != self.target_generator.in_dim:
            raise ConfigurationException("源/目标生成器输入维度不一致")
        if self.source_generator.out_dim != self.target_generator.out_dim:
            raise ConfigurationException("源/目标生成器输出维度不一致")

    @classmethod
    def build(cls, feature_dim: int, input_dim: int, rng: np.random.Generator, hidden_dim: int = 32) -> "GeneratorPair":
        """稠密解码器 d→hidden→input_dim (relu, linear)"""
        sizes = [feature_dim, hidden_dim, input_dim]
        activations = [ActivationEnum.RELU, ActivationEnum.LINEAR]
        source_generator = DenseNetwork.build(sizes, activations, rng, name="G_s")
        target_generator = DenseNetwork.build(sizes, activations, rng, name="G_t")
        return cls.from_networks(source_generator, target_generator)

    @classmethod
    def from_networks(cls, source_generator: DenseNetwork, target_generator: DenseNetwork) -> "GeneratorPair":
        return cls(
            source_generator=source_generator,
            target_generator=target_generator,
            source_state=AdamState.for_params(source_generator.parameters()),
            target_state=AdamState.for_params(target_generator.parameters()),
        )


def reconstruction_error(generator: DenseNetwork, feature_extractor: DenseNetwork, x: Tensor) -> Tensor:
    """逐样本平方重构误差 ‖x − G(F(x))‖²"""
    x = as_tensor(x, ndim=2, name="x")
    reconstructed = generator.infer(feature_extractor.infer(x))
    if reconstructed.shape != x.shape:
        raise ConfigurationException(
            "生成器输出维度与输入维度不一致",
            detail={"x": list(x.shape), "reconstruction": list(reconstructed.shape)},
        )
    return np.sum((x - reconstructed) ** 2, axis=1)


def compute_reward(target_generator: DenseNetwork, feature_extractor: DenseNetwork, selected_x: Tensor) -> float:
    """批次奖励 r_b = exp(−mean‖x' − G_t(F(x'))‖²)，取值 (0, 1]"""
    selected_x = as_tensor(selected_x, ndim=2, name="selected_x")
    if selected_x.shape[0] == 0:
        raise UsageException("计算奖励前须先执行空选择回退，选中样本不能为空")
    errors = reconstruction_error(target_generator, feature_extractor, selected_x)
    return float(np.exp(-np.mean(errors)))


def _reconstruction_step(generator: DenseNetwork, state: AdamState, features: Tensor, x: Tensor, lr: float) -> float:
    """对单个生成器执行一步 Adam，最小化批均值平方重构误差"""
    reconstructed = generator.forward(features)
    residual = x - reconstructed
    loss = float(np.mean(np.sum(residual**2, axis=1)))
    grads = generator.backward(-2.0 * residual / x.shape[0])
    adam_step(generator.parameters(), grads, state, lr)
    return loss


def update_generators(
    pair: GeneratorPair,
    feature_extractor: DenseNetwork,
    selected_source_x: Tensor,
    target_x: Tensor,
    lr: float,
) -> tuple[float, float]:
    """一步生成器更新：G_s 重构选中源样本，G_t 重构目标样本；F 冻结

    Returns:
        (源重构损失, 目标重构损失)，均为更新前的批均值
    """
    selected_source_x = as_tensor(selected_source_x, ndim=2, name="selected_source_x")
    target_x = as_tensor(target_x, ndim=2, name="target_x")
    if selected_source_x.shape[0] == 0 or target_x.shape[0] == 0:
        raise UsageException("生成器更新的源/目标批次不能为空")

    source_features = feature_extractor.infer(selected_source_x)
    target_features = feature_extractor.infer(target_x)
    source_loss = _reconstruction_step(pair.source_generator, pair.source_state, source_features, selected_source_x, lr)
    target_loss = _reconstruction_step(pair.target_generator, pair.target_state, target_features, target_x, lr)
    return source_loss, target_loss


@log_function_calls()
def pretrain_generators(
    pair: GeneratorPair,
    feature_extractor: DenseNetwork,
    source_x: Tensor,
    target_x: Tensor,
    steps: int,
    batch_size: int,
    lr: float,
    rng: np.random.Generator,
) -> GeneratorPair:
    """在全部数据的随机批次上预训练生成器

    Args:
        pair: 生成器对（原地更新）
        feature_extractor: 已初始化的特征提取器
        source_x: 全部源样本
        target_x: 全部目标训练样本（无标签）
        steps: 预训练步数，0 表示不训练
        batch_size: 每步批大小（不超过各域样本数）
        lr: 学习率
        rng: 随机数生成器
    """
    source_x = as_tensor(source_x, ndim=2, name="source_x")
    target_x = as_tensor(target_x, ndim=2, name="target_x")
    if steps <= 0:
        return pair

    source_batch = min(batch_size, source_x.shape[0])
    target_batch = min(batch_size, target_x.shape[0])
    losses = (0.0, 0.0)
    for _ in range(steps):
        source_index = rng.choice(source_x.shape[0], size=source_batch, replace=False)
        target_index = rng.choice(target_x.shape[0], size=target_batch, replace=False)
        losses = update_generators(pair, feature_extractor, source_x[source_index], target_x[target_index], lr)
    logger.info(f"生成器预训练完成: {steps} 步, 最后一步重构损失 源={losses[0]:.4f} 目标={losses[1]:.4f}")
    return pair
