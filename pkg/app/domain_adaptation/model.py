"""
@Author: li
@FileName: model.py
@DateTime: 2025-07-05
@Docs: 域自适应模型：共享特征提取器 F 与分类器 C，目标函数 L_DA = L_s + λ1·L_t + λ2·L_c
"""

from dataclasses import dataclass

import numpy as np

from app.core.exceptions import ConfigurationException, EmptySelectionException, UsageException
from app.domain_adaptation.losses import (
    coral_loss_and_grad,
    source_ce_loss_and_grad,
    target_entropy_loss_and_grad,
)
from app.engine import AdamState, DenseNetwork, GradientSet, Tensor, adam_step, as_tensor
from app.models.data_enum import ActivationEnum
from app.schemas.config import DaHyperparams


@dataclass
class DaModel:
    """域自适应模型

    feature_extractor 的最后一层即适配层，其输出 Z 参与 CORAL 对齐。
    """

    feature_extractor: DenseNetwork
    classifier: DenseNetwork
    feature_state: AdamState
    classifier_state: AdamState

    def __post_init__(self):
        if self.feature_extractor.out_dim != self.classifier.in_dim:
            raise ConfigurationException(
                f"特征维度 {self.feature_extractor.out_dim} 与分类器输入维度 {self.classifier.in_dim} 不一致"
            )
        if self.classifier.layers[-1].activation is not ActivationEnum.SOFTMAX:
            raise ConfigurationException("分类器最后一层必须是 softmax")

    @classmethod
    def build(
        cls,
        input_dim: int,
        num_classes: int,
        rng: np.random.Generator,
        feature_dim: int = 16,
        hidden_dim: int = 32,
    ) -> "DaModel":
        """默认结构 F: input→hidden→d (relu, linear)；C: d→|C_s| (softmax)"""
        feature_extractor = DenseNetwork.build(
            [input_dim, hidden_dim, feature_dim],
            [ActivationEnum.RELU, ActivationEnum.LINEAR],
            rng,
            name="F",
        )
        classifier = DenseNetwork.build([feature_dim, num_classes], [ActivationEnum.SOFTMAX], rng, name="C")
        return cls.from_networks(feature_extractor, classifier)

    @classmethod
    def from_networks(cls, feature_extractor: DenseNetwork, classifier: DenseNetwork) -> "DaModel":
        return cls(
            feature_extractor=feature_extractor,
            classifier=classifier,
            feature_state=AdamState.for_params(feature_extractor.parameters()),
            classifier_state=AdamState.for_params(classifier.parameters()),
        )

    @property
    def num_classes(self) -> int:
        return self.classifier.out_dim

    @property
    def feature_dim(self) -> int:
        return self.feature_extractor.out_dim

    def features(self, x: Tensor) -> Tensor:
        """只读计算适配层特征 Z = F(x)"""
        return self.feature_extractor.infer(x)


@dataclass
class DaObjective:
    """一次 L_DA 计算结果"""

    total: float
    source_loss: float
    entropy_loss: float
    coral_loss: float
    feature_grads: GradientSet
    classifier_grads: GradientSet
    source_error: float  # 该批源样本在更新前的训练错误率


def da_objective(
    model: DaModel,
    source_x: Tensor,
    source_y: np.ndarray,
    target_x: Tensor,
    hp: DaHyperparams,
) -> DaObjective:
    """计算 L_DA 及 F、C 的梯度

    L_t 只约束 F：其对 C 参数的梯度不累加。λ 为零的项不计算、记为 0。

    Raises:
        EmptySelectionException: 选择后的源批次少于 2 个样本
    """
    source_x = as_tensor(source_x, ndim=2, name="source_x")
    target_x = as_tensor(target_x, ndim=2, name="target_x")
    source_y = np.asarray(source_y)
    n_s = source_x.shape[0]
    n_t = target_x.shape[0]
    if n_s < 2:
        raise EmptySelectionException(n_s)
    if n_t < 2:
        raise UsageException(f"目标批次至少需要 2 个样本，当前为 {n_t}")
    if source_y.shape[0] != n_s:
        raise UsageException("源批次标签数量与样本数量不一致")

    # 两个域拼接后一次前向，按行切分
    features = model.feature_extractor.forward(np.vstack([source_x, target_x]))
    probs = model.classifier.forward(features)
    source_probs = probs[:n_s]
    target_probs = probs[n_s:]

    source_loss, d_source_probs = source_ce_loss_and_grad(source_probs, source_y)
    upstream_source = np.zeros_like(probs)
    upstream_source[:n_s] = d_source_probs
    classifier_grads = model.classifier.backward(upstream_source)
    d_features = classifier_grads.input_grad.copy()

    entropy_loss = 0.0
    if hp.lambda_entropy > 0:
        entropy_loss, d_target_probs = target_entropy_loss_and_grad(target_probs)
        upstream_target = np.zeros_like(probs)
        upstream_target[n_s:] = hp.lambda_entropy * d_target_probs
        # 同一次前向缓存的第二次反向，只取对特征的梯度，丢弃 C 参数梯度
        d_features += model.classifier.backward(upstream_target).input_grad

    coral = 0.0
    if hp.lambda_coral > 0:
        coral, d_zs, d_zt = coral_loss_and_grad(features[:n_s], features[n_s:])
        d_features[:n_s] += hp.lambda_coral * d_zs
        d_features[n_s:] += hp.lambda_coral * d_zt

    feature_grads = model.feature_extractor.backward(d_features)
    total = source_loss + hp.lambda_entropy * entropy_loss + hp.lambda_coral * coral

    return DaObjective(
        total=total,
        source_loss=source_loss,
        entropy_loss=entropy_loss,
        coral_loss=coral,
        feature_grads=GradientSet(feature_grads.grads),
        classifier_grads=GradientSet(classifier_grads.grads),
        source_error=float(np.mean(np.argmax(source_probs, axis=1) != source_y)),
    )


def update_da_model(
    model: DaModel,
    source_x: Tensor,
    source_y: np.ndarray,
    target_x: Tensor,
    hp: DaHyperparams,
) -> DaObjective:
    """对 F、C 执行一步 Adam（原地更新），返回本步的目标函数值"""
    objective = da_objective(model, source_x, source_y, target_x, hp)
    adam_step(model.feature_extractor.parameters(), objective.feature_grads, model.feature_state, hp.lr)
    adam_step(model.classifier.parameters(), objective.classifier_grads, model.classifier_state, hp.lr)
    return objective


def predict(model: DaModel, x: Tensor) -> Tensor:
    """类别概率 ŷ = C(F(x))（只读，可并发调用）"""
    return model.classifier.infer(model.feature_extractor.infer(x))
