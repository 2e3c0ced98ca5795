"""
@Author: li
@FileName: network.py
@DateTime: 2025-07-03
@Docs: 全连接网络：前向、反向传播与参数管理
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from app.core.exceptions import ConfigurationException, UsageException
from app.engine.tensor import DTYPE, GradientSet, Tensor, as_tensor, ensure_finite
from app.models.data_enum import ActivationEnum


def softmax(logits: Tensor) -> Tensor:
    """按行 softmax（减去行最大值保证数值稳定）"""
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _activate(pre: Tensor, activation: ActivationEnum) -> Tensor:
    if activation is ActivationEnum.RELU:
        return np.maximum(pre, 0.0)
    if activation is ActivationEnum.SOFTMAX:
        return softmax(pre)
    if activation is ActivationEnum.SIGMOID:
        return 1.0 / (1.0 + np.exp(-pre))
    return pre


def _activation_backward(upstream: Tensor, pre: Tensor, out: Tensor, activation: ActivationEnum) -> Tensor:
    """由 dL/d(out) 求 dL/d(pre)"""
    if activation is ActivationEnum.RELU:
        return upstream * (pre > 0.0)
    if activation is ActivationEnum.SOFTMAX:
        # 雅可比-向量积: p ⊙ (u − <u, p>)
        return out * (upstream - np.sum(upstream * out, axis=1, keepdims=True))
    if activation is ActivationEnum.SIGMOID:
        return upstream * out * (1.0 - out)
    return upstream


@dataclass
class DenseLayer:
    """全连接层: activation(x·Wᵀ + b)，W 形状为 out×in"""

    weight: Tensor
    bias: Tensor
    activation: ActivationEnum = ActivationEnum.LINEAR

    @property
    def in_dim(self) -> int:
        return int(self.weight.shape[1])

    @property
    def out_dim(self) -> int:
        return int(self.weight.shape[0])


@dataclass
class _LayerCache:
    inputs: Tensor
    pre: Tensor
    out: Tensor


class DenseNetwork:
    """全连接层堆叠

    参数标识形如 "{layer_index}.weight" / "{layer_index}.bias"。
    forward 记录中间激活供 backward 使用；infer 不记录，可在冻结参数上并发调用。
    """

    def __init__(self, layers: Sequence[DenseLayer], name: str = "net"):
        if not layers:
            raise ConfigurationException(f"网络 {name} 至少需要一层")
        for index, layer in enumerate(layers):
            if layer.weight.ndim != 2 or layer.bias.shape != (layer.out_dim,):
                raise ConfigurationException(
                    f"网络 {name} 第 {index} 层参数形状非法",
                    detail={"weight": list(layer.weight.shape), "bias": list(layer.bias.shape)},
                )
            if index > 0 and layers[index - 1].out_dim != layer.in_dim:
                raise ConfigurationException(
                    f"网络 {name} 第 {index} 层输入维度 {layer.in_dim} 与上一层输出维度 {layers[index - 1].out_dim} 不一致"
                )
            if layer.activation is ActivationEnum.SOFTMAX and index != len(layers) - 1:
                raise ConfigurationException(f"网络 {name} 的 softmax 只能出现在最后一层")
        self.layers = list(layers)
        self.name = name
        self._cache: list[_LayerCache] | None = None

    @classmethod
    def build(
        cls,
        sizes: Sequence[int],
        activations: Sequence[ActivationEnum | str],
        rng: np.random.Generator,
        name: str = "net",
    ) -> "DenseNetwork":
        """按层宽构建网络，权重 Glorot 均匀初始化，偏置为零

        Args:
            sizes: 各层宽度 [in, h1, ..., out]
            activations: 每层激活函数，长度为 len(sizes) - 1
            rng: 随机数生成器
            name: 网络名称
        """
        if len(sizes) < 2 or len(activations) != len(sizes) - 1:
            raise ConfigurationException(f"网络 {name} 的层宽与激活函数数量不匹配")
        layers = []
        for fan_in, fan_out, activation in zip(sizes[:-1], sizes[1:], activations, strict=True):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            weight = rng.uniform(-limit, limit, size=(fan_out, fan_in)).astype(DTYPE)
            layers.append(DenseLayer(weight, np.zeros(fan_out, dtype=DTYPE), ActivationEnum(activation)))
        return cls(layers, name=name)

    @property
    def in_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def out_dim(self) -> int:
        return self.layers[-1].out_dim

    @property
    def param_count(self) -> int:
        return sum(layer.weight.size + layer.bias.size for layer in self.layers)

    def parameters(self) -> dict[str, Tensor]:
        """返回参数字典（引用原数组，原地更新即生效）"""
        params: dict[str, Tensor] = {}
        for index, layer in enumerate(self.layers):
            params[f"{index}.weight"] = layer.weight
            params[f"{index}.bias"] = layer.bias
        return params

    def zero_(self) -> "DenseNetwork":
        """将所有参数置零"""
        for param in self.parameters().values():
            param.fill(0.0)
        return self

    def copy(self) -> "DenseNetwork":
        """深拷贝参数"""
        layers = [DenseLayer(layer.weight.copy(), layer.bias.copy(), layer.activation) for layer in self.layers]
        return DenseNetwork(layers, name=self.name)

    def _check_input(self, x: Tensor) -> Tensor:
        x = as_tensor(x, name=f"{self.name} 输入")
        if x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise ConfigurationException(
                f"网络 {self.name} 输入维度不匹配: 期望 {self.in_dim} 列",
                detail={"shape": list(x.shape)},
            )
        return x

    def _run(self, x: Tensor, record: bool) -> Tensor:
        x = self._check_input(x)
        cache: list[_LayerCache] = []
        out = x
        for layer in self.layers:
            pre = out @ layer.weight.T + layer.bias
            activated = _activate(pre, layer.activation)
            if record:
                cache.append(_LayerCache(out, pre, activated))
            out = activated
        ensure_finite(out, f"{self.name} 输出")
        if record:
            self._cache = cache
        return out

    def forward(self, x: Tensor) -> Tensor:
        """前向传播并记录中间激活"""
        return self._run(x, record=True)

    def infer(self, x: Tensor) -> Tensor:
        """只读前向传播，不记录中间激活"""
        return self._run(x, record=False)

    def backward(self, upstream: Tensor) -> GradientSet:
        """反向传播

        Args:
            upstream: 标量损失对网络输出的梯度，形状与最近一次 forward 的输出一致

        Returns:
            各参数梯度，input_grad 为对输入的梯度
        """
        if self._cache is None:
            raise UsageException(f"网络 {self.name} 尚未记录前向传播，无法反向传播")
        upstream = as_tensor(upstream, name="upstream")
        if upstream.shape != self._cache[-1].out.shape:
            raise UsageException(
                f"网络 {self.name} 上游梯度形状不一致",
                detail={"upstream": list(upstream.shape), "output": list(self._cache[-1].out.shape)},
            )

        grads: dict[str, Tensor] = {}
        delta = upstream
        for index in range(len(self.layers) - 1, -1, -1):
            layer = self.layers[index]
            record = self._cache[index]
            d_pre = _activation_backward(delta, record.pre, record.out, layer.activation)
            grads[f"{index}.weight"] = d_pre.T @ record.inputs
            grads[f"{index}.bias"] = d_pre.sum(axis=0)
            delta = d_pre @ layer.weight

        for key, grad in grads.items():
            ensure_finite(grad, f"{self.name}.{key} 梯度")
        return GradientSet(grads, input_grad=delta)
