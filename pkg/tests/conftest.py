"""
@Author: li
@FileName: conftest.py
@DateTime: 2025-07-13
@Docs: 测试公共夹具：日志设置、hypothesis 配置、小型合成任务
"""

import os

# 测试过程中不写日志文件
os.environ.setdefault("LOG_TO_FILE", "false")
os.environ.setdefault("ENVIRONMENT", "testing")

import hypothesis  # noqa: E402
import numpy as np  # noqa: E402
import pytest  # noqa: E402

from app.engine import DenseLayer, DenseNetwork  # noqa: E402
from app.models.data_enum import ActivationEnum  # noqa: E402
from app.schemas.config import ExperimentConfig, PdaTaskSpec  # noqa: E402

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=500, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False, help="运行长时间验收实验")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_task_spec() -> PdaTaskSpec:
    """6 个源类别、3 个共享类别的小任务"""
    return PdaTaskSpec(
        num_source_classes=6,
        shared_classes=[0, 1, 2],
        samples_per_class=20,
        input_dim=4,
        separation=3.0,
        noise_scale=0.3,
        seed=7,
    )


@pytest.fixture
def tiny_config(tiny_task_spec, tmp_path):
    """每回合 3 个批次、共 3 个回合的快速配置"""

    def factory(**overrides) -> ExperimentConfig:
        data = {
            "task": tiny_task_spec.model_dump(),
            "da": {"batch_size": 10, "lr": 1e-3},
            "rl": {"hidden_dim": 8, "lr": 1e-3},
            "episodes": 3,
            "pretrain_steps": 5,
            "feature_dim": 4,
            "hidden_dim": 8,
            "seed": 3,
            "output_dir": tmp_path / "run",
        }
        data.update(overrides)
        return ExperimentConfig.model_validate(data)

    return factory


def linear_network(weight, bias=None, name: str = "net", activation=ActivationEnum.LINEAR) -> DenseNetwork:
    """单层网络，测试中手工指定参数"""
    weight = np.asarray(weight, dtype=np.float64)
    bias = np.zeros(weight.shape[0]) if bias is None else np.asarray(bias, dtype=np.float64)
    return DenseNetwork([DenseLayer(weight, bias, activation)], name=name)


def rows_off_kinks(rng, network: DenseNetwork, rows: int, in_dim: int, encode=None, margin: float = 1e-3):
    """逐行抽样，丢弃使网络首层 ReLU 预激活落在拐点附近的样本

    encode 把样本映射为网络输入（默认原样）。
    """
    layer = network.layers[0]
    kept = []
    for _ in range(1000):
        x = rng.normal(size=(1, in_dim))
        features = x if encode is None else encode(x)
        if np.min(np.abs(features @ layer.weight.T + layer.bias)) > margin:
            kept.append(x)
            if len(kept) == rows:
                return np.vstack(kept)
    raise AssertionError("无法抽到远离拐点的样本")
