"""
@Author: li
@FileName: synthetic.py
@DateTime: 2025-07-09
@Docs: 合成部分域自适应任务：源域高斯团、目标域仿射偏移与分层切分
"""

import math

import numpy as np

from app.core.exceptions import ConfigurationException
from app.data.dataset import Dataset
from app.engine import DTYPE, Tensor
from app.models.data_enum import DomainEnum
from app.schemas.config import PdaTaskSpec
from app.utils.logger import logger


def _validate_spec(spec: PdaTaskSpec) -> None:
    # model_construct 绕过 pydantic 校验时也要拦住退化定义
    if not spec.shared_classes:
        raise ConfigurationException("目标类别集合不能为空")
    if any(not 0 <= c < spec.num_source_classes for c in spec.shared_classes):
        raise ConfigurationException(
            "目标类别必须是源类别的子集",
            detail={"shared_classes": list(spec.shared_classes), "num_source_classes": spec.num_source_classes},
        )
    if len(set(spec.shared_classes)) != len(spec.shared_classes):
        raise ConfigurationException("目标类别存在重复")
    if spec.noise_scale < 0:
        raise ConfigurationException(f"噪声尺度不能为负: {spec.noise_scale}")
    if spec.samples_per_class < 1 or spec.target_per_class < 1:
        raise ConfigurationException("每类样本数至少为 1")


def class_centers(spec: PdaTaskSpec) -> Tensor:
    """类中心等距排布在前两维的圆上，相邻中心相距恰为 separation

    半径 R = separation / (2·sin(π/K))，第 c 个中心的角度为 center_phase_deg + 360°·c/K，
    其余维度为 0。K ≥ 3 时非相邻中心距离更大，最小两两距离即 separation。
    """
    k = spec.num_source_classes
    radius = spec.separation / (2.0 * math.sin(math.pi / k))
    angles = math.radians(spec.center_phase_deg) + 2.0 * math.pi * np.arange(k) / k
    centers = np.zeros((k, spec.input_dim), dtype=DTYPE)
    centers[:, 0] = radius * np.cos(angles)
    centers[:, 1] = radius * np.sin(angles)

    diffs = centers[:, None, :] - centers[None, :, :]
    distances = np.sqrt(np.sum(diffs**2, axis=-1))
    closest = distances[~np.eye(k, dtype=bool)].min()
    if closest < spec.separation * (1.0 - 1e-9):
        raise ConfigurationException(
            f"类中心最小两两距离 {closest} 小于 separation {spec.separation}",
            detail={"num_source_classes": k, "input_dim": spec.input_dim},
        )
    return centers


def domain_shift(x: Tensor, spec: PdaTaskSpec) -> Tensor:
    """目标域仿射偏移：前两维旋转，整体缩放，再逐维平移"""
    theta = math.radians(spec.rotation_deg)
    rotation = np.eye(spec.input_dim, dtype=DTYPE)
    rotation[:2, :2] = [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
    return spec.feature_scale * (x @ rotation.T) + spec.translation


def _blobs(centers: Tensor, classes: list[int], per_class: int, noise: float, rng: np.random.Generator):
    inputs = []
    labels = []
    for c in classes:
        inputs.append(centers[c] + noise * rng.standard_normal((per_class, centers.shape[1])))
        labels.append(np.full(per_class, c, dtype=np.int64))
    return np.vstack(inputs), np.concatenate(labels)


def gen_pda_task(spec: PdaTaskSpec) -> tuple[Dataset, Dataset, Dataset]:
    """生成部分域自适应任务

    Returns:
        (源域数据集, 目标训练集, 目标测试集)；目标集只含共享类别
    """
    _validate_spec(spec)
    source_seq, target_seq, split_seq = np.random.SeedSequence(spec.seed).spawn(3)
    centers = class_centers(spec)

    source_x, source_y = _blobs(
        centers,
        list(range(spec.num_source_classes)),
        spec.samples_per_class,
        spec.noise_scale,
        np.random.default_rng(source_seq),
    )
    shared = sorted(spec.shared_classes)
    target_x, target_y = _blobs(
        centers, shared, spec.target_per_class, spec.noise_scale, np.random.default_rng(target_seq)
    )
    target_x = domain_shift(target_x, spec)

    # 按类分层：每类打乱后前 ⌊m_c/2⌋ 个进入训练集
    split_rng = np.random.default_rng(split_seq)
    train_index = []
    test_index = []
    for c in shared:
        members = split_rng.permutation(np.flatnonzero(target_y == c))
        half = members.shape[0] // 2
        train_index.append(np.sort(members[:half]))
        test_index.append(np.sort(members[half:]))
    train_index = np.concatenate(train_index)
    test_index = np.concatenate(test_index)

    num_classes = spec.num_source_classes
    source = Dataset.create(source_x, source_y, DomainEnum.SOURCE, num_classes)
    target_train = Dataset.create(target_x[train_index], target_y[train_index], DomainEnum.TARGET, num_classes)
    target_test = Dataset.create(target_x[test_index], target_y[test_index], DomainEnum.TARGET, num_classes)
    logger.debug(
        f"生成任务: 源域 {source.size} 个样本/{num_classes} 类, "
        f"目标训练 {target_train.size} / 测试 {target_test.size} 个样本, 共享类别 {shared}"
    )
    return source, target_train, target_test
