"""
@Author: li
@FileName: checkpoint_dao.py
@DateTime: 2025-07-10
@Docs: 模型检查点读写（npz 容器 + JSON 清单）
"""

import json
import zipfile
from pathlib import Path
from typing import IO

import numpy as np

from app.core.config import settings
from app.core.exceptions import CheckpointException, ConfigurationException, RTNetException
from app.engine import DTYPE, DenseLayer, DenseNetwork
from app.models.bundle import RTNetModel
from app.models.data_enum import ActivationEnum, VariantEnum

from .base_dao import BaseDAO


def checkpoint_name(version: int | None = None) -> str:
    return f"checkpoint.v{settings.CHECKPOINT_VERSION if version is None else version}"


class CheckpointDAO(BaseDAO[RTNetModel]):
    """检查点：format_version、manifest 以及每个参数一个 float64 数组

    数组键形如 "<网络>.<层>.weight|bias"；只保存参数，优化器状态在读取时重新初始化。
    """

    binary = True

    def __init__(self, version: int | None = None):
        self.version = settings.CHECKPOINT_VERSION if version is None else version
        self.filename = checkpoint_name(self.version)

    def not_found(self, path: Path) -> RTNetException:
        return CheckpointException(f"检查点不存在: {path}")

    def manifest(self, model: RTNetModel) -> dict:
        return {
            "variant": model.variant.value,
            "input_dim": model.input_dim,
            "num_classes": model.num_classes,
            "feature_dim": model.feature_dim,
            "networks": {
                name: [
                    {"in": layer.in_dim, "out": layer.out_dim, "activation": layer.activation.value}
                    for layer in network.layers
                ]
                for name, network in model.networks().items()
            },
            "metadata": model.metadata,
        }

    def dump(self, model: RTNetModel, handle: IO[bytes]) -> None:
        arrays = {
            f"{name}.{key}": param
            for name, network in model.networks().items()
            for key, param in network.parameters().items()
        }
        np.savez(
            handle,
            format_version=np.array(self.version, dtype=np.int64),
            manifest=np.array(json.dumps(self.manifest(model), sort_keys=True, ensure_ascii=False)),
            **arrays,
        )

    def parse(self, handle: IO[bytes], path: Path) -> RTNetModel:
        try:
            with np.load(handle, allow_pickle=False) as archive:
                contents = {key: archive[key] for key in archive.files}
        except (OSError, ValueError, zipfile.BadZipFile) as e:
            raise CheckpointException(f"检查点无法读取: {path}", detail=str(e)) from e

        if "format_version" not in contents or "manifest" not in contents:
            raise CheckpointException(f"检查点缺少 format_version 或 manifest: {path}")
        version = int(contents["format_version"])
        if version != self.version:
            raise CheckpointException(
                f"检查点版本 {version} 与当前版本 {self.version} 不一致", detail={"path": str(path)}
            )
        manifest = json.loads(str(contents["manifest"]))

        networks = {}
        for name, layers_spec in manifest["networks"].items():
            layers = []
            for index, spec in enumerate(layers_spec):
                weight = contents.get(f"{name}.{index}.weight")
                bias = contents.get(f"{name}.{index}.bias")
                if weight is None or bias is None:
                    raise CheckpointException(f"检查点缺少网络 {name} 第 {index} 层参数")
                if weight.shape != (spec["out"], spec["in"]) or bias.shape != (spec["out"],):
                    raise CheckpointException(
                        f"网络 {name} 第 {index} 层参数形状与清单不一致",
                        detail={"weight": list(weight.shape), "bias": list(bias.shape), "manifest": spec},
                    )
                layers.append(
                    DenseLayer(weight.astype(DTYPE), bias.astype(DTYPE), ActivationEnum(spec["activation"]))
                )
            networks[name] = DenseNetwork(layers, name=name)

        try:
            return RTNetModel.from_networks(
                networks, variant=VariantEnum(manifest["variant"]), metadata=manifest.get("metadata")
            )
        except ConfigurationException as e:
            raise CheckpointException(f"检查点结构非法: {e.message}", detail=e.detail) from e
