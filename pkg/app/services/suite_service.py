"""
@Author: li
@FileName: suite_service.py
@DateTime: 2025-07-12
@Docs: 实验套件：沿单一维度扫描配置并汇总最终准确率
"""

import os
from collections import defaultdict
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

import numpy as np

from app.core.config import settings
from app.core.exceptions import ConfigurationException
from app.models.data_enum import RunStatusEnum, SweepAxisEnum, VariantEnum
from app.repositories import CsvTableDAO, sweep_dao
from app.schemas.config import ExperimentConfig
from app.schemas.metrics import SweepRow
from app.services.trainer_service import TrainerService
from app.utils import LogConfig, system_log
from app.utils.logger import logger


def _axis_label(axis: SweepAxisEnum, value: Any) -> str:
    if axis is SweepAxisEnum.VARIANT:
        return VariantEnum(value).value
    if axis is SweepAxisEnum.GAMMA:
        return format(float(value), "g")
    return str(int(value))


def sweep_config(base: ExperimentConfig, axis: SweepAxisEnum, value: Any, seed: int, output_dir: Path) -> ExperimentConfig:
    """在基础配置上设置扫描维度的取值，重新走一遍校验"""
    data = base.model_dump()
    data["seed"] = seed
    data["output_dir"] = output_dir
    if axis is SweepAxisEnum.GAMMA:
        data["rl"]["gamma"] = float(value)
    elif axis is SweepAxisEnum.VARIANT:
        data["variant"] = VariantEnum(value)
    elif axis is SweepAxisEnum.SEED:
        data["seed"] = int(value)
    elif axis is SweepAxisEnum.TARGET_CLASSES:
        if base.task_dir is not None:
            raise ConfigurationException("target_classes 扫描需要由 task 定义生成任务，不能与 task_dir 同时使用")
        k = int(value)
        if not 1 <= k <= base.task.num_source_classes:
            raise ConfigurationException(f"目标类别数 {k} 超出范围 [1, {base.task.num_source_classes}]")
        data["task"]["shared_classes"] = list(range(k))
    return ExperimentConfig.model_validate(data)


def _run_one(axis: str, value: str, config_json: str) -> SweepRow:
    """单次运行（可在子进程中执行），失败时记录错误而不抛出"""
    config = ExperimentConfig.model_validate_json(config_json)
    common = {"axis": axis, "value": value, "variant": config.variant.value, "seed": config.seed}
    try:
        result = TrainerService().train(config)
    except Exception as e:
        logger.error(f"套件运行失败 {axis}={value} seed={config.seed}: {e}")
        return SweepRow(**common, status=RunStatusEnum.FAILED, error=str(e), output_dir=str(config.output_dir))
    return SweepRow(
        **common,
        final_accuracy=result.final_accuracy,
        mean_reward=float(np.mean(result.episode_rewards)),
        output_dir=str(result.output_dir),
    )


class SuiteService:
    """实验套件服务类"""

    def __init__(self, sweep: CsvTableDAO | None = None):
        self.sweep = sweep or sweep_dao()

    @system_log(LogConfig(operation="实验套件", log_args=False))
    def run_suite(
        self,
        base: ExperimentConfig,
        axis: SweepAxisEnum | str,
        values: Sequence[Any],
        seeds: Sequence[int] | None = None,
        workers: int | None = None,
        output_dir: str | os.PathLike | None = None,
    ) -> list[SweepRow]:
        """对每个取值（及每个种子）训练一次，写出 sweep.csv

        Args:
            base: 基础配置
            axis: 扫描维度
            values: 维度取值
            seeds: 每个取值重复的种子，为空时使用 base.seed；axis 为 seed 时忽略
            workers: 并行进程数，为空时使用 settings.SUITE_WORKERS
            output_dir: 套件输出目录，每次运行写入独立子目录

        Returns:
            按 (取值, 种子) 顺序排列的结果行
        """
        axis = SweepAxisEnum(axis)
        if not values:
            raise ConfigurationException("扫描取值不能为空")
        root = Path(output_dir) if output_dir is not None else Path(settings.OUTPUT_ROOT) / f"sweep-{axis.value}"
        run_seeds = [base.seed] if axis is SweepAxisEnum.SEED or not seeds else list(seeds)

        jobs = []
        for value in values:
            label = _axis_label(axis, value)
            for seed in run_seeds:
                run_dir = root / f"{axis.value}={label}"
                if axis is not SweepAxisEnum.SEED:
                    run_dir = run_dir / f"seed{seed}"
                config = sweep_config(base, axis, value, seed, run_dir)
                jobs.append((axis.value, label, config.model_dump_json()))

        workers = settings.SUITE_WORKERS if workers is None else workers
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_run_one, *zip(*jobs, strict=True)))
        else:
            rows = [_run_one(*job) for job in jobs]

        root.mkdir(parents=True, exist_ok=True)
        self.sweep.save(rows, root / str(self.sweep.filename))
        failed = sum(row.status == RunStatusEnum.FAILED.value for row in rows)
        logger.info(f"实验套件完成: {len(rows)} 次运行, 失败 {failed} 次, 结果写入 {root}")
        return rows


def median_by_value(rows: Sequence[SweepRow]) -> dict[str, float]:
    """按扫描取值汇总成功运行的最终准确率中位数"""
    grouped: dict[str, list[float]] = defaultdict(list)
    for row in rows:
        if row.final_accuracy is not None:
            grouped[row.value].append(row.final_accuracy)
    return {value: float(np.median(accuracies)) for value, accuracies in grouped.items()}


def run_suite(
    base: ExperimentConfig,
    axis: SweepAxisEnum | str,
    values: Sequence[Any],
    seeds: Sequence[int] | None = None,
    workers: int | None = None,
    output_dir: str | os.PathLike | None = None,
) -> list[SweepRow]:
    return SuiteService().run_suite(base, axis, values, seeds=seeds, workers=workers, output_dir=output_dir)
