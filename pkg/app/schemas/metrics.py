"""
@Author: li
@FileName: metrics.py
@DateTime: 2025-07-10
@Docs: 输出表格行模型（训练指标、保留概率、套件对比）
"""

from typing import ClassVar

from pydantic import BaseModel, ConfigDict, Field

from app.models.data_enum import RowTypeEnum, RunStatusEnum


class CsvRow(BaseModel):
    """CSV 行基类：COLUMNS 决定列顺序，字段名与列名通过别名对应"""

    model_config = ConfigDict(populate_by_name=True, use_enum_values=True)

    COLUMNS: ClassVar[tuple[str, ...]] = ()

    def as_record(self) -> dict[str, object]:
        data = self.model_dump(by_alias=True)
        return {column: data.get(column) for column in self.COLUMNS}


class MetricsRow(CsvRow):
    """metrics.csv 行：每步一行，每回合一行汇总"""

    COLUMNS: ClassVar[tuple[str, ...]] = (
        "row_type",
        "episode",
        "batch",
        "epsilon",
        "n_selected",
        "reward",
        "return",
        "loss_source",
        "loss_entropy",
        "loss_coral",
        "mean_value",
        "train_error",
        "test_accuracy",
        "wall_clock",
    )

    row_type: RowTypeEnum
    episode: int = Field(ge=1)
    batch: int | None = Field(default=None, ge=1)
    epsilon: float | None = None
    n_selected: int | None = None
    reward: float | None = None
    discounted_return: float | None = Field(default=None, alias="return")
    loss_source: float | None = None
    loss_entropy: float | None = None
    loss_coral: float | None = None
    mean_value: float | None = None
    train_error: float | None = None
    test_accuracy: float | None = None
    wall_clock: float | None = None


class RetentionRow(CsvRow):
    """retention.csv 行：每个源类别的平均保留概率"""

    COLUMNS: ClassVar[tuple[str, ...]] = ("class_id", "shared", "count", "keep_probability")

    class_id: int = Field(ge=0)
    shared: bool
    count: int = Field(ge=0)
    keep_probability: float | None = Field(default=None, ge=0)


class SweepRow(CsvRow):
    """sweep.csv 行：单次运行的最终结果"""

    COLUMNS: ClassVar[tuple[str, ...]] = (
        "axis",
        "value",
        "variant",
        "seed",
        "final_accuracy",
        "mean_reward",
        "status",
        "error",
        "output_dir",
    )

    axis: str
    value: str
    variant: str
    seed: int
    final_accuracy: float | None = None
    mean_reward: float | None = None
    status: RunStatusEnum = RunStatusEnum.SUCCESS
    error: str | None = None
    output_dir: str | None = None
