"""
@Author: li
@FileName: metrics_dao.py
@DateTime: 2025-07-10
@Docs: CSV 表格读写（训练指标、保留概率、套件对比、特征导出）
"""

import csv
import os
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import IO, Any

from app.core.exceptions import ConfigurationException
from app.schemas.metrics import CsvRow, MetricsRow, RetentionRow, SweepRow

from .base_dao import BaseDAO

METRICS_FILE = "metrics.csv"
RETENTION_FILE = "retention.csv"
SWEEP_FILE = "sweep.csv"
FEATURES_FILE = "features.csv"

TableRow = CsvRow | Mapping[str, Any]


def format_cell(value: Any) -> str:
    """浮点数保留 6 位有效数字，空值写为空串"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".6g")
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def _record(row: TableRow) -> Mapping[str, Any]:
    return row.as_record() if isinstance(row, CsvRow) else row


class CsvStreamWriter:
    """逐行追加写出并立即刷新，训练过程中使用"""

    def __init__(self, path: Path, columns: Sequence[str]):
        self.path = path
        self.columns = tuple(columns)
        self._handle: IO[str] | None = None
        self._writer: csv.DictWriter | None = None
        self.rows_written = 0

    def __enter__(self) -> "CsvStreamWriter":
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._handle = open(self.path, "w", encoding="utf-8", newline="")
        self._writer = csv.DictWriter(self._handle, fieldnames=self.columns, lineterminator="\n")
        self._writer.writeheader()
        return self

    def write(self, rows: Iterable[TableRow]) -> None:
        if self._writer is None or self._handle is None:
            raise ConfigurationException(f"{self.path} 尚未打开")
        for row in rows:
            record = _record(row)
            self._writer.writerow({column: format_cell(record.get(column)) for column in self.columns})
            self.rows_written += 1
        self._handle.flush()

    def __exit__(self, exc_type, exc, tb) -> None:
        if self._handle is not None:
            self._handle.close()
        self._handle = None
        self._writer = None


class CsvTableDAO(BaseDAO[list[TableRow]]):
    """固定列顺序的 CSV 表格"""

    def __init__(self, columns: Sequence[str], filename: str | None = None):
        self.columns = tuple(columns)
        self.filename = filename

    def dump(self, rows: list[TableRow], handle: IO[str]) -> None:
        writer = csv.DictWriter(handle, fieldnames=self.columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            record = _record(row)
            writer.writerow({column: format_cell(record.get(column)) for column in self.columns})

    def parse(self, handle: IO[str], path: Path) -> list[dict[str, str]]:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != self.columns:
            raise ConfigurationException(
                f"{path} 表头与期望列不一致", detail={"expected": list(self.columns), "actual": reader.fieldnames}
            )
        return list(reader)

    def open_writer(self, path: str | os.PathLike) -> CsvStreamWriter:
        return CsvStreamWriter(self.resolve(path), self.columns)


def metrics_dao() -> CsvTableDAO:
    """获取 metrics.csv 存取实例"""
    return CsvTableDAO(MetricsRow.COLUMNS, METRICS_FILE)


def retention_dao() -> CsvTableDAO:
    """获取 retention.csv 存取实例"""
    return CsvTableDAO(RetentionRow.COLUMNS, RETENTION_FILE)


def sweep_dao() -> CsvTableDAO:
    """获取 sweep.csv 存取实例"""
    return CsvTableDAO(SweepRow.COLUMNS, SWEEP_FILE)


def features_dao(feature_dim: int) -> CsvTableDAO:
    """获取特征导出表存取实例，列为 domain, label, f_0 … f_{d-1}"""
    return CsvTableDAO(("domain", "label", *(f"f_{i}" for i in range(feature_dim))), FEATURES_FILE)
