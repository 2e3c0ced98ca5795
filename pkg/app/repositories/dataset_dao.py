"""
@Author: li
@FileName: dataset_dao.py
@DateTime: 2025-07-10
@Docs: 数据集文本文件的读写与任务目录约定
"""

import os
from pathlib import Path
from typing import IO

import numpy as np

from app.core.exceptions import DatasetParseException
from app.data.dataset import Dataset
from app.engine import DTYPE
from app.models.data_enum import DomainEnum
from app.utils.logger import log_function_calls

from .base_dao import BaseDAO

MAGIC = "# rtnet-dataset"
FORMAT_VERSION = 1
SEPARATOR = "---"
HEADER_KEYS = ("version", "domain", "count", "input_dim", "num_classes")

SOURCE_FILE = "source.txt"
TARGET_TRAIN_FILE = "target_train.txt"
TARGET_TEST_FILE = "target_test.txt"


class DatasetDAO(BaseDAO[Dataset]):
    """数据集文本格式

    首行魔数，随后为 key = value 头部与 --- 分隔行，每个样本一行 "label x_1 … x_d"。
    浮点数以最短往返表示写出，重新读取逐位一致。
    """

    def dump(self, dataset: Dataset, handle: IO[str]) -> None:
        handle.write(f"{MAGIC}\n")
        handle.write(f"version = {FORMAT_VERSION}\n")
        handle.write(f"domain = {dataset.domain.value}\n")
        handle.write(f"count = {dataset.size}\n")
        handle.write(f"input_dim = {dataset.input_dim}\n")
        handle.write(f"num_classes = {dataset.num_classes}\n")
        handle.write(f"{SEPARATOR}\n")
        for label, row in zip(dataset.labels, dataset.inputs, strict=True):
            values = " ".join(repr(float(v)) for v in row)
            handle.write(f"{int(label)} {values}\n" if values else f"{int(label)}\n")

    def parse(self, handle: IO[str], path: Path) -> Dataset:
        where = str(path)
        lines = handle.read().splitlines()
        if not lines or lines[0].strip() != MAGIC:
            raise DatasetParseException(f"缺少文件头 {MAGIC!r}", line=1, path=where)

        header: dict[str, str] = {}
        line_no = 1
        body_start = None
        for line_no, line in enumerate(lines[1:], start=2):
            text = line.strip()
            if text == SEPARATOR:
                body_start = line_no
                break
            if not text:
                continue
            key, sep, value = text.partition("=")
            if not sep:
                raise DatasetParseException(f"头部行格式应为 key = value: {text!r}", line=line_no, path=where)
            header[key.strip()] = value.strip()
        if body_start is None:
            raise DatasetParseException(f"缺少分隔行 {SEPARATOR!r}", line=line_no + 1, path=where)

        missing = [key for key in HEADER_KEYS if key not in header]
        if missing:
            raise DatasetParseException(f"头部缺少字段 {missing}", line=body_start, path=where)
        try:
            version = int(header["version"])
            domain = DomainEnum(header["domain"])
            count = int(header["count"])
            input_dim = int(header["input_dim"])
            num_classes = int(header["num_classes"])
        except ValueError as e:
            raise DatasetParseException(f"头部字段非法: {e}", line=body_start, path=where) from e
        if version != FORMAT_VERSION:
            raise DatasetParseException(f"不支持的数据集版本 {version}", line=body_start, path=where)
        if count < 0 or input_dim < 0 or num_classes < 1:
            raise DatasetParseException("头部中的数量字段非法", line=body_start, path=where)

        rows = [(index, line) for index, line in enumerate(lines[body_start:], start=body_start + 1) if line.strip()]
        if len(rows) != count:
            # 截断文件定位到最后一行之后
            raise DatasetParseException(
                f"样本行数 {len(rows)} 与头部 count={count} 不一致",
                line=len(lines) + 1 if len(rows) < count else rows[count][0],
                path=where,
            )

        inputs = np.empty((count, input_dim), dtype=DTYPE)
        labels = np.empty(count, dtype=np.int64)
        for row, (line_no, line) in enumerate(rows):
            fields = line.split()
            if len(fields) != input_dim + 1:
                raise DatasetParseException(
                    f"应有 {input_dim + 1} 列，实际 {len(fields)} 列", line=line_no, path=where
                )
            try:
                labels[row] = int(fields[0])
                inputs[row] = [float(v) for v in fields[1:]]
            except ValueError as e:
                raise DatasetParseException(f"数值解析失败: {e}", line=line_no, path=where) from e
            if not 0 <= labels[row] < num_classes:
                raise DatasetParseException(f"标签 {labels[row]} 超出范围 [0, {num_classes})", line=line_no, path=where)

        return Dataset(inputs, labels, domain, num_classes)


def save_dataset(dataset: Dataset, path: str | os.PathLike) -> Path:
    return DatasetDAO().save(dataset, path)


def load_dataset(path: str | os.PathLike) -> Dataset:
    return DatasetDAO().load(path)


def save_task(task_dir: str | os.PathLike, source: Dataset, target_train: Dataset, target_test: Dataset) -> Path:
    """按目录约定写出 source.txt / target_train.txt / target_test.txt"""
    task_dir = Path(task_dir)
    dao = DatasetDAO()
    dao.save(source, task_dir / SOURCE_FILE)
    dao.save(target_train, task_dir / TARGET_TRAIN_FILE)
    dao.save(target_test, task_dir / TARGET_TEST_FILE)
    return task_dir


@log_function_calls()
def load_task(task_dir: str | os.PathLike) -> tuple[Dataset, Dataset, Dataset]:
    """读取任务目录，返回 (源域, 目标训练, 目标测试)"""
    task_dir = Path(task_dir)
    dao = DatasetDAO()
    return (
        dao.load(task_dir / SOURCE_FILE),
        dao.load(task_dir / TARGET_TRAIN_FILE),
        dao.load(task_dir / TARGET_TEST_FILE),
    )
