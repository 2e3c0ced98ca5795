"""
@Author: li
@FileName: base_dao.py
@DateTime: 2025-07-10
@Docs: 文件存取层基类，提供通用的保存、读取与存在性检查
"""

import os
from pathlib import Path
from typing import IO, Any, Generic, TypeVar

from app.core.exceptions import ConfigurationException, RTNetException
from app.utils.logger import logger

ModelType = TypeVar("ModelType")


class BaseDAO(Generic[ModelType]):
    """文件存取层基类

    子类实现 dump/parse，基类负责路径处理与原子写入（先写临时文件再替换）。
    所有具体的 DAO 类都应该继承此基类。
    """

    binary: bool = False
    filename: str | None = None

    def resolve(self, path: str | os.PathLike) -> Path:
        """目录路径补全为 <目录>/<默认文件名>"""
        path = Path(path)
        if self.filename and path.is_dir():
            return path / self.filename
        return path

    def dump(self, obj: ModelType, handle: IO[Any]) -> None:
        raise NotImplementedError

    def not_found(self, path: Path) -> RTNetException:
        return ConfigurationException(f"文件不存在: {path}")

    def parse(self, handle: IO[Any], path: Path) -> ModelType:
        raise NotImplementedError

    def save(self, obj: ModelType, path: str | os.PathLike) -> Path:
        """保存对象

        Args:
            obj: 要保存的对象
            path: 文件路径或目录

        Returns:
            实际写入的文件路径
        """
        target = self.resolve(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        tmp = target.with_name(target.name + ".tmp")
        mode = "wb" if self.binary else "w"
        encoding = None if self.binary else "utf-8"
        with open(tmp, mode, encoding=encoding, newline=None if self.binary else "") as handle:
            self.dump(obj, handle)
        os.replace(tmp, target)
        logger.debug(f"{type(self).__name__} 已写入 {target}")
        return target

    def load(self, path: str | os.PathLike) -> ModelType:
        """读取对象，解析失败时不返回部分结果"""
        target = self.resolve(path)
        if not target.is_file():
            raise self.not_found(target)
        mode = "rb" if self.binary else "r"
        encoding = None if self.binary else "utf-8"
        with open(target, mode, encoding=encoding) as handle:
            return self.parse(handle, target)

    def exists(self, path: str | os.PathLike) -> bool:
        return self.resolve(path).is_file()
