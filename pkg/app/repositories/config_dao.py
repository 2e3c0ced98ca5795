"""
@Author: li
@FileName: config_dao.py
@DateTime: 2025-07-10
@Docs: 实验配置文件（key = value 文本）的读写
"""

from pathlib import Path
from typing import IO, Any

from pydantic import BaseModel, ValidationError

from app.core.exceptions import ConfigurationException
from app.schemas.config import ExperimentConfig

from .base_dao import BaseDAO

# 点号键对应的嵌套配置段
SECTIONS = ("task", "da", "rl")


def known_keys() -> set[str]:
    """全部合法键：顶层字段与 <段>.<字段>"""
    keys = {name for name in ExperimentConfig.model_fields if name not in SECTIONS}
    for section in SECTIONS:
        annotation = ExperimentConfig.model_fields[section].annotation
        keys.update(f"{section}.{name}" for name in annotation.model_fields)
    return keys


def parse_lines(lines: list[str], source: str = "<config>") -> dict[str, tuple[str, int]]:
    """解析 key = value 行，返回 键 -> (原始值, 行号)

    Raises:
        ConfigurationException: 行格式错误、键未知或重复
    """
    allowed = known_keys()
    entries: dict[str, tuple[str, int]] = {}
    for line_no, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        key, sep, value = text.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigurationException(f"{source}:{line_no}: 行格式应为 key = value", detail={"line": raw.rstrip()})
        if key not in allowed:
            raise ConfigurationException(f"{source}:{line_no}: 未知配置项 {key!r}", detail={"key": key, "line": line_no})
        if key in entries:
            raise ConfigurationException(f"{source}:{line_no}: 配置项 {key!r} 重复")
        entries[key] = (value.strip(), line_no)
    return entries


def to_nested(values: dict[str, Any]) -> dict[str, Any]:
    """点号键展开为嵌套字典，空字符串视为未设置"""
    nested: dict[str, Any] = {}
    for key, value in values.items():
        if value == "" or value is None:
            continue
        section, dot, name = key.partition(".")
        if dot:
            nested.setdefault(section, {})[name] = value
        else:
            nested[key] = value
    return nested


def build_config(values: dict[str, Any], overrides: dict[str, Any] | None = None) -> ExperimentConfig:
    """合并文件键与命令行覆盖并校验

    pydantic 校验错误原样抛出，由命令行异常处理器映射为配置错误。
    """
    merged = dict(values)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    return ExperimentConfig.model_validate(to_nested(merged))


def _flatten(model: BaseModel, prefix: str = "") -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for name, value in model:
        if isinstance(value, BaseModel):
            flat.update(_flatten(value, f"{prefix}{name}."))
        else:
            flat[f"{prefix}{name}"] = value
    return flat


def _format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return ",".join(str(v) for v in value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


class ConfigDAO(BaseDAO[ExperimentConfig]):
    """key = value 配置文件；# 之后为注释，点号键寻址嵌套段"""

    def __init__(self, overrides: dict[str, Any] | None = None):
        self.overrides = overrides or {}

    def dump(self, config: ExperimentConfig, handle: IO[str]) -> None:
        for key, value in _flatten(config).items():
            handle.write(f"{key} = {_format_value(value)}\n")

    def parse(self, handle: IO[str], path: Path) -> ExperimentConfig:
        entries = parse_lines(handle.read().splitlines(), source=str(path))
        values = {key: value for key, (value, _) in entries.items()}
        try:
            return build_config(values, self.overrides)
        except ValidationError as e:
            # 定位到出错键所在行
            for error in e.errors():
                key = ".".join(str(part) for part in error.get("loc", ()))
                if key in entries:
                    raise ConfigurationException(
                        f"{path}:{entries[key][1]}: 配置项 {key!r} 非法: {error.get('msg', '')}",
                        detail={"key": key, "line": entries[key][1]},
                    ) from e
            raise
