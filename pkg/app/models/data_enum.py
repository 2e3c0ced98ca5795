"""
@Author: li
@FileName: data_enum.py
@DateTime: 2025-07-03
@Docs: 枚举类定义
"""

from enum import Enum, IntEnum


class ActivationEnum(str, Enum):
    """全连接层激活函数枚举"""

    RELU = "relu"
    SOFTMAX = "softmax"
    LINEAR = "linear"
    SIGMOID = "sigmoid"


class DomainEnum(str, Enum):
    """数据域枚举"""

    SOURCE = "source"
    TARGET = "target"


class VariantEnum(str, Enum):
    """训练变体枚举"""

    RTNET = "rtnet"  # 完整模型：域自适应 + 强化数据选择器
    CORAL = "coral"  # 关闭选择器，全批次 CORAL 对齐
    SOURCE_ONLY = "source_only"  # λ1=λ2=0，关闭选择器
    RTNET_NOSELECT = "rtnet_noselect"  # 选择器强制全部保留

    @property
    def selector_active(self) -> bool:
        """选择器是否参与动作决策与策略更新"""
        return self is VariantEnum.RTNET


class SelectorActionEnum(IntEnum):
    """选择器动作枚举"""

    DROP = 0
    KEEP = 1


class RowTypeEnum(str, Enum):
    """指标行类型枚举"""

    STEP = "step"
    EPISODE = "episode"


class SweepAxisEnum(str, Enum):
    """实验套件扫描维度枚举"""

    GAMMA = "gamma"
    TARGET_CLASSES = "target_classes"
    VARIANT = "variant"
    SEED = "seed"


class RunStatusEnum(str, Enum):
    """单次运行状态枚举"""

    SUCCESS = "success"
    FAILED = "failed"


class TrainingEventEnum(str, Enum):
    """训练过程事件枚举（用于插桩与顺序校验）"""

    STATE = "state"
    ACTION = "action"
    UPDATE_DA = "update_da"
    REWARD = "reward"
    UPDATE_GENERATORS = "update_generators"
    RECORD = "record"
    RETURNS = "returns"
    UPDATE_POLICY = "update_policy"
    UPDATE_VALUE = "update_value"
    EVALUATE = "evaluate"
