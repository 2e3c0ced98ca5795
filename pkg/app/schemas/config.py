"""
@Author: li
@FileName: config.py
@DateTime: 2025-07-04
@Docs: 实验配置相关校验模型（任务定义、超参数、实验配置）
"""

from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.data_enum import VariantEnum


def _split_list(v: object) -> object:
    """接受逗号分隔字符串形式的列表"""
    if isinstance(v, str):
        text = v.strip().strip("[]")
        if not text:
            return []
        return [item.strip() for item in text.split(",") if item.strip()]
    return v


class PdaTaskSpec(BaseModel):
    """合成部分域自适应任务定义"""

    model_config = ConfigDict(extra="forbid")

    num_source_classes: int = Field(default=6, ge=2, description="源域类别数 |C_s|")
    shared_classes: list[int] = Field(default_factory=lambda: [0, 1, 2], description="目标域类别 C_t ⊆ C_s")
    samples_per_class: int = Field(default=100, ge=1, description="源域每类样本数")
    target_samples_per_class: int | None = Field(default=None, ge=2, description="目标域每类样本数，为空时同源域")
    input_dim: int = Field(default=8, ge=2, description="输入维度")
    separation: float = Field(default=1.5, gt=0, description="相邻类中心距离（即最小两两距离）")
    center_phase_deg: float = Field(default=150.0, description="类中心圆周排布的起始角度（度）")
    noise_scale: float = Field(default=0.15, ge=0, description="类内高斯噪声标准差")
    rotation_deg: float = Field(default=15.0, description="目标域在前两维上的旋转角度（度）")
    translation: float = Field(default=0.25, description="目标域在每一维上的平移量")
    feature_scale: float = Field(default=1.0, gt=0, description="目标域特征缩放")
    seed: int = Field(default=0, ge=0, description="生成随机种子")

    @field_validator("shared_classes", mode="before")
    @classmethod
    def assemble_shared_classes(cls, v: object) -> object:
        """验证目标类别配置"""
        return _split_list(v)

    @model_validator(mode="after")
    def validate_shared_subset(self) -> "PdaTaskSpec":
        """目标类别必须是源类别的非空子集"""
        if not self.shared_classes:
            raise ValueError("目标类别集合不能为空")
        if len(set(self.shared_classes)) != len(self.shared_classes):
            raise ValueError("目标类别存在重复")
        invalid = [c for c in self.shared_classes if not 0 <= c < self.num_source_classes]
        if invalid:
            raise ValueError(f"目标类别 {invalid} 超出源类别范围 [0, {self.num_source_classes})")
        return self

    @property
    def target_per_class(self) -> int:
        return self.target_samples_per_class or self.samples_per_class


class DaHyperparams(BaseModel):
    """域自适应模型超参数"""

    model_config = ConfigDict(extra="forbid")

    lambda_entropy: float = Field(default=1.0, ge=0, description="熵最小化权重 λ1")
    lambda_coral: float = Field(default=7.0, ge=0, description="CORAL 权重 λ2")
    lr: float = Field(default=1e-4, ge=0, description="学习率 l")
    batch_size: int = Field(default=32, ge=2, description="批大小 n")


class RlHyperparams(BaseModel):
    """强化数据选择器超参数"""

    model_config = ConfigDict(extra="forbid")

    gamma: float = Field(default=0.8, ge=0, le=1, description="奖励折扣因子 γ")
    lr: float = Field(default=1e-4, ge=0, description="策略/价值网络共享学习率")
    policy_lr: float | None = Field(default=None, ge=0, description="策略网络学习率覆盖")
    value_lr: float | None = Field(default=None, ge=0, description="价值网络学习率覆盖")
    hidden_dim: int = Field(default=64, ge=1, description="策略/价值网络隐藏层宽度 h")
    epsilon_start: float = Field(default=1.0, ge=0, le=1)
    epsilon_end: float = Field(default=0.0, ge=0, le=1)
    epsilon_decay_fraction: float = Field(default=0.8, gt=0, le=1, description="ε 衰减到终值所用的回合比例")

    @property
    def effective_policy_lr(self) -> float:
        return self.lr if self.policy_lr is None else self.policy_lr

    @property
    def effective_value_lr(self) -> float:
        return self.lr if self.value_lr is None else self.value_lr


class ExperimentConfig(BaseModel):
    """单次训练实验配置"""

    model_config = ConfigDict(extra="forbid")

    task: PdaTaskSpec = Field(default_factory=PdaTaskSpec, description="合成任务定义")
    task_dir: Path | None = Field(default=None, description="已生成的任务目录，设置后优先于 task")
    da: DaHyperparams = Field(default_factory=DaHyperparams)
    rl: RlHyperparams = Field(default_factory=RlHyperparams)
    variant: VariantEnum = Field(default=VariantEnum.RTNET)
    episodes: int = Field(default=300, ge=1, description="回合数 L")
    pretrain_steps: int = Field(default=200, ge=0, description="生成器预训练步数")
    seed: int = Field(default=0, ge=0)
    feature_dim: int = Field(default=16, ge=1, description="适配层特征维度 d")
    hidden_dim: int = Field(default=32, ge=1, description="特征提取器与生成器隐藏层宽度")
    generator_lr: float | None = Field(default=None, ge=0, description="生成器学习率覆盖")
    output_dir: Path | None = Field(default=None)
    record_wall_clock: bool = Field(default=False, description="是否在 metrics.csv 中写入耗时（会破坏逐字节可复现）")
    save_checkpoint: bool = Field(default=True)

    @property
    def batch_size(self) -> int:
        return self.da.batch_size

    @property
    def effective_generator_lr(self) -> float:
        return self.da.lr if self.generator_lr is None else self.generator_lr

    def effective_da(self) -> DaHyperparams:
        """source_only 变体强制 λ1=λ2=0"""
        if self.variant is VariantEnum.SOURCE_ONLY:
            return self.da.model_copy(update={"lambda_entropy": 0.0, "lambda_coral": 0.0})
        return self.da

    @model_validator(mode="after")
    def validate_epsilon(self) -> "ExperimentConfig":
        if self.rl.epsilon_end > self.rl.epsilon_start:
            raise ValueError("epsilon_end 不能大于 epsilon_start")
        return self

