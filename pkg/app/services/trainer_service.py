"""
@Author: li
@FileName: trainer_service.py
@DateTime: 2025-07-11
@Docs: 训练服务：域自适应模型与强化数据选择器的交替优化
"""

import time
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from app.core.config import settings
from app.core.exceptions import NumericalException, RTNetException, TrainingAbortedException
from app.data import BatchPair, Dataset, UnlabeledDataset, batches, gen_pda_task
from app.domain_adaptation import predict, update_da_model
from app.generators import compute_reward, pretrain_generators, update_generators
from app.models.bundle import RTNetModel
from app.models.data_enum import RowTypeEnum, TrainingEventEnum
from app.repositories import CheckpointDAO, ConfigDAO, CsvStreamWriter, CsvTableDAO, load_task, metrics_dao
from app.repositories.metrics_dao import METRICS_FILE
from app.schemas.config import ExperimentConfig
from app.schemas.metrics import MetricsRow
from app.selector import (
    EpisodeHistory,
    StepRecord,
    build_states,
    discounted_returns,
    epsilon_schedule,
    policy_forward,
    sample_actions,
    select_batch,
    target_label_distribution,
    update_policy,
    update_value,
    value_forward,
)
from app.services.evaluation_service import evaluate
from app.utils import LogConfig, system_log
from app.utils.logger import logger, run_log

CONFIG_FILE = "config.conf"


@dataclass(frozen=True)
class TrainingEvent:
    """训练插桩事件"""

    event: TrainingEventEnum
    episode: int
    batch: int | None = None
    payload: dict[str, Any] = field(default_factory=dict)


EventHook = Callable[[TrainingEvent], None]


@dataclass
class TaskData:
    """一次训练使用的数据；目标训练集的标签不交给训练循环"""

    source: Dataset
    target_train: Dataset
    target_test: Dataset


@dataclass
class TrainingResult:
    """训练结果"""

    model: RTNetModel
    histories: list[EpisodeHistory]
    accuracies: list[float]
    episode_rewards: list[float]
    output_dir: Path
    metrics_path: Path
    checkpoint_path: Path | None = None

    @property
    def final_accuracy(self) -> float:
        return self.accuracies[-1]


@dataclass
class _RandomStreams:
    """按组件拆分的随机流，变体之间互不干扰"""

    model: np.random.Generator
    generators: np.random.Generator
    selector: np.random.Generator
    pretrain: np.random.Generator
    actions: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "_RandomStreams":
        return cls(*(np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(5)))


def load_task_data(config: ExperimentConfig) -> TaskData:
    """读取任务目录，未指定时按 task 定义生成"""
    if config.task_dir is not None:
        source, target_train, target_test = load_task(config.task_dir)
    else:
        source, target_train, target_test = gen_pda_task(config.task)
    return TaskData(source, target_train, target_test)


def default_output_dir(config: ExperimentConfig) -> Path:
    return Path(settings.OUTPUT_ROOT) / f"{config.variant.value}-seed{config.seed}"


def _mean(values: list[float]) -> float | None:
    return float(np.mean(values)) if values else None


class TrainerService:
    """训练服务类"""

    def __init__(
        self,
        metrics: CsvTableDAO | None = None,
        checkpoints: CheckpointDAO | None = None,
        configs: ConfigDAO | None = None,
    ):
        self.metrics = metrics or metrics_dao()
        self.checkpoints = checkpoints or CheckpointDAO()
        self.configs = configs or ConfigDAO()

    @system_log(LogConfig(operation="训练", log_result=False))
    def train(
        self,
        config: ExperimentConfig,
        on_event: EventHook | None = None,
        data: TaskData | None = None,
    ) -> TrainingResult:
        """执行完整训练

        Args:
            config: 实验配置
            on_event: 插桩回调，按发生顺序接收每个事件
            data: 预先加载的数据，为空时按配置读取或生成

        Returns:
            训练结果（模型、每回合历史、每回合准确率、输出路径）

        Raises:
            TrainingAbortedException: 任一组件出错，携带出错的回合与批次
        """
        data = data or load_task_data(config)
        output_dir = Path(config.output_dir) if config.output_dir is not None else default_output_dir(config)
        output_dir.mkdir(parents=True, exist_ok=True)
        self.configs.save(config, output_dir / CONFIG_FILE)
        with run_log(output_dir):
            try:
                return self._run(config, data, output_dir, on_event)
            except TrainingAbortedException as e:
                logger.error(e.message)
                raise

    def _run(
        self, config: ExperimentConfig, data: TaskData, output_dir: Path, on_event: EventHook | None
    ) -> TrainingResult:
        logger.info(f"开始训练: 变体={config.variant.value}, 种子={config.seed}, 回合数={config.episodes}")
        streams = _RandomStreams.from_seed(config.seed)
        model = RTNetModel.build(
            data.source.input_dim,
            data.source.num_classes,
            model_rng=streams.model,
            generator_rng=streams.generators,
            selector_rng=streams.selector,
            feature_dim=config.feature_dim,
            hidden_dim=config.hidden_dim,
            selector_hidden_dim=config.rl.hidden_dim,
            variant=config.variant,
        )
        target_train = data.target_train.as_unlabeled()
        pretrain_generators(
            model.generators,
            model.da.feature_extractor,
            data.source.inputs,
            target_train.inputs,
            steps=config.pretrain_steps,
            batch_size=config.batch_size,
            lr=config.effective_generator_lr,
            rng=streams.pretrain,
        )

        run = _TrainingRun(config, model, data, target_train, streams.actions, on_event)
        metrics_path = output_dir / METRICS_FILE
        with self.metrics.open_writer(metrics_path) as writer:
            for episode in range(1, config.episodes + 1):
                run.run_episode(episode, writer)

        checkpoint_path = None
        model.metadata = {
            "final_accuracy": run.accuracies[-1],
            "episodes": config.episodes,
            "seed": config.seed,
        }
        if config.save_checkpoint:
            checkpoint_path = self.checkpoints.save(model, output_dir / str(self.checkpoints.filename))

        logger.info(f"训练完成: 变体={config.variant.value}, 最终目标测试准确率={run.accuracies[-1]:.4f}")
        return TrainingResult(
            model=model,
            histories=run.histories,
            accuracies=run.accuracies,
            episode_rewards=run.episode_rewards,
            output_dir=output_dir,
            metrics_path=metrics_path,
            checkpoint_path=checkpoint_path,
        )


class _TrainingRun:
    """单次训练的回合循环状态"""

    def __init__(
        self,
        config: ExperimentConfig,
        model: RTNetModel,
        data: TaskData,
        target_train: UnlabeledDataset,
        action_rng: np.random.Generator,
        on_event: EventHook | None,
    ):
        self.config = config
        self.model = model
        self.source = data.source
        self.target_train = target_train
        self.target_test = data.target_test
        self.action_rng = action_rng
        self.on_event = on_event
        self.da_hp = config.effective_da()
        self.histories: list[EpisodeHistory] = []
        self.accuracies: list[float] = []
        self.episode_rewards: list[float] = []
        self.started = time.perf_counter()

    def emit(self, event: TrainingEventEnum, episode: int, batch: int | None = None, **payload: Any) -> None:
        if self.on_event is not None:
            self.on_event(TrainingEvent(event, episode, batch, payload))

    def wall_clock(self) -> float | None:
        return time.perf_counter() - self.started if self.config.record_wall_clock else None

    def run_episode(self, episode: int, writer: CsvStreamWriter) -> None:
        config = self.config
        rl = config.rl
        epsilon = epsilon_schedule(
            episode, config.episodes, rl.epsilon_start, rl.epsilon_end, rl.epsilon_decay_fraction
        )
        history = EpisodeHistory(episode)
        step_rows: list[MetricsRow] = []

        for pair in batches(self.source, self.target_train, config.batch_size, config.seed, episode):
            try:
                step_rows.append(self.run_step(episode, pair, epsilon, history))
            except RTNetException as e:
                raise TrainingAbortedException(episode, pair.batch_id, e) from e
            except (FloatingPointError, ArithmeticError) as e:
                raise TrainingAbortedException(episode, pair.batch_id, NumericalException(str(e))) from e

        try:
            accuracy, returns = self.finish_episode(episode, history)
        except RTNetException as e:
            raise TrainingAbortedException(episode, None, e) from e

        for row, batch_return in zip(step_rows, returns, strict=True):
            row.discounted_return = float(batch_return)
        rewards = history.rewards
        self.episode_rewards.append(float(np.mean(rewards)))
        summary = MetricsRow(
            row_type=RowTypeEnum.EPISODE,
            episode=episode,
            epsilon=epsilon,
            n_selected=None,
            reward=float(np.mean(rewards)),
            loss_source=_mean([row.loss_source for row in step_rows]),
            loss_entropy=_mean([row.loss_entropy for row in step_rows]),
            loss_coral=_mean([row.loss_coral for row in step_rows]),
            mean_value=_mean([row.mean_value for row in step_rows]),
            train_error=_mean([row.train_error for row in step_rows]),
            test_accuracy=accuracy,
            wall_clock=self.wall_clock(),
        )
        writer.write([*step_rows, summary])
        logger.info(
            f"回合 {episode}/{config.episodes}: ε={epsilon:.3f}, 平均奖励={summary.reward:.4f}, "
            f"目标测试准确率={accuracy:.4f}"
        )

    def run_step(self, episode: int, pair: BatchPair, epsilon: float, history: EpisodeHistory) -> MetricsRow:
        model = self.model
        batch = pair.batch_id

        # 状态：源特征、源标签与目标批次平均预测分布
        alpha = target_label_distribution(predict(model.da, pair.target_inputs))
        states = build_states(model.da.features(pair.source_inputs), pair.source_labels, alpha)
        self.emit(TrainingEventEnum.STATE, episode, batch, states=states)

        if self.config.variant.selector_active:
            actions = sample_actions(policy_forward(model.policy, states), epsilon, self.action_rng)
        else:
            actions = np.ones(states.shape[0], dtype=np.int64)
        selection = select_batch(pair.source_inputs, pair.source_labels, actions)
        if selection.fallback:
            logger.debug(f"回合 {episode} 批次 {batch}: 选中样本不足 2 个，使用完整批次")
        self.emit(TrainingEventEnum.ACTION, episode, batch, actions=selection.actions, fallback=selection.fallback)
        values = value_forward(model.value, states)

        objective = update_da_model(model.da, selection.inputs, selection.labels, pair.target_inputs, self.da_hp)
        self.emit(TrainingEventEnum.UPDATE_DA, episode, batch, total=objective.total)

        reward = compute_reward(model.generators.target_generator, model.da.feature_extractor, selection.inputs)
        self.emit(TrainingEventEnum.REWARD, episode, batch, reward=reward)

        update_generators(
            model.generators,
            model.da.feature_extractor,
            selection.inputs,
            pair.target_inputs,
            self.config.effective_generator_lr,
        )
        self.emit(TrainingEventEnum.UPDATE_GENERATORS, episode, batch)

        history.append(StepRecord(batch, states, selection.actions, reward, values))
        self.emit(TrainingEventEnum.RECORD, episode, batch)

        logger.debug(
            f"回合 {episode} 批次 {batch}: n'={selection.n_selected}, r={reward:.4f}, "
            f"L_s={objective.source_loss:.4f}, L_t={objective.entropy_loss:.4f}, L_c={objective.coral_loss:.4f}"
        )
        return MetricsRow(
            row_type=RowTypeEnum.STEP,
            episode=episode,
            batch=batch,
            epsilon=epsilon,
            n_selected=selection.n_selected,
            reward=reward,
            loss_source=objective.source_loss,
            loss_entropy=objective.entropy_loss,
            loss_coral=objective.coral_loss,
            mean_value=float(np.mean(values)),
            train_error=objective.source_error,
            wall_clock=self.wall_clock(),
        )

    def finish_episode(self, episode: int, history: EpisodeHistory) -> tuple[float, np.ndarray]:
        """数据循环结束后：折扣回报、策略与价值更新、目标测试集评估"""
        rl = self.config.rl
        returns = discounted_returns(history.rewards, rl.gamma)
        self.emit(TrainingEventEnum.RETURNS, episode, returns=returns)

        if self.config.variant.selector_active:
            update_policy(self.model.policy, history, returns, rl.effective_policy_lr)
            self.emit(TrainingEventEnum.UPDATE_POLICY, episode)
            update_value(self.model.value, history, returns, rl.effective_value_lr)
            self.emit(TrainingEventEnum.UPDATE_VALUE, episode)

        self.histories.append(history)
        accuracy = evaluate(self.model, self.target_test)
        self.accuracies.append(accuracy)
        self.emit(TrainingEventEnum.EVALUATE, episode, accuracy=accuracy)
        return accuracy, returns


def train(
    config: ExperimentConfig,
    on_event: EventHook | None = None,
    data: TaskData | None = None,
) -> TrainingResult:
    """训练便捷入口"""
    return TrainerService().train(config, on_event=on_event, data=data)
