"""
@Author: li
@FileName: main.py
@DateTime: 2025-07-12
@Docs: 命令行入口：gen-task / train / eval / report / sweep
"""

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from app.core.config import settings
from app.core.exceptions import EXIT_OK, ConfigurationException, handle_cli_exception
from app.data import gen_pda_task
from app.models.data_enum import SweepAxisEnum, VariantEnum
from app.repositories import CheckpointDAO, ConfigDAO, build_config, save_task
from app.schemas.config import ExperimentConfig
from app.services import (
    CONFIG_FILE,
    EvaluationService,
    evaluate,
    load_task_data,
    run_suite,
    train,
)
from app.utils.logger import logger, setup_logger


class _Parser(argparse.ArgumentParser):
    """参数错误按配置错误处理（退出码 1）"""

    def error(self, message: str):
        raise ConfigurationException(f"命令行参数错误: {message}")


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    """命令行参数覆盖配置文件中的同名键"""
    mapping = {
        "seed": "seed",
        "variant": "variant",
        "episodes": "episodes",
        "gamma": "rl.gamma",
        "out": "output_dir",
        "task": "task_dir",
    }
    return {key: getattr(args, attr) for attr, key in mapping.items() if getattr(args, attr, None) is not None}


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """读取 --config 文件（可选）并应用命令行覆盖"""
    overrides = _overrides(args)
    if args.config is not None:
        return ConfigDAO(overrides).load(args.config)
    return build_config({}, overrides)


def _run_dir_config(run_dir: Path, args: argparse.Namespace) -> ExperimentConfig:
    """训练输出目录中保存的配置；--task 可改用其他任务目录"""
    config = ConfigDAO().load(run_dir / CONFIG_FILE)
    if args.task is not None:
        config = config.model_copy(update={"task_dir": Path(args.task)})
    return config


def cmd_gen_task(args: argparse.Namespace) -> int:
    config = load_config(argparse.Namespace(**{**vars(args), "out": None, "task": None}))
    task = config.task if args.seed is None else config.task.model_copy(update={"seed": args.seed})
    out = Path(args.out) if args.out else Path(settings.OUTPUT_ROOT) / f"task-seed{task.seed}"
    source, target_train, target_test = gen_pda_task(task)
    save_task(out, source, target_train, target_test)
    print(f"task written to {out} (source={source.size}, target_train={target_train.size}, target_test={target_test.size})")
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    config = load_config(args)
    result = train(config)
    print(f"final_accuracy={result.final_accuracy:.6g} output_dir={result.output_dir}")
    return EXIT_OK


def _load_run(args: argparse.Namespace):
    run_dir = Path(args.out)
    config = _run_dir_config(run_dir, args)
    checkpoint = Path(args.checkpoint) if args.checkpoint else run_dir
    model = CheckpointDAO().load(checkpoint)
    return run_dir, config, model, load_task_data(config)


def cmd_eval(args: argparse.Namespace) -> int:
    _, _, model, data = _load_run(args)
    accuracy = evaluate(model, data.target_test)
    print(f"accuracy={accuracy:.6g}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    run_dir, _, model, data = _load_run(args)
    service = EvaluationService()
    path = service.report(model, data.source, data.target_train, run_dir)
    print(f"retention written to {path}")
    if args.features:
        features = service.export_features(model, [data.source, data.target_train, data.target_test], run_dir)
        print(f"features written to {features}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    base = load_config(argparse.Namespace(**{**vars(args), "out": None}))
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    seeds = [int(s) for s in args.seeds.split(",") if s.strip()] if args.seeds else None
    rows = run_suite(base, args.axis, values, seeds=seeds, workers=args.workers, output_dir=args.out)
    for row in rows:
        print(f"{row.axis}={row.value} seed={row.seed} status={row.status} final_accuracy={row.final_accuracy}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=settings.APP_NAME, description=settings.APP_DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    parser.add_argument("--log-level", default=None, help="控制台日志级别，默认取 LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", type=Path, default=None, help="key = value 配置文件")
        sub.add_argument("--seed", type=int, default=None)
        sub.add_argument("--out", type=str, default=None, help="输出目录")

    gen = subparsers.add_parser("gen-task", help="生成合成任务并写出数据集文件")
    common(gen)
    gen.set_defaults(handler=cmd_gen_task)

    train_parser = subparsers.add_parser("train", help="训练")
    common(train_parser)
    train_parser.add_argument("--variant", choices=[v.value for v in VariantEnum], default=None)
    train_parser.add_argument("--episodes", type=int, default=None)
    train_parser.add_argument("--gamma", type=float, default=None)
    train_parser.add_argument("--task", type=str, default=None, help="已生成的任务目录")
    train_parser.set_defaults(handler=cmd_train)

    for name, handler, help_text in (
        ("eval", cmd_eval, "在目标测试集上评估检查点"),
        ("report", cmd_report, "写出按类保留概率报告"),
    ):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--out", type=str, required=True, help="训练输出目录")
        sub.add_argument("--checkpoint", type=str, default=None, help="检查点路径，默认取输出目录中的检查点")
        sub.add_argument("--task", type=str, default=None, help="改用其他任务目录")
        if name == "report":
            sub.add_argument("--features", action="store_true", help="同时导出适配层特征")
        sub.set_defaults(handler=handler)

    sweep = subparsers.add_parser("sweep", help="沿单一维度扫描并汇总")
    common(sweep)
    sweep.add_argument("--axis", choices=[a.value for a in SweepAxisEnum], required=True)
    sweep.add_argument("--values", type=str, required=True, help="逗号分隔的取值")
    sweep.add_argument("--seeds", type=str, default=None, help="逗号分隔的种子")
    sweep.add_argument("--variant", choices=[v.value for v in VariantEnum], default=None)
    sweep.add_argument("--episodes", type=int, default=None)
    sweep.add_argument("--gamma", type=float, default=None)
    sweep.add_argument("--task", type=str, default=None)
    sweep.add_argument("--workers", type=int, default=None, help="并行进程数，默认取 SUITE_WORKERS")
    sweep.set_defaults(handler=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """命令行主函数，返回进程退出码"""
    try:
        args = build_parser().parse_args(argv)
        if args.log_level:
            setup_logger(args.log_level)
        return args.handler(args)
    except SystemExit as e:
        # --help / --version
        return int(e.code or 0)
    except Exception as e:
        return handle_cli_exception(e)
    except KeyboardInterrupt:
        logger.warning("用户中断")
        return 130


if __name__ == "__main__":
    sys.exit(main())
