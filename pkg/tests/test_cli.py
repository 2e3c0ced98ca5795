"""
@Author: li
@FileName: test_cli.py
@DateTime: 2025-07-15
@Docs: 命令行测试：退出码与 gen-task → train → eval → report 流程
"""

import pytest

from app.cli import main
from app.core.exceptions import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_RUNTIME_ERROR
from app.repositories import (
    FEATURES_FILE,
    METRICS_FILE,
    RETENTION_FILE,
    SOURCE_FILE,
    SWEEP_FILE,
    ConfigDAO,
    checkpoint_name,
    load_task,
)


@pytest.fixture
def config_file(tiny_config, tmp_path):
    return ConfigDAO().save(tiny_config(episodes=2), tmp_path / "exp.conf")


def _value(output: str, key: str) -> float:
    for token in output.split():
        if token.startswith(f"{key}="):
            return float(token.split("=", 1)[1])
    raise AssertionError(f"{key} not found in {output!r}")


class TestExitCodes:
    def test_version(self, capsys):
        assert main(["--version"]) == EXIT_OK
        assert "rtnet" in capsys.readouterr().out

    def test_missing_command(self):
        assert main([]) == EXIT_CONFIG_ERROR

    def test_unknown_option(self):
        assert main(["train", "--bogus"]) == EXIT_CONFIG_ERROR

    def test_bad_config_key(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("episodes = 2\nnot_a_key = 1\n", encoding="utf-8")
        assert main(["train", "--config", str(path), "--out", str(tmp_path / "run")]) == EXIT_CONFIG_ERROR

    def test_invalid_override(self, config_file, tmp_path):
        assert main(["train", "--config", str(config_file), "--gamma", "1.5"]) == EXIT_CONFIG_ERROR

    def test_missing_checkpoint_is_runtime_error(self, tiny_config, tmp_path):
        run = tmp_path / "run"
        config = ConfigDAO().save(tiny_config(episodes=1, save_checkpoint=False), tmp_path / "exp.conf")
        assert main(["train", "--config", str(config), "--out", str(run)]) == EXIT_OK
        assert main(["eval", "--out", str(run)]) == EXIT_RUNTIME_ERROR

    def test_missing_run_dir(self, tmp_path):
        assert main(["eval", "--out", str(tmp_path / "nowhere")]) == EXIT_CONFIG_ERROR


class TestWorkflow:
    def test_gen_train_eval_report(self, config_file, tmp_path, capsys):
        task_dir = tmp_path / "task"
        run_dir = tmp_path / "run"

        assert main(["gen-task", "--config", str(config_file), "--out", str(task_dir)]) == EXIT_OK
        assert (task_dir / SOURCE_FILE).is_file()
        source, target_train, _ = load_task(task_dir)
        assert source.size == 120
        assert set(target_train.classes) <= {0, 1, 2}

        capsys.readouterr()
        args = ["train", "--config", str(config_file), "--task", str(task_dir), "--out", str(run_dir)]
        assert main(args) == EXIT_OK
        trained = _value(capsys.readouterr().out, "final_accuracy")
        assert (run_dir / METRICS_FILE).is_file()
        assert (run_dir / checkpoint_name()).is_file()

        assert main(["eval", "--out", str(run_dir)]) == EXIT_OK
        assert _value(capsys.readouterr().out, "accuracy") == pytest.approx(trained, abs=1e-6)

        assert main(["report", "--out", str(run_dir), "--features"]) == EXIT_OK
        assert (run_dir / RETENTION_FILE).is_file()
        assert (run_dir / FEATURES_FILE).is_file()

    def test_gen_task_seed_override(self, config_file, tmp_path):
        assert main(["gen-task", "--config", str(config_file), "--seed", "3", "--out", str(tmp_path / "a")]) == 0
        assert main(["gen-task", "--config", str(config_file), "--out", str(tmp_path / "b")]) == 0
        assert not load_task(tmp_path / "a")[0].equals(load_task(tmp_path / "b")[0])

    def test_variant_override(self, config_file, tmp_path):
        run_dir = tmp_path / "coral"
        assert main(["train", "--config", str(config_file), "--variant", "coral", "--out", str(run_dir)]) == EXIT_OK
        assert ConfigDAO().load(run_dir / "config.conf").variant.value == "coral"

    def test_sweep(self, config_file, tmp_path, capsys):
        out = tmp_path / "suite"
        args = ["sweep", "--config", str(config_file), "--axis", "gamma", "--values", "0,0.8", "--episodes", "1"]
        assert main([*args, "--workers", "1", "--out", str(out)]) == EXIT_OK
        assert (out / SWEEP_FILE).is_file()
        assert capsys.readouterr().out.count("status=success") == 2
