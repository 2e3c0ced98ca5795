"""
@Author: li
@FileName: test_evaluation.py
@DateTime: 2025-07-15
@Docs: 评估服务测试：准确率、保留概率报告与特征导出
"""

import numpy as np
import pytest

from app.core.exceptions import UsageException
from app.data import Dataset, gen_pda_task
from app.domain_adaptation import DaModel
from app.models.bundle import RTNetModel
from app.models.data_enum import ActivationEnum, DomainEnum
from app.repositories import features_dao, retention_dao
from app.schemas.metrics import RetentionRow
from app.services import EvaluationService, evaluate, export_features, retention_gap, retention_report
from tests.conftest import linear_network


def _model(input_dim: int = 4, num_classes: int = 6) -> RTNetModel:
    rngs = [np.random.default_rng(s) for s in (0, 1, 2)]
    return RTNetModel.build(
        input_dim,
        num_classes,
        model_rng=rngs[0],
        generator_rng=rngs[1],
        selector_rng=rngs[2],
        feature_dim=3,
        hidden_dim=5,
        selector_hidden_dim=4,
    )


class TestEvaluate:
    def test_perfect_classifier(self):
        feature = linear_network(np.eye(2), name="F")
        classifier = linear_network(10.0 * np.eye(2), activation=ActivationEnum.SOFTMAX, name="C")
        da = DaModel.from_networks(feature, classifier)
        dataset = Dataset.create([[1.0, 0.0], [0.0, 1.0], [2.0, 0.5]], [0, 1, 0], DomainEnum.TARGET, 2)
        assert evaluate(da, dataset) == 1.0

    def test_counts_outlier_predictions_as_errors(self):
        feature = linear_network(np.eye(2), name="F")
        classifier = linear_network(10.0 * np.eye(2), activation=ActivationEnum.SOFTMAX, name="C")
        da = DaModel.from_networks(feature, classifier)
        dataset = Dataset.create([[1.0, 0.0], [1.0, 0.0]], [0, 1], DomainEnum.TARGET, 2)
        assert evaluate(da, dataset) == 0.5

    def test_empty_dataset(self):
        with pytest.raises(UsageException):
            evaluate(_model(), Dataset.create(np.zeros((0, 4)), [], DomainEnum.TARGET, 6))


class TestRetention:
    def test_zero_policy_is_half(self, tiny_task_spec):
        source, target_train, _ = gen_pda_task(tiny_task_spec)
        model = _model()
        model.policy.network.zero_()
        rows = retention_report(model, source, target_train)
        assert [row.class_id for row in rows] == list(range(6))
        assert [row.shared for row in rows] == [True, True, True, False, False, False]
        assert all(row.count == 20 for row in rows)
        assert all(row.keep_probability == pytest.approx(0.5) for row in rows)
        assert retention_gap(rows) == pytest.approx(0.0)

    def test_missing_class_has_no_probability(self, tiny_task_spec):
        source, target_train, _ = gen_pda_task(tiny_task_spec)
        keep = source.labels != 5
        partial = Dataset.create(source.inputs[keep], source.labels[keep], DomainEnum.SOURCE, 6)
        rows = retention_report(_model(), partial, target_train)
        assert rows[5].count == 0
        assert rows[5].keep_probability is None

    def test_gap(self):
        rows = [
            RetentionRow(class_id=0, shared=True, count=1, keep_probability=0.9),
            RetentionRow(class_id=1, shared=True, count=1, keep_probability=0.7),
            RetentionRow(class_id=2, shared=False, count=1, keep_probability=0.2),
        ]
        assert retention_gap(rows) == pytest.approx(0.6)

    def test_gap_needs_outliers(self):
        with pytest.raises(UsageException):
            retention_gap([RetentionRow(class_id=0, shared=True, count=1, keep_probability=0.9)])

    def test_report_written(self, tiny_task_spec, tmp_path):
        source, target_train, _ = gen_pda_task(tiny_task_spec)
        path = EvaluationService().report(_model(), source, target_train, tmp_path)
        rows = retention_dao().load(path)
        assert len(rows) == 6
        assert rows[0]["shared"] == "1"
        assert rows[5]["shared"] == "0"


class TestFeatures:
    def test_export(self, tiny_task_spec, tmp_path):
        source, target_train, target_test = gen_pda_task(tiny_task_spec)
        path = export_features(_model(), [source, target_train, target_test], tmp_path)
        rows = features_dao(3).load(path)
        assert len(rows) == source.size + target_train.size + target_test.size
        assert rows[0]["domain"] == "source"
        assert rows[-1]["domain"] == "target"
        assert set(rows[0]) == {"domain", "label", "f_0", "f_1", "f_2"}
