"""
@Author: li
@FileName: test_data.py
@DateTime: 2025-07-14
@Docs: 合成任务生成与批次切分测试
"""

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import ConfigurationException, UsageException
from app.data import Dataset, batches, class_centers, domain_shift, gen_pda_task, num_batches
from app.models.data_enum import DomainEnum
from app.schemas.config import PdaTaskSpec


class TestGenTask:
    def test_counts_and_label_sets(self, tiny_task_spec):
        source, target_train, target_test = gen_pda_task(tiny_task_spec)
        assert source.size == 6 * 20
        assert source.classes == list(range(6))
        assert target_train.size == target_test.size == 30
        assert set(target_train.classes) <= {0, 1, 2}
        assert set(target_test.classes) <= {0, 1, 2}
        assert source.domain is DomainEnum.SOURCE
        assert target_train.domain is DomainEnum.TARGET
        assert source.num_classes == target_train.num_classes == 6

    def test_stratified_split(self, tiny_task_spec):
        _, target_train, target_test = gen_pda_task(tiny_task_spec)
        for c in tiny_task_spec.shared_classes:
            assert np.sum(target_train.labels == c) == 10
            assert np.sum(target_test.labels == c) == 10

    def test_odd_class_size_puts_extra_in_test(self, tiny_task_spec):
        spec = tiny_task_spec.model_copy(update={"target_samples_per_class": 5})
        _, target_train, target_test = gen_pda_task(spec)
        assert target_train.size == 3 * 2
        assert target_test.size == 3 * 3

    def test_deterministic(self, tiny_task_spec):
        first = gen_pda_task(tiny_task_spec)
        second = gen_pda_task(tiny_task_spec)
        assert all(a.equals(b) for a, b in zip(first, second, strict=True))

    def test_seed_changes_data(self, tiny_task_spec):
        other = tiny_task_spec.model_copy(update={"seed": 8})
        assert not gen_pda_task(tiny_task_spec)[0].equals(gen_pda_task(other)[0])

    def test_noise_free_identity_shift_lands_on_centers(self, tiny_task_spec):
        spec = tiny_task_spec.model_copy(
            update={"noise_scale": 0.0, "rotation_deg": 0.0, "translation": 0.0, "feature_scale": 1.0}
        )
        source, target_train, _ = gen_pda_task(spec)
        for x, y in zip(target_train.inputs, target_train.labels, strict=True):
            center = source.inputs[source.labels == y][0]
            np.testing.assert_array_equal(x, center)

    def test_centers_respect_separation(self, tiny_task_spec):
        centers = class_centers(tiny_task_spec)
        distances = np.linalg.norm(centers[:, None] - centers[None, :], axis=-1)
        assert distances[~np.eye(6, dtype=bool)].min() >= tiny_task_spec.separation * (1 - 1e-9)

    def test_centers_on_circle_with_neighbours_at_separation(self):
        spec = PdaTaskSpec(separation=1.5, center_phase_deg=90.0)
        centers = class_centers(spec)
        neighbours = np.linalg.norm(centers - np.roll(centers, -1, axis=0), axis=-1)
        np.testing.assert_allclose(neighbours, 1.5, rtol=1e-12)
        np.testing.assert_array_equal(centers[:, 2:], 0.0)
        np.testing.assert_allclose(np.linalg.norm(centers, axis=-1), 1.5, rtol=1e-12)
        np.testing.assert_allclose(centers[0, :2], [0.0, 1.5], atol=1e-12)

    def test_two_classes_sit_opposite(self):
        centers = class_centers(PdaTaskSpec(num_source_classes=2, shared_classes=[0], separation=2.0))
        assert np.linalg.norm(centers[0] - centers[1]) == pytest.approx(2.0)

    def test_shift_rotates_first_two_coordinates(self):
        spec = PdaTaskSpec(input_dim=3, rotation_deg=90.0, translation=0.0, feature_scale=2.0)
        shifted = domain_shift(np.array([[1.0, 0.0, 1.0]]), spec)
        np.testing.assert_allclose(shifted, [[0.0, 2.0, 2.0]], atol=1e-12)

    @pytest.mark.parametrize(
        "update",
        [{"shared_classes": []}, {"shared_classes": [0, 9]}, {"shared_classes": [1, 1]}, {"noise_scale": -1.0}],
    )
    def test_degenerate_spec_rejected(self, tiny_task_spec, update):
        spec = PdaTaskSpec.model_construct(**{**tiny_task_spec.model_dump(), **update})
        with pytest.raises(ConfigurationException):
            gen_pda_task(spec)

    def test_validation_rejects_outside_classes(self):
        with pytest.raises(ValidationError):
            PdaTaskSpec(num_source_classes=3, shared_classes=[0, 3])

    def test_shared_classes_from_string(self):
        assert PdaTaskSpec(shared_classes="0, 2").shared_classes == [0, 2]


class TestDataset:
    def test_label_range_checked(self):
        with pytest.raises(UsageException):
            Dataset.create(np.zeros((2, 3)), [0, 4], DomainEnum.SOURCE, 3)

    def test_unlabeled_view_hides_labels(self, tiny_task_spec):
        _, target_train, _ = gen_pda_task(tiny_task_spec)
        view = target_train.as_unlabeled()
        assert not hasattr(view, "labels")
        assert view.size == target_train.size


class TestBatches:
    @pytest.fixture
    def task(self, tiny_task_spec):
        source, target_train, _ = gen_pda_task(tiny_task_spec)
        return source, target_train.as_unlabeled()

    def test_batch_count(self, task):
        source, target = task
        pairs = batches(source, target, 10, seed=0, episode=1)
        assert len(pairs) == num_batches(source.size, target.size, 10) == 3
        assert [p.batch_id for p in pairs] == [1, 2, 3]
        assert all(p.source_inputs.shape == (10, 4) and p.target_inputs.shape == (10, 4) for p in pairs)

    def test_no_repeats_within_episode(self, task):
        source, target = task
        pairs = batches(source, target, 10, seed=0, episode=1)
        rows = np.vstack([p.target_inputs for p in pairs])
        assert np.unique(rows, axis=0).shape[0] == 30

    def test_episodes_reshuffle_same_multiset(self, task):
        source, target = task
        first = np.vstack([p.target_inputs for p in batches(source, target, 10, seed=0, episode=1)])
        second = np.vstack([p.target_inputs for p in batches(source, target, 10, seed=0, episode=2)])
        assert not np.array_equal(first, second)
        np.testing.assert_array_equal(np.sort(first, axis=0), np.sort(second, axis=0))

    def test_same_seed_same_order(self, task):
        source, target = task
        first = batches(source, target, 10, seed=4, episode=3)
        second = batches(source, target, 10, seed=4, episode=3)
        for a, b in zip(first, second, strict=True):
            np.testing.assert_array_equal(a.source_labels, b.source_labels)

    def test_labels_follow_inputs(self, task):
        source, target = task
        for pair in batches(source, target, 10, seed=1, episode=1):
            for x, y in zip(pair.source_inputs, pair.source_labels, strict=True):
                match = np.flatnonzero(np.all(source.inputs == x, axis=1))
                assert source.labels[match[0]] == y

    @pytest.mark.parametrize("batch_size", [1, 31])
    def test_invalid_batch_size(self, task, batch_size):
        source, target = task
        with pytest.raises(ConfigurationException):
            batches(source, target, batch_size, seed=0, episode=1)
