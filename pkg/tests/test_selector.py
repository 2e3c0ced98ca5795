"""
@Author: li
@FileName: test_selector.py
@DateTime: 2025-07-14
@Docs: 选择器测试：状态、采样、回报、actor-critic 更新与两状态赌博机
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.exceptions import ConfigurationException, UsageException
from app.engine import finite_diff_check
from app.selector import (
    EpisodeHistory,
    PolicyNet,
    StepRecord,
    ValueNet,
    advantage,
    build_states,
    discounted_returns,
    epsilon_schedule,
    policy_forward,
    policy_gradient,
    sample_actions,
    select_batch,
    state_dim,
    target_label_distribution,
    update_policy,
    update_value,
    value_forward,
    value_gradient,
)
from tests.conftest import linear_network, rows_off_kinks


def _record(batch_id: int, states, actions, reward: float, values) -> StepRecord:
    return StepRecord(batch_id, np.asarray(states, float), np.asarray(actions), reward, np.asarray(values, float))


class TestState:
    def test_target_label_distribution(self):
        alpha = target_label_distribution(np.array([[0.2, 0.8], [0.6, 0.4]]))
        np.testing.assert_allclose(alpha, [0.4, 0.6])

    def test_empty_target_rejected(self):
        with pytest.raises(UsageException):
            target_label_distribution(np.zeros((0, 3)))

    def test_layout(self):
        features = np.array([[1.0, 2.0, 3.0, 4.0]])
        alpha = np.array([0.2, 0.3, 0.5])
        states = build_states(features, np.array([2]), alpha)
        assert states.shape == (1, state_dim(4, 3)) == (1, 10)
        np.testing.assert_array_equal(states[0, :4], features[0])
        np.testing.assert_array_equal(states[0, 4:7], [0.0, 0.0, 1.0])
        np.testing.assert_array_equal(states[0, 7:], alpha)

    def test_alpha_shared_across_batch(self, rng):
        alpha = np.array([0.1, 0.9])
        states = build_states(rng.normal(size=(5, 3)), np.array([0, 1, 1, 0, 1]), alpha)
        np.testing.assert_array_equal(states[:, -2:], np.tile(alpha, (5, 1)))

    def test_label_out_of_range(self, rng):
        with pytest.raises(UsageException):
            build_states(rng.normal(size=(2, 3)), np.array([0, 3]), np.full(3, 1 / 3))

    def test_zero_policy_is_indifferent(self, rng):
        policy = PolicyNet.build(10, rng, hidden_dim=4, zero_init=True)
        np.testing.assert_allclose(policy_forward(policy, rng.normal(size=(3, 10))), 0.5)

    def test_policy_shape_checked(self):
        with pytest.raises(ConfigurationException):
            PolicyNet(linear_network(np.eye(3)), None)

    def test_value_forward_is_vector(self, rng):
        value = ValueNet.build(6, rng, hidden_dim=4)
        assert value_forward(value, rng.normal(size=(5, 6))).shape == (5,)


class TestSampling:
    def test_greedy_keeps_more_likely(self, rng):
        probs = np.array([[0.3, 0.7], [0.6, 0.4]])
        np.testing.assert_array_equal(sample_actions(probs, 0.0, rng), [1, 0])

    def test_tie_keeps(self, rng):
        np.testing.assert_array_equal(sample_actions(np.full((4, 2), 0.5), 0.0, rng), [1, 1, 1, 1])

    def test_full_exploration_follows_policy(self, rng):
        probs = np.tile([0.3, 0.7], (10_000, 1))
        assert sample_actions(probs, 1.0, rng).mean() == pytest.approx(0.7, abs=0.03)

    def test_epsilon_range(self, rng):
        with pytest.raises(UsageException):
            sample_actions(np.full((1, 2), 0.5), 1.5, rng)

    def test_same_seed_same_actions(self):
        probs = np.random.default_rng(0).dirichlet([1.0, 1.0], size=50)
        first = sample_actions(probs, 0.5, np.random.default_rng(11))
        second = sample_actions(probs, 0.5, np.random.default_rng(11))
        np.testing.assert_array_equal(first, second)


class TestSelectBatch:
    def test_keeps_marked_rows_in_order(self):
        x = np.arange(8.0).reshape(4, 2)
        selection = select_batch(x, np.array([0, 1, 2, 3]), np.array([1, 0, 1, 1]))
        np.testing.assert_array_equal(selection.inputs, x[[0, 2, 3]])
        np.testing.assert_array_equal(selection.labels, [0, 2, 3])
        assert selection.n_selected == 3
        assert not selection.fallback

    @pytest.mark.parametrize("actions", [[0, 0, 0, 0], [0, 1, 0, 0]])
    def test_fallback_keeps_everything(self, actions):
        x = np.arange(8.0).reshape(4, 2)
        selection = select_batch(x, np.arange(4), np.array(actions))
        assert selection.fallback
        np.testing.assert_array_equal(selection.inputs, x)
        np.testing.assert_array_equal(selection.actions, [1, 1, 1, 1])

    def test_length_mismatch(self):
        with pytest.raises(UsageException):
            select_batch(np.zeros((3, 2)), np.zeros(3, int), np.ones(2, int))


class TestReturns:
    def test_discounted_example(self):
        np.testing.assert_allclose(discounted_returns([1.0, 0.5, 0.25], 0.5), [1.3125, 0.625, 0.25])

    def test_undiscounted_sum(self):
        np.testing.assert_allclose(discounted_returns([1.0] * 4, 1.0), [4.0, 3.0, 2.0, 1.0])

    def test_zero_gamma_is_immediate(self):
        np.testing.assert_array_equal(discounted_returns([0.3, 0.2], 0.0), [0.3, 0.2])

    @given(
        st.lists(st.floats(0.0, 1.0), min_size=1, max_size=12),
        st.floats(0.0, 1.0),
    )
    def test_recursion(self, rewards, gamma):
        returns = discounted_returns(rewards, gamma)
        for b in range(len(rewards)):
            explicit = sum(gamma**j * rewards[b + j] for j in range(len(rewards) - b))
            assert returns[b] == pytest.approx(explicit, abs=1e-12)
            tail = returns[b + 1] if b + 1 < len(rewards) else 0.0
            assert returns[b] == pytest.approx(rewards[b] + gamma * tail, abs=1e-12)

    @pytest.mark.parametrize("gamma", [-0.1, 1.1])
    def test_gamma_range(self, gamma):
        with pytest.raises(UsageException):
            discounted_returns([1.0], gamma)

    def test_empty_rewards(self):
        with pytest.raises(UsageException):
            discounted_returns([], 0.5)

    def test_advantage(self):
        np.testing.assert_allclose(advantage(1.3125, np.array([1.0, 1.3125])), [0.3125, 0.0])


class TestHistory:
    def test_batch_ids_must_increase(self):
        history = EpisodeHistory()
        history.append(_record(1, np.zeros((2, 3)), [1, 1], 0.5, [0.0, 0.0]))
        with pytest.raises(UsageException):
            history.append(_record(3, np.zeros((2, 3)), [1, 1], 0.5, [0.0, 0.0]))
        assert len(history) == 1
        assert history.rewards == [0.5]

    def test_record_sizes_checked(self):
        with pytest.raises(UsageException):
            _record(1, np.zeros((2, 3)), [1], 0.5, [0.0, 0.0])

    def test_returns_length_checked(self, rng):
        policy = PolicyNet.build(3, rng, hidden_dim=4)
        history = EpisodeHistory()
        history.append(_record(1, np.zeros((2, 3)), [1, 1], 0.5, [0.0, 0.0]))
        with pytest.raises(UsageException):
            update_policy(policy, history, np.array([0.5, 0.5]), lr=1e-3)


class TestPolicyUpdate:
    def _history(self, rng, values) -> tuple[EpisodeHistory, np.ndarray]:
        states = rng.normal(size=(4, 3))
        history = EpisodeHistory()
        history.append(_record(1, states, [1, 1, 1, 1], 1.0, values))
        return history, states

    def test_zero_advantage_leaves_policy(self, rng):
        policy = PolicyNet.build(3, rng, hidden_dim=6)
        history, _ = self._history(rng, np.ones(4))
        before = {k: v.copy() for k, v in policy.network.parameters().items()}
        update_policy(policy, history, np.array([1.0]), lr=1e-2)
        for key, value in policy.network.parameters().items():
            np.testing.assert_array_equal(value, before[key])

    def test_positive_advantage_raises_keep(self, rng):
        policy = PolicyNet.build(3, rng, hidden_dim=6)
        history, states = self._history(rng, np.zeros(4))
        before = np.log(policy_forward(policy, states)[:, 1]).mean()
        update_policy(policy, history, np.array([1.0]), lr=1e-3)
        assert np.log(policy_forward(policy, states)[:, 1]).mean() > before

    def test_negative_advantage_lowers_keep(self, rng):
        policy = PolicyNet.build(3, rng, hidden_dim=6)
        history, states = self._history(rng, np.full(4, 2.0))
        before = np.log(policy_forward(policy, states)[:, 1]).mean()
        update_policy(policy, history, np.array([1.0]), lr=1e-3)
        assert np.log(policy_forward(policy, states)[:, 1]).mean() < before

    @pytest.mark.parametrize("seed", range(20))
    def test_gradient_matches_surrogate(self, seed):
        rng = np.random.default_rng(seed)
        policy = PolicyNet.build(5, rng, hidden_dim=7)
        states = rows_off_kinks(rng, policy.network, 6, 5)
        actions = rng.integers(0, 2, size=6)
        advantages = rng.normal(size=6)

        def loss_fn():
            probs = policy.network.infer(states)
            loss = -float(np.mean(advantages * np.log(probs[np.arange(6), actions])))
            return loss, policy_gradient(policy, states, actions, advantages)

        assert finite_diff_check(loss_fn, policy.network.parameters()) < 1e-4

    def test_advantage_scaling_keeps_direction(self, rng):
        policy = PolicyNet.build(5, rng, hidden_dim=7)
        states = rng.normal(size=(6, 5))
        actions = rng.integers(0, 2, size=6)
        advantages = rng.normal(size=6)
        base = policy_gradient(policy, states, actions, advantages).flat()
        scaled = policy_gradient(policy, states, actions, 37.5 * advantages).flat()
        cosine = float(base @ scaled / (np.linalg.norm(base) * np.linalg.norm(scaled)))
        assert cosine == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(scaled, 37.5 * base, rtol=1e-12, atol=1e-15)


class TestValueUpdate:
    @pytest.mark.parametrize("seed", range(20))
    def test_gradient_matches_finite_differences(self, seed):
        rng = np.random.default_rng(seed)
        value = ValueNet.build(5, rng, hidden_dim=7)
        states = rows_off_kinks(rng, value.network, 6, 5)
        target = float(rng.normal())

        def loss_fn():
            return value_gradient(value, states, target)

        assert finite_diff_check(loss_fn, value.network.parameters()) < 1e-4

    def test_loss_is_mean_square_residual(self, rng):
        value = ValueNet.build(3, rng, hidden_dim=4)
        states = rng.normal(size=(4, 3))
        loss, _ = value_gradient(value, states, 0.25)
        assert loss == pytest.approx(float(np.mean((0.25 - value_forward(value, states)) ** 2)))

    def test_regression_converges(self, rng):
        value = ValueNet.build(3, rng, hidden_dim=8)
        states = rng.normal(size=(5, 3))
        history = EpisodeHistory()
        history.append(_record(1, states, [1] * 5, 0.7, np.zeros(5)))

        def loss() -> float:
            return float(np.mean((0.7 - value_forward(value, states)) ** 2))

        initial = loss()
        for _ in range(300):
            update_value(value, history, np.array([0.7]), lr=1e-2)
        assert loss() < 0.1 * initial

    def test_zero_lr_leaves_value(self, rng):
        value = ValueNet.build(3, rng, hidden_dim=8)
        history = EpisodeHistory()
        history.append(_record(1, rng.normal(size=(2, 3)), [1, 0], 0.2, np.zeros(2)))
        before = {k: v.copy() for k, v in value.network.parameters().items()}
        update_value(value, history, np.array([0.2]), lr=0.0)
        for key, param in value.network.parameters().items():
            np.testing.assert_array_equal(param, before[key])


class TestEpsilonSchedule:
    def test_midpoint(self):
        assert epsilon_schedule(5, 10) == pytest.approx(0.5)

    def test_endpoints(self):
        assert epsilon_schedule(1, 10) == 1.0
        assert epsilon_schedule(9, 10) == 0.0
        assert epsilon_schedule(10, 10) == 0.0

    def test_non_increasing(self):
        values = [epsilon_schedule(e, 37) for e in range(1, 38)]
        assert all(a >= b for a, b in zip(values, values[1:], strict=False))

    def test_out_of_range(self):
        with pytest.raises(UsageException):
            epsilon_schedule(0, 10)


class TestBandit:
    """两种固定状态：保留 A 的奖励为 1，保留 B 的奖励为 e⁻¹（丢弃则相反）"""

    STATE_A = np.array([1.0, 0.0])
    STATE_B = np.array([0.0, 1.0])

    def _run(self, seed: int, episodes: int = 500, batches: int = 4) -> PolicyNet:
        rng = np.random.default_rng(seed)
        policy = PolicyNet.build(2, rng, hidden_dim=16)
        value = ValueNet.build(2, rng, hidden_dim=16)
        states = np.vstack([np.tile(self.STATE_A, (8, 1)), np.tile(self.STATE_B, (4, 1))])
        is_b = np.repeat([0, 1], [8, 4])
        for episode in range(1, episodes + 1):
            epsilon = epsilon_schedule(episode, episodes)
            history = EpisodeHistory(episode)
            for batch_id in range(1, batches + 1):
                actions = sample_actions(policy_forward(policy, states), epsilon, rng)
                selection = select_batch(states, is_b, actions)
                # 保留 B 或丢弃 A 各计误差 1
                errors = np.where(is_b == 1, selection.actions, 1 - selection.actions)
                reward = math.exp(-float(np.mean(errors)))
                history.append(StepRecord(batch_id, states, selection.actions, reward, value_forward(value, states)))
            returns = discounted_returns(history.rewards, 0.5)
            update_policy(policy, history, returns, lr=5e-3)
            update_value(value, history, returns, lr=1e-2)
        return policy

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_learns_to_drop_outliers(self, seed):
        policy = self._run(seed)
        keep = policy_forward(policy, np.vstack([self.STATE_A, self.STATE_B]))[:, 1]
        assert keep[0] > 0.95
        assert keep[1] < 0.5
