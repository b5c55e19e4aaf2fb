"""
Tests de agentes: pérdidas, redes, replay priorizado, políticas enmascaradas y entrenamiento.
"""
import numpy as np
import pytest
import torch
from scipy import stats

from src.agents import (
    A3CTrainer,
    AgentConfig,
    Algorithm,
    PPOAgent,
    ReplayBuffer,
    SerialTrainer,
    ValueAgent,
    build_agent,
    build_trainer,
    parse_algorithm,
    train_agent,
)
from src.agents.losses import (
    actor_critic_loss,
    clipped_surrogate,
    dqn_targets,
    generalized_advantages,
    n_step_returns,
    ppo_loss,
    rollback_surrogate,
)
from src.agents.networks import (
    ActorCriticNetwork,
    DuelingNetwork,
    MlpNetwork,
    backward_check,
    dueling_aggregate,
    forward,
)
from src.agents.policies import (
    EpsilonSchedule,
    epsilon_greedy,
    greedy_action,
    masked_distribution,
    masked_entropy,
    masked_softmax,
    sample_masked,
)
from src.env import QasEnvironment
from src.problems import build_task
from src.problems.tasks import CHEMICAL_ACCURACY
from src.utils.errors import ConfigurationError, ContractViolation

TINY = dict(
    hidden_width=16,
    hidden_layers=1,
    batch_size=4,
    target_sync=5,
    replay_capacity=64,
    rollout_length=8,
    minibatch_size=4,
    ppo_epochs=2,
    a2c_n_steps=3,
    a3c_workers=2,
    epsilon_decay=0.9,
)


def tiny_config(algorithm) -> AgentConfig:
    return AgentConfig(algorithm=algorithm, **TINY)


def ghz_env(seed: int = 0) -> QasEnvironment:
    return QasEnvironment(build_task("ghz-3q"), seed=seed)


def test_clipped_surrogate_values():
    ratio = torch.tensor([2.0, 0.5, 1.0])
    advantages = torch.tensor([1.0, -1.0, 0.7])
    out = clipped_surrogate(ratio, advantages, 0.2)
    assert torch.allclose(out, torch.tensor([1.2, -0.8, 0.7]))


def test_rollback_surrogate_values_and_continuity():
    value = rollback_surrogate(torch.tensor([1.5]), torch.tensor([1.0]), 0.2, 0.3)
    # -0.3·1.5 + 1.3·1.2
    assert value.item() == pytest.approx(1.11, abs=1e-6)
    lower = rollback_surrogate(torch.tensor([0.5]), torch.tensor([-1.0]), 0.2, 0.3)
    assert lower.item() == pytest.approx(0.3 * 0.5 - 1.3 * 0.8, abs=1e-6)

    for edge, advantage in ((1.2, 1.0), (0.8, -1.0)):
        ratio = torch.tensor([edge - 1e-6, edge + 1e-6], dtype=torch.float64)
        out = rollback_surrogate(ratio, torch.full((2,), advantage, dtype=torch.float64), 0.2, 0.3)
        assert abs(out[0].item() - out[1].item()) < 1e-5

    # fuera de las regiones de recorte coincide con PPO
    ratio = torch.tensor([1.5, 0.5, 1.1], dtype=torch.float64)
    advantages = torch.tensor([-1.0, 1.0, 2.0], dtype=torch.float64)
    assert torch.allclose(
        rollback_surrogate(ratio, advantages, 0.2, 0.3), clipped_surrogate(ratio, advantages, 0.2)
    )


def test_dqn_targets_respect_mask_and_done():
    rewards = torch.tensor([1.0, 0.0])
    dones = torch.tensor([0.0, 1.0])
    next_q = torch.tensor([[5.0, 2.0], [3.0, 4.0]])
    masks = torch.tensor([[False, True], [True, True]])
    targets = dqn_targets(rewards, dones, next_q, masks, 0.5)
    assert torch.allclose(targets, torch.tensor([2.0, 0.0]))

    online = torch.tensor([[0.0, 1.0], [0.0, 0.0]])
    double = dqn_targets(rewards, torch.zeros(2), next_q, torch.ones(2, 2, dtype=torch.bool), 0.5, online)
    assert torch.allclose(double, torch.tensor([2.0, 1.5]))


def test_target_network_syncs_every_k_updates():
    env = ghz_env()
    agent = build_agent(tiny_config("dqn"), env.observation_size, env.n_actions, seed=0)
    observation = env.reset().flat()
    mask = env.legal_action_mask()
    for action in np.flatnonzero(mask)[: TINY["batch_size"]]:
        agent.buffer.add(observation, int(action), 1.0, observation, False, mask)

    snapshot = [p.detach().clone() for p in agent.target.parameters()]
    for _ in range(2 * TINY["target_sync"]):
        agent.learn()
        target = list(agent.target.parameters())
        if agent.updates % TINY["target_sync"] == 0:
            for t, o in zip(target, agent.online.parameters()):
                assert torch.equal(t, o)
            snapshot = [p.detach().clone() for p in target]
        else:
            for t, s in zip(target, snapshot):
                assert torch.equal(t, s)
            assert any(not torch.equal(t, o) for t, o in zip(target, agent.online.parameters()))


def test_actor_critic_loss_by_hand():
    log_probs = torch.tensor([-0.5, -1.0], dtype=torch.float64, requires_grad=True)
    values = torch.tensor([1.0, 2.0], dtype=torch.float64, requires_grad=True)
    returns = torch.tensor([3.0, 2.0], dtype=torch.float64)
    entropies = torch.tensor([0.3, 0.7], dtype=torch.float64)
    terms = actor_critic_loss(log_probs, values, returns, entropies, value_coef=0.5, entropy_coef=0.01)
    # ventajas [2, 0]
    assert terms.policy == pytest.approx(0.5)
    assert terms.value == pytest.approx(2.0)
    assert terms.entropy == pytest.approx(0.5)
    assert terms.total.item() == pytest.approx(0.5 + 0.5 * 2.0 - 0.01 * 0.5)

    terms.total.backward()
    assert log_probs.grad.tolist() == pytest.approx([-1.0, 0.0])
    assert log_probs.grad[1].item() == 0.0
    assert values.grad.tolist() == pytest.approx([-1.0, 0.0])


def test_entropy_is_zero_with_single_legal_action(rng):
    logits = torch.as_tensor(rng.normal(size=(3, 5)))
    masks = torch.zeros(3, 5, dtype=torch.bool)
    masks[torch.arange(3), torch.tensor([0, 2, 4])] = True
    assert torch.equal(masked_entropy(logits, masks), torch.zeros(3, dtype=torch.float64))
    full = masked_entropy(torch.zeros(1, 4, dtype=torch.float64), torch.ones(1, 4, dtype=torch.bool))
    assert full.item() == pytest.approx(np.log(4.0))


@pytest.mark.parametrize("rollback", [None, 0.3])
def test_unit_ratio_gradient_matches_policy_gradient(rng, rollback):
    logits = torch.as_tensor(rng.normal(size=(4, 6)))
    masks = torch.ones(4, 6, dtype=torch.bool)
    masks[:, 0] = False
    actions = torch.tensor([1, 3, 5, 2])
    advantages = torch.tensor([1.5, -0.7, 0.2, -2.0], dtype=torch.float64)
    zeros = torch.zeros(4, dtype=torch.float64)

    def chosen(params):
        log_probs, _ = masked_distribution(params, masks)
        return log_probs.gather(-1, actions.unsqueeze(-1)).squeeze(-1)

    surrogate_params = logits.clone().requires_grad_(True)
    log_probs = chosen(surrogate_params)
    terms = ppo_loss(
        log_probs, log_probs.detach(), advantages, zeros, zeros, zeros,
        clip=0.2, value_coef=0.0, entropy_coef=0.0, rollback=rollback,
    )
    terms.total.backward()

    vanilla_params = logits.clone().requires_grad_(True)
    (-(advantages * chosen(vanilla_params)).mean()).backward()
    assert torch.allclose(surrogate_params.grad, vanilla_params.grad, atol=1e-10)


def test_returns_and_advantages():
    returns = n_step_returns(np.array([1.0, 1.0]), np.array([0.0, 0.0]), 2.0, 0.5)
    assert np.allclose(returns, [2.0, 2.0])
    returns = n_step_returns(np.array([1.0, 1.0]), np.array([0.0, 1.0]), 10.0, 0.5)
    assert np.allclose(returns, [1.5, 1.0])

    advantages, targets = generalized_advantages(
        np.array([1.0]), np.array([0.5]), np.array([1.0]), 3.0, 0.9, 0.95
    )
    assert advantages[0] == pytest.approx(0.5)
    assert targets[0] == pytest.approx(1.0)


def test_dueling_argmax_ignores_value_stream(rng):
    advantages = torch.as_tensor(rng.normal(size=(6, 5)))
    for value in (-3.0, 0.0, 7.5):
        q = dueling_aggregate(torch.full((6,), value, dtype=torch.float64), advantages)
        assert torch.equal(q.argmax(dim=-1), advantages.argmax(dim=-1))
        assert torch.allclose(q.mean(dim=-1), torch.full((6,), value, dtype=torch.float64))


def test_backward_matches_finite_differences(rng):
    net = MlpNetwork(3, 2, [4], seed=7)
    x = torch.as_tensor(rng.normal(size=(5, 3)))
    target = torch.as_tensor(rng.normal(size=(5, 2)))
    worst = backward_check(net, lambda model: ((model(x) - target) ** 2).sum())
    assert worst <= 1e-4


def _q_loss(huber: bool):
    def build(x, actions, targets, masks, advantages):
        def loss(model):
            q = model(x).gather(-1, actions.unsqueeze(-1)).squeeze(-1)
            if huber:
                return torch.nn.functional.smooth_l1_loss(q, targets)
            return ((targets - q) ** 2).mean()

        return loss

    return build


def _policy_loss(x, actions, targets, masks, advantages):
    def loss(model):
        log_probs, _ = masked_distribution(model(x)[0], masks)
        return -(advantages * log_probs.gather(-1, actions.unsqueeze(-1)).squeeze(-1)).mean()

    return loss


def _value_loss(x, actions, targets, masks, advantages):
    return lambda model: ((targets - model(x)[1]) ** 2).mean()


def _entropy_loss(x, actions, targets, masks, advantages):
    return lambda model: -masked_entropy(model(x)[0], masks).mean()


@pytest.mark.parametrize(
    "network_cls,build_loss",
    [
        (MlpNetwork, _q_loss(huber=False)),
        (MlpNetwork, _q_loss(huber=True)),
        (DuelingNetwork, _q_loss(huber=False)),
        (ActorCriticNetwork, _policy_loss),
        (ActorCriticNetwork, _value_loss),
        (ActorCriticNetwork, _entropy_loss),
    ],
    ids=["dqn-mse", "dqn-huber", "dueling", "policy", "value", "entropy"],
)
def test_backward_matches_finite_differences_per_head(rng, network_cls, build_loss):
    net = network_cls(3, 4, [4], seed=2)
    x = torch.as_tensor(rng.normal(size=(5, 3)))
    actions = torch.tensor([1, 2, 3, 1, 2])
    targets = torch.as_tensor(rng.normal(size=5))
    masks = torch.ones(5, 4, dtype=torch.bool)
    masks[:, 0] = False
    advantages = torch.as_tensor(rng.normal(size=5))
    worst = backward_check(net, build_loss(x, actions, targets, masks, advantages))
    assert worst <= 1e-4


def test_backward_check_tolerates_unused_parameters():
    net = ActorCriticNetwork(3, 2, [4], seed=1)
    x = torch.linspace(-1.0, 1.0, 6, dtype=torch.float64).reshape(2, 3)
    worst = backward_check(net, lambda model: -torch.log_softmax(model(x)[0], dim=-1)[:, 0].sum())
    assert worst <= 1e-4


def test_seeded_initialization_and_forward_shape():
    a = MlpNetwork(10, 4, [8, 8], seed=3)
    b = MlpNetwork(10, 4, [8, 8], seed=3)
    for pa, pb in zip(a.parameters(), b.parameters()):
        assert torch.equal(pa, pb)
    assert a.layer_sizes == [10, 8, 8, 4]
    assert forward(a, np.zeros(10)).shape == (4,)
    with pytest.raises(ConfigurationError):
        forward(a, np.zeros(9))


def _filled_buffer(mode: str, priorities) -> ReplayBuffer:
    buffer = ReplayBuffer(16, 9, 4, mode=mode, alpha=0.6, seed=11)
    observation = np.zeros(9, dtype=np.float32)
    for priority in priorities:
        buffer.add(observation, 0, 0.0, observation, False, np.ones(4, dtype=bool), priority=priority)
    return buffer


@pytest.mark.parametrize("mode", ["proportional", "rank"])
def test_prioritized_sampling_law(mode):
    priorities = [1.0, 2.0, 3.0, 4.0]
    buffer = _filled_buffer(mode, priorities)
    if mode == "proportional":
        expected = np.array(priorities) ** 0.6
    else:
        expected = (1.0 / np.array([4.0, 3.0, 2.0, 1.0])) ** 0.6
    expected /= expected.sum()
    assert np.allclose(buffer.sampling_probabilities(), expected)

    draws = 100_000
    counts = np.bincount(buffer.sample_indices(draws), minlength=4)
    assert np.all(np.abs(counts / draws - expected) < 0.01)
    assert stats.chisquare(counts, expected * draws).pvalue > 1e-6


def test_importance_weights_and_priority_update():
    buffer = _filled_buffer("proportional", [1.0, 2.0, 3.0, 4.0])
    batch = buffer.sample(8)
    assert batch.weights.max() == pytest.approx(1.0)
    assert batch.observations.shape == (8, 9)
    assert batch.next_masks.shape == (8, 4) and batch.next_masks.all()
    buffer.update_priorities(batch.indices, np.full(8, 0.5))
    assert np.allclose(buffer.priorities[np.unique(batch.indices)], 0.5 + 1e-6)
    with pytest.raises(ContractViolation):
        buffer.update_priorities(batch.indices, np.full(8, 0.5))


def test_replay_restores_binary_observation():
    buffer = ReplayBuffer(4, 9, 4, seed=0)
    observation = np.array([1, 0, 1, 1, 0, 0, 1, 0, 0.37], dtype=np.float32)
    buffer.add(observation, 2, 1.0, observation, True, np.array([True, False, True, True]))
    batch = buffer.sample(1)
    assert np.allclose(batch.observations[0], observation)
    assert batch.next_masks[0].tolist() == [True, False, True, True]
    assert batch.actions[0] == 2 and batch.dones[0] == 1.0


def test_masked_policies_never_pick_illegal(rng):
    mask = np.array([False, True, False, True, False])
    values = np.array([10.0, 1.0, 20.0, 2.0, 30.0])
    assert greedy_action(values, mask) == 3
    for _ in range(200):
        assert mask[epsilon_greedy(values, mask, 1.0, rng)]
        assert mask[sample_masked(values, mask, rng)]
    probabilities = masked_softmax(values, mask)
    assert probabilities[~mask].sum() == 0.0
    assert probabilities.sum() == pytest.approx(1.0)
    with pytest.raises(ContractViolation):
        greedy_action(values, np.zeros(5, dtype=bool))


def test_full_exploration_is_uniform_over_legal_actions():
    rng = np.random.default_rng(123)
    mask = np.array([True, False, True, True, False, True, False, True])
    values = np.arange(8, dtype=np.float64)
    draws = 100_000
    picks = [epsilon_greedy(values, mask, 1.0, rng) for _ in range(draws)]
    counts = np.bincount(picks, minlength=8)
    assert counts[~mask].sum() == 0

    p = 1.0 / mask.sum()
    sigma = np.sqrt(draws * p * (1.0 - p))
    assert np.all(np.abs(counts[mask] - draws * p) <= 3.0 * sigma)


def test_epsilon_schedule():
    schedule = EpsilonSchedule(1.0, 0.05, 0.5)
    assert schedule.value == 1.0
    assert schedule.step() == 0.5
    for _ in range(10):
        schedule.step()
    assert schedule.value == 0.05


def test_agent_config_validation():
    assert parse_algorithm("DDQN") is Algorithm.DDQN
    with pytest.raises(ConfigurationError):
        parse_algorithm("sac")
    with pytest.raises(ConfigurationError):
        AgentConfig.from_dict({"learning_rate": 0.1})
    with pytest.raises(ConfigurationError):
        AgentConfig(gamma=1.5)
    config = AgentConfig.from_dict({"algorithm": "ppo", "lr": 0.01})
    assert config.algorithm is Algorithm.PPO and config.lr == 0.01
    assert config.with_overrides(batch_size=8).batch_size == 8


@pytest.mark.parametrize("algorithm", [a for a in Algorithm if a is not Algorithm.A3C])
def test_every_agent_trains_on_ghz(algorithm):
    env = ghz_env()
    agent = build_agent(tiny_config(algorithm), env.observation_size, env.n_actions, seed=0)
    results = train_agent(agent, env, episodes=3)
    assert [r.episode for r in results] == [0, 1, 2]
    for result in results:
        assert 1 <= result.steps <= 10
        assert result.gate_count == result.steps
        assert 0.0 <= result.error <= 1.0
    assert agent.env_steps == sum(r.steps for r in results)


def test_value_agent_learns_once_buffer_fills():
    env = ghz_env()
    agent = build_agent(tiny_config("ddqn"), env.observation_size, env.n_actions, seed=0)
    assert isinstance(agent, ValueAgent) and agent.double
    train_agent(agent, env, episodes=2)
    assert agent.updates == agent.env_steps - TINY["batch_size"] + 1
    assert agent.last_loss is not None
    assert agent.epsilon.value < 1.0


def test_tppo_uses_rollback():
    env = ghz_env()
    tppo = build_agent(tiny_config("tppo"), env.observation_size, env.n_actions)
    ppo = build_agent(tiny_config("ppo"), env.observation_size, env.n_actions)
    assert isinstance(tppo, PPOAgent) and tppo.rollback == 0.3
    assert ppo.rollback is None


def test_training_is_deterministic_for_a_seed():
    def run():
        env = ghz_env(seed=5)
        agent = build_agent(tiny_config("dqn_per"), env.observation_size, env.n_actions, seed=5)
        return [(r.total_reward, r.program.to_dict()) for r in train_agent(agent, env, episodes=4)]

    assert run() == run()


def test_trainers_share_interface():
    serial = build_trainer(tiny_config("a2c"), ghz_env, hidden_layers=1, seed=0)
    assert isinstance(serial, SerialTrainer) and serial.name == "a2c"
    assert len(serial.train(2)) == 2

    with pytest.raises(ConfigurationError):
        build_agent(tiny_config("a3c"), 10, 4)

    seen = []
    a3c = build_trainer(tiny_config("a3c"), ghz_env, hidden_layers=1, seed=0)
    assert isinstance(a3c, A3CTrainer) and len(a3c.workers) == 2
    results = a3c.train(5, callback=seen.append)
    assert [r.episode for r in results] == list(range(5))
    assert len(seen) == 5
    env = ghz_env()
    observation = env.reset().flat()
    mask = env.legal_action_mask()
    assert mask[a3c.select_action(observation, mask)]


def test_a3c_workers_update_shared_network():
    trainer = build_trainer(tiny_config("a3c"), ghz_env, hidden_layers=1, seed=0)
    before = [p.detach().clone() for p in trainer.store.network.parameters()]
    trainer.train(2)
    after = list(trainer.store.network.parameters())
    assert any(not torch.equal(a, b) for a, b in zip(before, after))
    for worker in trainer.workers:
        for local, shared in zip(worker.network.parameters(), trainer.store.network.parameters()):
            assert local.shape == shared.shape


def _desktop_config(algorithm: str) -> AgentConfig:
    return AgentConfig(
        algorithm=algorithm, hidden_width=64, hidden_layers=2, batch_size=32, target_sync=50,
        replay_capacity=5000, epsilon_decay=0.995, lr=1e-3,
    )


@pytest.mark.slow
def test_ddqn_solves_ghz_for_most_seeds():
    solved = 0
    for seed in range(3):
        env = ghz_env(seed=seed)
        agent = build_agent(_desktop_config("ddqn"), env.observation_size, env.n_actions, seed=seed)
        results = train_agent(agent, env, episodes=400)
        solved += any(r.success for r in results[-50:])
    assert solved >= 2


@pytest.mark.slow
def test_dqn_reaches_chemical_accuracy_on_h2():
    best = float("inf")
    for seed in range(3):
        env = QasEnvironment(build_task("vqe-h2"), seed=seed)
        agent = build_agent(_desktop_config("dqn"), env.observation_size, env.n_actions, seed=seed)
        results = train_agent(agent, env, episodes=300)
        best = min(best, min(r.error for r in results))
    assert best <= CHEMICAL_ACCURACY
