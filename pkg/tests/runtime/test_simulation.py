import numpy as np
import pytest
from cogmac.sim import *
from cogmac.agent import *
from cogmac.runtime import *
import helpers_runtime as helpers

def test_rejects_bad_arguments():
    cfg = helpers.fast_config()
    with pytest.raises(ValueError):
        run_simulation(cfg, QLearningAgent(cfg), 0, theta_p_max=0.1)
    with pytest.raises(TypeError):
        run_simulation(cfg, object(), 10, theta_p_max=0.1)

def test_same_seed_same_trace():
    cfg = helpers.fast_config(lambda1=0.1, seed=3)
    a = run_simulation(cfg, QLearningAgent(cfg), 20_000, theta_p_max=0.1)
    b = run_simulation(cfg, QLearningAgent(cfg), 20_000, theta_p_max=0.1)
    assert a.records == b.records
    assert a.agent.reward_log == b.agent.reward_log
    assert a.metrics == b.metrics

def test_different_seeds_differ():
    cfg = helpers.fast_config(lambda1=0.1)
    a = run_simulation(cfg, QLearningAgent(cfg), 5_000, theta_p_max=0.1)
    b = run_simulation(cfg.with_updates(seed=1), QLearningAgent(cfg), 5_000, theta_p_max=0.1)
    assert a.records != b.records

def test_trace_is_consistent():
    cfg = helpers.fast_config(lambda1=0.2)
    trace = run_simulation(cfg, QLearningAgent(cfg), 10_000, theta_p_max=0.15)
    assert len(trace.records) == 10_000
    primary_tx = trace.column("primary_transmitted")
    secondary_tx = trace.column("secondary_transmitted")
    busy = trace.column("channel_busy")
    assert np.array_equal(busy, primary_tx | secondary_tx)
    assert np.array_equal(trace.column("slot_index"), np.arange(10_000))
    for record in trace.records:
        outcome = record.outcome
        assert (outcome.primary_success is None) == (not outcome.primary_transmitted)
        assert (outcome.secondary_success is None) == (not outcome.secondary_transmitted)
    theta_s = trace.column("theta_s")
    assert theta_s[-1] == pytest.approx(trace.metrics.theta_s)

def test_single_slot_packets_never_back_to_back():
    cfg = helpers.fast_config(lambda1=1.0)
    trace = helpers.run_policy(cfg, uniform_policy(cfg.ws), 10_000, record_trace=True)
    # after its own packet a node always waits DIFS again
    assert set(helpers.run_lengths(trace.column("primary_transmitted"))) == {1}
    assert set(helpers.run_lengths(trace.column("secondary_transmitted"))) == {1}

def test_multi_slot_packets_occupy_whole_airtime():
    cfg = helpers.fast_config(lambda1=1.0, packet_slots=3)
    trace = helpers.run_policy(cfg, silent_policy(cfg.ws), 10_000, record_trace=True)
    lengths = helpers.run_lengths(trace.column("primary_transmitted"))
    # the last packet may be cut by the horizon
    assert set(lengths[:-1]) == {3}
    assert trace.metrics.p_delivered_slots % 3 == 0

def test_no_primary_traffic():
    cfg = helpers.fast_config(lambda1=0.0)
    trace = helpers.run_policy(cfg, uniform_policy(cfg.ws), 10_000, theta_p_max=None, record_trace=True)
    assert not trace.column("primary_transmitted").any()
    assert trace.metrics.theta_p == 0.0
    assert trace.metrics.theta_p_max == 0.0
    assert trace.metrics.theta_s > 0.0

def test_silent_secondary_reproduces_calibration():
    cfg = helpers.fast_config(lambda1=0.05, calibration_slots=30_000, seed=7919)
    trace = helpers.run_policy(cfg, silent_policy(cfg.ws), 30_000, theta_p_max=None)
    # same seed, same horizon, no draws on the secondary side: the calibration run itself
    assert trace.metrics.theta_p == trace.metrics.theta_p_max
    assert trace.metrics.loss == 0.0

def test_primary_queue_conservation():
    cfg = helpers.fast_config(lambda1=0.3)
    trace = run_simulation(cfg, QLearningAgent(cfg, record_decisions=False), 50_000, theta_p_max=0.1, record_trace=False)
    acc = trace.metrics
    assert acc.arrivals_dropped > 0
    assert acc.arrivals_admitted == acc.delivered_count + acc.x2_count + trace.final_primary.queue_len
    assert acc.attempts_alone + acc.attempts_overlap >= acc.x3_count
    trace.final_primary.check_invariants(cfg)

def test_failure_ratio_of_saturated_primary():
    cfg = helpers.fast_config(lambda1=5.0, rho=0.5, rho_star=0.5)
    trace = helpers.run_policy(cfg, silent_policy(cfg.ws), 200_000)
    # every attempt fails with 0.5, a packet is lost after 4 failures
    assert failure_ratio(trace.metrics) == pytest.approx(0.5 ** 4, abs=0.01)

def test_zero_tolerance_forces_silence():
    cfg = helpers.fast_config(lambda1=0.5, gamma1=0.0)
    agent = QLearningAgent(cfg)
    run_simulation(cfg, agent, 20_000, theta_p_max=1.0, record_trace=False)
    assert agent.forced_counts[0] > 0
    assert sum(agent.forced_counts[1:]) == 0
    assert len(agent.reward_log) <= sum(agent.voluntary_counts)

def test_learner_converges_on_default_scenario():
    cfg = helpers.fast_config()
    agent = QLearningAgent(cfg, record_decisions=False)
    run_simulation(cfg, agent, 100_000, record_trace=False)
    assert agent.state.converged
    assert agent.converged_at is not None
    assert agent.state.tau == 0.0

def test_every_false_bit_decision_is_silent():
    cfg = helpers.fast_config(lambda1=0.3, gamma1=0.01)
    agent = QLearningAgent(cfg)
    run_simulation(cfg, agent, 20_000, theta_p_max=0.12, record_trace=False)
    forced = [d for d in agent.decisions if not d.feedback_bit]
    assert len(forced) > 0
    assert all(d.action == 0 and d.forced for d in forced)
    assert all(not d.forced for d in agent.decisions if d.feedback_bit)

def test_per_attempt_failure_rate_of_solo_primary():
    cfg = helpers.fast_config(lambda1=5.0)
    trace = helpers.run_policy(cfg, silent_policy(cfg.ws), 100_000)
    acc = trace.metrics
    assert acc.attempts_overlap == 0
    # ~17000 attempts, standard error ~0.003
    assert acc.failures_alone / acc.attempts_alone == pytest.approx(cfg.rho, abs=0.012)

def test_silent_secondary_rarely_sees_a_false_bit():
    cfg = helpers.fast_config(lambda1=0.05, gamma1=0.04)
    trace = helpers.run_policy(cfg, silent_policy(cfg.ws), 50_000, theta_p_max=None)
    acc = trace.metrics
    assert acc.primary_completions > 1000
    assert acc.feedback_false_count / acc.primary_completions < 0.02

def test_overlapped_primary_attempts_fail_with_rho_star():
    cfg = helpers.fast_config(lambda1=5.0, rho=0.2, rho_star=0.5)
    trace = helpers.run_policy(cfg, uniform_policy(cfg.ws), 200_000)
    acc = trace.metrics
    assert acc.attempts_overlap > 2000
    assert acc.attempts_alone > 2000
    assert acc.failures_overlap / acc.attempts_overlap == pytest.approx(cfg.rho_star, abs=0.03)
    assert acc.failures_alone / acc.attempts_alone == pytest.approx(cfg.rho, abs=0.03)
