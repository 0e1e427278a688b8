import collections
import pytest
from scipy.stats import chisquare
from cogmac.sim import *
import helpers_sim as helpers

def test_zero_rate_leaves_state_unchanged():
    cfg = SimConfig(lambda1=0.0)
    rng = RngStream(0)
    state = PrimaryState(queue_len=2, stage=1, counter=2, phase=PrimaryPhase.BACKOFF)
    for _ in range(1000):
        assert apply_arrivals(state, cfg, rng) == state
    assert apply_arrivals(idle_state(), cfg, rng) == idle_state()

def test_first_arrival_starts_service():
    cfg = SimConfig()
    state = admit_arrivals(idle_state(), 1, cfg)
    assert state.phase == PrimaryPhase.DIFS
    assert state.queue_len == 1
    assert state.stage == 1
    assert state.difs_remaining == cfg.difs_slots
    state.check_invariants(cfg)

def test_full_buffer_drops_overflow():
    cfg = SimConfig(buffer_b=4)
    state = PrimaryState(queue_len=4, stage=1, counter=1, phase=PrimaryPhase.BACKOFF)
    assert admit_arrivals(state, 3, cfg) == state
    state = PrimaryState(queue_len=3, stage=1, counter=1, phase=PrimaryPhase.BACKOFF)
    assert admit_arrivals(state, 3, cfg).queue_len == 4

def test_backoff_decrements_on_idle_channel():
    cfg = SimConfig()
    state = PrimaryState(queue_len=1, stage=2, counter=3, phase=PrimaryPhase.BACKOFF)
    state, wants_tx = primary_slot_step(state, False, cfg, RngStream(0))
    assert state.counter == 2
    assert state.phase == PrimaryPhase.BACKOFF
    assert not wants_tx

def test_backoff_freezes_on_busy_channel():
    cfg = SimConfig()
    state = PrimaryState(queue_len=1, stage=2, counter=3, phase=PrimaryPhase.BACKOFF)
    state, wants_tx = primary_slot_step(state, True, cfg, RngStream(0))
    assert state.counter == 3
    assert state.phase == PrimaryPhase.DIFS
    assert state.difs_remaining == cfg.difs_slots
    assert not wants_tx
    # the frozen counter survives the DIFS, no new draw
    state, _ = helpers.step_idle(state, cfg.difs_slots, cfg, RngStream(0))
    assert state.phase == PrimaryPhase.BACKOFF
    assert state.counter == 3

def test_busy_channel_restarts_difs():
    cfg = SimConfig(difs_slots=3)
    state = PrimaryState(queue_len=1, stage=1, difs_remaining=1, phase=PrimaryPhase.DIFS, fresh_backoff=True)
    state, _ = primary_slot_step(state, True, cfg, RngStream(0))
    assert state.phase == PrimaryPhase.DIFS
    assert state.difs_remaining == 3

def test_counter_zero_transmits():
    cfg = SimConfig(packet_slots=2)
    state = PrimaryState(queue_len=1, stage=1, counter=0, phase=PrimaryPhase.BACKOFF)
    state, wants_tx = primary_slot_step(state, False, cfg, RngStream(0))
    assert wants_tx
    assert state.phase == PrimaryPhase.TRANSMITTING
    assert state.tx_remaining == 2
    state = consume_tx_slot(state)
    state, wants_tx = primary_slot_step(state, False, cfg, RngStream(0))
    assert wants_tx
    state = consume_tx_slot(state)
    assert state.tx_remaining == 0
    with pytest.raises(ProtocolViolationError):
        consume_tx_slot(state)

def test_difs_completion_draws_uniform_counter():
    cfg = SimConfig()
    rng = RngStream(2024)
    state = PrimaryState(queue_len=1, stage=1, difs_remaining=1, phase=PrimaryPhase.DIFS, fresh_backoff=True)
    counts = collections.Counter()
    n = 100_000
    for _ in range(n):
        next_state, wants_tx = primary_slot_step(state, False, cfg, rng)
        assert next_state.phase == PrimaryPhase.BACKOFF
        assert not wants_tx
        counts[next_state.counter] += 1
    assert set(counts) == {0, 1, 2, 3}
    _, p_value = chisquare([counts[c] for c in range(4)])
    assert p_value > 0.01

def test_last_attempt_failure_drops_packet():
    cfg = SimConfig()
    state, events = on_tx_complete(helpers.transmitting_state(stage=4, queue_len=2), False, cfg)
    assert events == {PrimaryEvent.PACKET_DROPPED, PrimaryEvent.NEW_SERVICE_STARTED}
    assert state.queue_len == 1
    assert state.stage == 1
    assert state.phase == PrimaryPhase.DIFS

def test_failure_moves_to_next_stage_with_its_window():
    cfg = SimConfig()
    rng = RngStream(5)
    counts = collections.Counter()
    n = 40_000
    for _ in range(n):
        state, events = on_tx_complete(helpers.transmitting_state(stage=2), False, cfg)
        assert events == frozenset()
        assert state.stage == 3
        assert state.queue_len == 1
        state, on_air = helpers.step_idle(state, cfg.difs_slots, cfg, rng)
        assert not any(on_air)
        assert state.phase == PrimaryPhase.BACKOFF
        counts[state.counter] += 1
    assert set(counts) == set(range(8))
    _, p_value = chisquare([counts[c] for c in range(8)])
    assert p_value > 0.01

def test_success_with_empty_queue_returns_to_idle():
    cfg = SimConfig()
    state, events = on_tx_complete(helpers.transmitting_state(stage=1), True, cfg)
    assert events == {PrimaryEvent.PACKET_DELIVERED}
    assert state == idle_state()
    assert (state.stage, state.counter) == (0, 0)

def test_on_tx_complete_outside_transmission_raises():
    cfg = SimConfig()
    with pytest.raises(ProtocolViolationError):
        on_tx_complete(idle_state(), True, cfg)
    unfinished = PrimaryState(queue_len=1, stage=1, tx_remaining=1, phase=PrimaryPhase.TRANSMITTING)
    with pytest.raises(ProtocolViolationError):
        on_tx_complete(unfinished, True, cfg)

def test_check_invariants():
    cfg = SimConfig()
    with pytest.raises(ProtocolViolationError):
        PrimaryState(queue_len=5, stage=1, phase=PrimaryPhase.DIFS).check_invariants(cfg)
    with pytest.raises(ProtocolViolationError):
        PrimaryState(queue_len=1, stage=1, counter=4, phase=PrimaryPhase.BACKOFF).check_invariants(cfg)
    with pytest.raises(ProtocolViolationError):
        PrimaryState(queue_len=1, stage=5, phase=PrimaryPhase.DIFS).check_invariants(cfg)
    PrimaryState(queue_len=1, stage=4, counter=9, phase=PrimaryPhase.BACKOFF).check_invariants(cfg)
