from __future__ import annotations
import logging
from dataclasses import dataclass
import numpy as np
from cogmac.sim import *
from cogmac.agent import AgentController

logger = logging.getLogger(__name__)

# The slotted main loop. Each slot:
#   1. primary arrivals
#   2. both nodes react to the previous slot's channel state (DIFS, backoff, transmission)
#   3. decode draws for packets finishing this slot
#   4. metrics
#   5. feedback bit recomputed at every primary packet completion, latched by the secondary
#   6. the secondary closes its completed action against the updated throughput
# A run is a pure function of (cfg, agent type, horizon); all randomness comes from cfg.seed.

@dataclass
class SimulationTrace:
    cfg:SimConfig
    horizon_slots:int
    records:list[TraceRecord] | None
    metrics:MetricsAccumulator
    final_primary:PrimaryState
    agent:AgentController

    def column(self, name:str) -> np.ndarray:
        """One trace field as an array, e.g. 'theta_s', 'feedback_bit', 'primary_tx'."""
        if self.records is None:
            raise ValueError("the run did not record a trace.")
        if name in TraceRecord._fields:
            return np.array([getattr(r, name) for r in self.records])
        return np.array([getattr(r.outcome, name) for r in self.records])


def run_simulation(
        cfg:SimConfig,
        agent:AgentController,
        horizon_slots:int,
        theta_p_max:float|None=None,
        record_trace:bool=True,
        ) -> SimulationTrace:
    """Runs one simulation of horizon_slots slots.

    theta_p_max is the solo-primary reference throughput used by the feedback bit;
    when omitted it is calibrated (and cached) for this config.
    """
    if horizon_slots < 1:
        raise ValueError(f"horizon_slots must be >= 1, got {horizon_slots}.")
    if not isinstance(agent, AgentController):
        raise TypeError(f"agent must be an AgentController, got {type(agent)}")
    if theta_p_max is None:
        from .calibration import theta_p_max as calibrate
        theta_p_max = calibrate(cfg)

    rng = RngStream(cfg.seed)
    acc = MetricsAccumulator(theta_p_max=theta_p_max)
    primary = idle_state()
    records:list[TraceRecord]|None = [] if record_trace else None
    packet_slots = cfg.packet_slots

    busy_prev = False
    primary_overlapped = False
    secondary_overlapped = False
    for slot in range(horizon_slots):
        # 1. arrivals
        arrived = draw_arrivals(cfg, rng)
        if arrived > 0:
            queue_before = primary.queue_len
            primary = admit_arrivals(primary, arrived, cfg)
            admitted = primary.queue_len - queue_before
            acc.arrivals_admitted += admitted
            acc.arrivals_dropped += arrived - admitted

        # 2. channel access
        was_transmitting = primary.phase == PrimaryPhase.TRANSMITTING
        primary, primary_tx = primary_slot_step(primary, busy_prev, cfg, rng)
        if primary_tx and not was_transmitting:
            primary_overlapped = False
            if primary.stage == 1:
                acc.x3_count += 1

        x0_now = acc.theta_s
        was_transmitting = agent.mac.phase == SecondaryPhase.TRANSMITTING
        secondary_tx = agent.slot_step(busy_prev, rng, slot, x0_now)
        if secondary_tx and not was_transmitting:
            secondary_overlapped = False
        if primary_tx and secondary_tx:
            primary_overlapped = True
            secondary_overlapped = True
        busy = channel_busy(primary_tx, secondary_tx)

        # 3. decode packets that finish now
        primary_done = False
        if primary_tx:
            primary = consume_tx_slot(primary)
            primary_done = primary.tx_remaining == 0
        secondary_done = False
        if secondary_tx:
            agent.consume_tx_slot()
            secondary_done = agent.mac.tx_remaining == 0
        primary_ok, secondary_ok = arbitrate_decode(
            primary_done, secondary_done, cfg, rng,
            primary_overlapped=primary_overlapped,
            secondary_overlapped=secondary_overlapped)

        # 4. metrics
        acc.slots += 1
        events:frozenset[PrimaryEvent] = frozenset()
        if primary_done:
            acc.record_primary_attempt(primary_ok, primary_overlapped, packet_slots)
            primary, events = on_tx_complete(primary, primary_ok, cfg)
            if PrimaryEvent.PACKET_DROPPED in events:
                acc.x2_count += 1
        if secondary_done:
            acc.record_secondary_attempt(secondary_ok, packet_slots)

        # 5. feedback piggybacked on the completion of a primary packet
        if PrimaryEvent.PACKET_DELIVERED in events or PrimaryEvent.PACKET_DROPPED in events:
            agent.deliver_feedback(acc.evaluate_feedback(cfg))

        # 6. secondary action bookkeeping
        if agent.completes_this_slot():
            agent.complete_action(acc.theta_s)

        if records is not None:
            outcome = SlotOutcome(primary_tx, secondary_tx, primary_ok, secondary_ok, busy, slot)
            records.append(TraceRecord(outcome, agent.mac.last_feedback_bit, acc.theta_p, acc.theta_s))
        busy_prev = busy

    acc.check_finite()
    logger.debug(f"run finished: slots={acc.slots}, seed={cfg.seed}, theta_s={acc.theta_s:.4f}, theta_p={acc.theta_p:.4f}, "
                f"theta_p_max={acc.theta_p_max:.4f}, failure_ratio={failure_ratio(acc):.4f}")
    return SimulationTrace(
        cfg=cfg,
        horizon_slots=horizon_slots,
        records=records,
        metrics=acc,
        final_primary=primary,
        agent=agent)
