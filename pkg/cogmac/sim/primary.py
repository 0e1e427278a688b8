from __future__ import annotations
from dataclasses import dataclass, replace
from .config import SimConfig
from .errors import ProtocolViolationError
from .model import PrimaryPhase, PrimaryEvent
from .rng import RngStream

# DCF state machine of the primary transmitter.
#
# State (b, c) = (stage, counter). Stage 0 with an empty queue is the idle state (0,0).
# A packet is attempted at most m times: stage b=1..m, counter drawn uniformly from [0, w_b-1].
# Any busy slot seen while counting freezes the counter; counting only resumes after a full
# idle DIFS. Retransmissions and new packets both go through DIFS first.
#
# All functions are pure: they return a new PrimaryState and never mutate their input.

@dataclass(frozen=True, slots=True)
class PrimaryState:
    queue_len:int = 0
    stage:int = 0
    counter:int = 0
    difs_remaining:int = 0
    tx_remaining:int = 0
    phase:PrimaryPhase = PrimaryPhase.IDLE
    # true while a counter still has to be drawn when the current DIFS completes
    # (false after a freeze, which keeps the counter)
    fresh_backoff:bool = False

    def check_invariants(self, cfg:SimConfig):
        if not 0 <= self.queue_len <= cfg.buffer_b:
            raise ProtocolViolationError(f"queue_len {self.queue_len} outside [0, {cfg.buffer_b}].")
        if self.phase == PrimaryPhase.IDLE:
            if self.queue_len != 0 or self.stage != 0 or self.counter != 0:
                raise ProtocolViolationError(f"idle state must be (0,0) with an empty queue: {self}")
        elif not 1 <= self.stage <= cfg.max_retry_m:
            raise ProtocolViolationError(f"stage {self.stage} outside [1, {cfg.max_retry_m}]: {self}")
        if self.phase == PrimaryPhase.BACKOFF and not 0 <= self.counter <= cfg.window(self.stage) - 1:
            raise ProtocolViolationError(f"counter {self.counter} outside window of stage {self.stage}: {self}")
        if self.phase == PrimaryPhase.TRANSMITTING and (self.counter != 0 or self.tx_remaining < 1):
            raise ProtocolViolationError(f"transmitting state must have counter 0 and slots left: {self}")


def idle_state() -> PrimaryState:
    return PrimaryState()

def draw_arrivals(cfg:SimConfig, rng:RngStream) -> int:
    """Number of packets arriving in one slot, Poisson(lambda1)."""
    return rng.arrivals.poisson(cfg.lambda1)

def admit_arrivals(state:PrimaryState, arrived:int, cfg:SimConfig) -> PrimaryState:
    """Adds arrivals to the buffer; whatever does not fit into B is lost."""
    if arrived <= 0:
        return state
    queue_len = min(state.queue_len + arrived, cfg.buffer_b)
    if queue_len == state.queue_len:
        return state
    if state.phase == PrimaryPhase.IDLE:
        return _start_service(queue_len, cfg)
    return replace(state, queue_len=queue_len)

def apply_arrivals(state:PrimaryState, cfg:SimConfig, rng:RngStream) -> PrimaryState:
    return admit_arrivals(state, draw_arrivals(cfg, rng), cfg)

def primary_slot_step(state:PrimaryState, channel_busy_prev:bool, cfg:SimConfig, rng:RngStream) -> tuple[PrimaryState, bool]:
    """Advances DIFS/backoff by one slot. Returns the new state and whether the primary is on the air this slot."""
    phase = state.phase
    if phase == PrimaryPhase.IDLE:
        return state, False
    if phase == PrimaryPhase.TRANSMITTING:
        return state, True

    if phase == PrimaryPhase.DIFS:
        if channel_busy_prev:
            if state.difs_remaining == cfg.difs_slots:
                return state, False
            return replace(state, difs_remaining=cfg.difs_slots), False
        difs_remaining = state.difs_remaining - 1
        if difs_remaining > 0:
            return replace(state, difs_remaining=difs_remaining), False
        counter = state.counter
        if state.fresh_backoff:
            counter = rng.backoff.integer(cfg.window(state.stage))
        return replace(state, phase=PrimaryPhase.BACKOFF, difs_remaining=0, counter=counter, fresh_backoff=False), False

    # backoff
    if channel_busy_prev:
        # freeze: keep the counter, re-arm DIFS
        return replace(state, phase=PrimaryPhase.DIFS, difs_remaining=cfg.difs_slots), False
    if state.counter > 0:
        return replace(state, counter=state.counter - 1), False
    return replace(state, phase=PrimaryPhase.TRANSMITTING, tx_remaining=cfg.packet_slots), True

def consume_tx_slot(state:PrimaryState) -> PrimaryState:
    """Accounts for one slot of airtime; tx_remaining reaching 0 means the packet completes this slot."""
    if state.phase != PrimaryPhase.TRANSMITTING or state.tx_remaining < 1:
        raise ProtocolViolationError(f"cannot consume a transmission slot outside a transmission: {state}")
    return replace(state, tx_remaining=state.tx_remaining - 1)

def on_tx_complete(state:PrimaryState, success:bool, cfg:SimConfig) -> tuple[PrimaryState, frozenset[PrimaryEvent]]:
    """Moves the chain after the final slot of a transmission: next stage, next packet, or idle."""
    if state.phase != PrimaryPhase.TRANSMITTING or state.tx_remaining != 0:
        raise ProtocolViolationError(f"on_tx_complete called outside a completing transmission: {state}")

    if not success and state.stage < cfg.max_retry_m:
        next_state = replace(state,
            phase=PrimaryPhase.DIFS,
            stage=state.stage + 1,
            counter=0,
            difs_remaining=cfg.difs_slots,
            tx_remaining=0,
            fresh_backoff=True)
        return next_state, frozenset()

    events = {PrimaryEvent.PACKET_DELIVERED if success else PrimaryEvent.PACKET_DROPPED}
    queue_len = state.queue_len - 1
    if queue_len > 0:
        events.add(PrimaryEvent.NEW_SERVICE_STARTED)
        return _start_service(queue_len, cfg), frozenset(events)
    return idle_state(), frozenset(events)

def _start_service(queue_len:int, cfg:SimConfig) -> PrimaryState:
    return PrimaryState(
        queue_len=queue_len,
        stage=1,
        counter=0,
        difs_remaining=cfg.difs_slots,
        tx_remaining=0,
        phase=PrimaryPhase.DIFS,
        fresh_backoff=True)
