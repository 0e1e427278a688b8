from __future__ import annotations
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import NamedTuple
from cogmac.sim import *

# Slot mechanics of the secondary transmitter, shared by every policy controller.
#
# At a decision point the controller picks an action:
#   0   -> a silent epoch that lasts the decision slot itself
#   i>0 -> DIFS, then backoff with counter i-1, then one transmission of packet_slots slots
# Backoff freezes on a busy slot and re-arms DIFS, exactly like the primary.
# A secondary packet is tried once; whatever the decode result, the action then completes
# and the controller is back at a decision point in the next slot.

InFlight = NamedTuple("InFlight",
    [('action', ActionId),
     ('x0p_snapshot', float), # running secondary throughput when the action started
     ('forced', bool)])

@dataclass(frozen=True, slots=True)
class MacState:
    phase:SecondaryPhase = SecondaryPhase.DECIDING
    counter:int = 0
    difs_remaining:int = 0
    tx_remaining:int = 0
    in_flight:InFlight|None = None
    last_feedback_bit:bool = True


def begin_action(mac:MacState, action:ActionId, forced:bool, x0p:float, cfg:SimConfig) -> MacState:
    if mac.phase != SecondaryPhase.DECIDING:
        raise ProtocolViolationError(f"cannot start an action outside a decision point: {mac}")
    if not 0 <= action <= cfg.ws:
        raise ValueError(f"action {action} outside [0, {cfg.ws}].")
    in_flight = InFlight(action, x0p, forced)
    if action == 0:
        return replace(mac, phase=SecondaryPhase.SILENT_EPOCH, in_flight=in_flight)
    return replace(mac,
        phase=SecondaryPhase.DIFS,
        counter=action - 1,
        difs_remaining=cfg.difs_slots,
        tx_remaining=0,
        in_flight=in_flight)

def advance_mac(mac:MacState, channel_busy_prev:bool, cfg:SimConfig) -> tuple[MacState, bool]:
    """One slot of DIFS/backoff/transmission progress outside a decision slot."""
    phase = mac.phase
    if phase == SecondaryPhase.TRANSMITTING:
        return mac, True
    if phase == SecondaryPhase.DIFS:
        if channel_busy_prev:
            return replace(mac, difs_remaining=cfg.difs_slots), False
        difs_remaining = mac.difs_remaining - 1
        if difs_remaining > 0:
            return replace(mac, difs_remaining=difs_remaining), False
        return replace(mac, phase=SecondaryPhase.BACKOFF, difs_remaining=0), False
    if phase == SecondaryPhase.BACKOFF:
        if channel_busy_prev:
            return replace(mac, phase=SecondaryPhase.DIFS, difs_remaining=cfg.difs_slots), False
        if mac.counter > 0:
            return replace(mac, counter=mac.counter - 1), False
        return replace(mac, phase=SecondaryPhase.TRANSMITTING, tx_remaining=cfg.packet_slots), True
    raise ProtocolViolationError(f"advance_mac called in phase {phase}.")

def consume_mac_tx_slot(mac:MacState) -> MacState:
    if mac.phase != SecondaryPhase.TRANSMITTING or mac.tx_remaining < 1:
        raise ProtocolViolationError(f"cannot consume a transmission slot outside a transmission: {mac}")
    return replace(mac, tx_remaining=mac.tx_remaining - 1)

def action_completes(mac:MacState) -> bool:
    """True at the end of the slot in which the in-flight action finishes."""
    return (mac.phase == SecondaryPhase.SILENT_EPOCH
            or (mac.phase == SecondaryPhase.TRANSMITTING and mac.tx_remaining == 0))

def finish_action(mac:MacState) -> tuple[MacState, InFlight]:
    if not action_completes(mac) or mac.in_flight is None:
        raise ProtocolViolationError(f"no action completes in this state: {mac}")
    return MacState(last_feedback_bit=mac.last_feedback_bit), mac.in_flight


class AgentController(ABC):
    """A secondary policy bound to a single run. The slot loop drives it through this interface."""
    cfg:SimConfig
    state:object # any frozen state carrying a 'mac' field
    voluntary_counts:list[int]
    forced_counts:list[int]
    decisions:list[DecisionRecord]|None
    reward_log:list[RewardRecord]

    def __init__(self, cfg:SimConfig, record_decisions:bool=True):
        self.cfg = cfg
        self.voluntary_counts = [0] * (cfg.ws + 1)
        self.forced_counts = [0] * (cfg.ws + 1)
        self.decisions = [] if record_decisions else None
        self.reward_log = []

    @property
    def mac(self) -> MacState:
        return self.state.mac

    def _set_mac(self, mac:MacState):
        self.state = replace(self.state, mac=mac)

    @abstractmethod
    def slot_step(self, channel_busy_prev:bool, rng:RngStream, slot:int, x0_now:float) -> bool:
        """Advances the controller by one slot. Returns whether the secondary is on the air.

        x0_now is the running secondary throughput at the start of the slot; it is the
        snapshot an action started in this slot is measured against.
        """
        pass

    def consume_tx_slot(self):
        self._set_mac(consume_mac_tx_slot(self.mac))

    def completes_this_slot(self) -> bool:
        return action_completes(self.mac)

    def deliver_feedback(self, bit:bool):
        self._set_mac(replace(self.mac, last_feedback_bit=bit))

    def complete_action(self, x0n:float) -> InFlight:
        mac, in_flight = finish_action(self.mac)
        self._set_mac(mac)
        return in_flight

    def _record_decision(self, slot:int, action:ActionId, forced:bool, bit:bool):
        if forced:
            self.forced_counts[action] += 1
        else:
            self.voluntary_counts[action] += 1
        if self.decisions is not None:
            self.decisions.append(DecisionRecord(slot, action, forced, bit))

    @property
    def total_decisions(self) -> int:
        return sum(self.voluntary_counts) + sum(self.forced_counts)
