from __future__ import annotations
import logging
from dataclasses import dataclass, field, replace
import numpy as np
from cogmac.sim import *
from .controller import AgentController, InFlight, MacState, begin_action, advance_mac, finish_action

logger = logging.getLogger(__name__)

# Stateless Q-learning of the secondary user.
#
# The learner cannot observe the primary's state, so the action-value update
#   R(u) <- (1 - a_t) R(u) + a_t (c_t + gamma * max_u' R(u'))
# collapses to R(u) <- (1 - a) R(u) + a c_t. The step size a = 1/n counts the completions
# of action u, so R(u) is the sample average of its costs. gamma is kept as a knob, 0 by default.
#
# The cost of an action is the change of the running secondary throughput between the start
# and the completion of the action. Actions forced by a false feedback bit are not updates
# of the learner unless 'update_on_forced_silence' is set.

@dataclass(frozen=True, slots=True)
class RewardVector:
    r:tuple[float, ...]
    counts:tuple[int, ...]

    @classmethod
    def zeros(cls, ws:int) -> RewardVector:
        return cls(r=(0.0,) * (ws + 1), counts=(0,) * (ws + 1))

    def __len__(self) -> int:
        return len(self.r)


@dataclass(frozen=True, slots=True)
class AgentState:
    rewards:RewardVector
    t:int = 0
    tau:float = 0.0
    mac:MacState = field(default_factory=MacState)
    gamma_discount:float = 0.0
    converged:bool = False
    # last completed-action reward snapshots, at most convergence_window of them
    history:tuple[tuple[float, ...], ...] = ()

    @classmethod
    def initial(cls, cfg:SimConfig) -> AgentState:
        return cls(
            rewards=RewardVector.zeros(cfg.ws),
            t=0,
            tau=exploration_schedule(0, cfg),
            gamma_discount=cfg.gamma_discount)

    @property
    def phase(self) -> SecondaryPhase:
        return self.mac.phase

    @property
    def in_flight(self) -> InFlight|None:
        return self.mac.in_flight

    @property
    def last_feedback_bit(self) -> bool:
        return self.mac.last_feedback_bit


def alpha(t:int) -> float:
    if t < 1:
        raise ValueError(f"step size is defined for t >= 1, got {t}.")
    return 1.0 / t

def compute_cost(x0n:float, x0p:float) -> float:
    return x0n - x0p

def q_update(rewards:RewardVector, u:ActionId, c:float, t:int, gamma:float=0.0) -> RewardVector:
    a = alpha(t)
    target = c
    if gamma > 0.0:
        target += gamma * max(rewards.r)
    r = list(rewards.r)
    r[u] = (1.0 - a) * r[u] + a * target
    counts = list(rewards.counts)
    counts[u] += 1
    return RewardVector(r=tuple(r), counts=tuple(counts))

def exploration_schedule(t:int, cfg:SimConfig, converged:bool=False) -> float:
    """tau_t = tau0 / (1 + t/T0), switched off for good once the rewards converged."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}.")
    if converged:
        return 0.0
    return cfg.tau0 / (1.0 + t / cfg.tau_t0)

def convergence_detected(rewards_history:tuple[tuple[float, ...], ...]|list, window:int=50, tol:float=1e-5) -> bool:
    """True iff no reward entry moved by tol or more across the last 'window' snapshots."""
    if len(rewards_history) < window:
        return False
    snapshots = np.asarray(rewards_history[-window:], dtype=float)
    drift = snapshots.max(axis=0) - snapshots.min(axis=0)
    return bool(drift.max() < tol)

def choose_action(state:AgentState, constraint_ok:bool, rng:RngStream) -> ActionId:
    if not constraint_ok:
        return 0
    if state.tau > 0.0 and rng.exploration.uniform() < state.tau:
        return rng.exploration.integer(len(state.rewards))
    # np.argmax returns the lowest index among ties
    return int(np.argmax(state.rewards.r))

def secondary_slot_step(state:AgentState, channel_busy_prev:bool, cfg:SimConfig, rng:RngStream, x0_now:float=0.0) -> tuple[AgentState, bool]:
    mac = state.mac
    if mac.phase == SecondaryPhase.DECIDING:
        constraint_ok = mac.last_feedback_bit
        u = choose_action(state, constraint_ok, rng)
        mac = begin_action(mac, u, not constraint_ok, x0_now, cfg)
        return replace(state, mac=mac), False
    mac, wants_tx = advance_mac(mac, channel_busy_prev, cfg)
    return replace(state, mac=mac), wants_tx

def complete_secondary_action(state:AgentState, x0n:float, cfg:SimConfig) -> tuple[AgentState, RewardRecord|None]:
    """Closes the in-flight action: computes its cost and, for learner choices, updates the rewards."""
    mac, in_flight = finish_action(state.mac)
    state = replace(state, mac=mac)
    if in_flight.forced and not cfg.update_on_forced_silence:
        return state, None

    cost = compute_cost(x0n, in_flight.x0p_snapshot)
    t = state.t + 1
    # the step size counts completions of this action; t (all updates) drives exploration
    n_action = state.rewards.counts[in_flight.action] + 1
    rewards = q_update(state.rewards, in_flight.action, cost, n_action, state.gamma_discount)
    history = (state.history + (rewards.r,))[-cfg.convergence_window:]
    converged = state.converged or convergence_detected(history, cfg.convergence_window, cfg.convergence_tol)
    state = replace(state,
        rewards=rewards,
        t=t,
        tau=exploration_schedule(t, cfg, converged),
        converged=converged,
        history=history)
    return state, RewardRecord(t, in_flight.action, cost, rewards.r)


class QLearningAgent(AgentController):
    """The learning secondary user, driven only by the primary's feedback bit."""
    state:AgentState
    converged_at:int|None

    def __init__(self, cfg:SimConfig, record_decisions:bool=True):
        super().__init__(cfg, record_decisions)
        self.state = AgentState.initial(cfg)
        self.converged_at = None

    def slot_step(self, channel_busy_prev:bool, rng:RngStream, slot:int, x0_now:float) -> bool:
        deciding = self.mac.phase == SecondaryPhase.DECIDING
        bit = self.mac.last_feedback_bit
        self.state, wants_tx = secondary_slot_step(self.state, channel_busy_prev, self.cfg, rng, x0_now)
        if deciding:
            in_flight = self.state.mac.in_flight
            self._record_decision(slot, in_flight.action, in_flight.forced, bit)
        return wants_tx

    def complete_action(self, x0n:float) -> InFlight:
        in_flight = self.mac.in_flight
        was_converged = self.state.converged
        self.state, record = complete_secondary_action(self.state, x0n, self.cfg)
        if record is not None:
            self.reward_log.append(record)
        if self.state.converged and not was_converged:
            self.converged_at = self.state.t
            logger.info(f"rewards converged after {self.state.t} completed actions: {[round(r, 6) for r in self.state.rewards.r]}")
        return in_flight

    @property
    def rewards(self) -> RewardVector:
        return self.state.rewards
