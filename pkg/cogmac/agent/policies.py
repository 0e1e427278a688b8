from __future__ import annotations
from dataclasses import dataclass, field
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator
from cogmac.sim import *
from .controller import AgentController, MacState, begin_action, advance_mac

# Stationary randomized policies over {silent, counter 0, ..., counter w_s-1}.

_SUM_TOLERANCE = 1e-9

class PolicyVector(BaseModel):
    """kappa[0] is the probability of keeping silent, kappa[i] the probability of backoff counter i-1."""
    model_config = ConfigDict(frozen=True)

    kappa:tuple[float, ...]

    @field_validator("kappa")
    @classmethod
    def _check_distribution(cls, kappa:tuple[float, ...]) -> tuple[float, ...]:
        if len(kappa) < 2:
            raise ValueError(f"a policy vector needs at least 2 entries (silence and one counter), got {len(kappa)}.")
        if any(k < 0.0 for k in kappa):
            raise ValueError(f"policy entries must be non-negative, got {list(kappa)}.")
        if abs(sum(kappa) - 1.0) > _SUM_TOLERANCE:
            raise ValueError(f"policy entries must sum to 1, got {sum(kappa)}.")
        return kappa

    @property
    def ws(self) -> int:
        return len(self.kappa) - 1

    def __len__(self) -> int:
        return len(self.kappa)


def uniform_policy(ws:int) -> PolicyVector:
    """The blind generic strategy: never idle, counter picked uniformly, constraint ignored."""
    if ws < 1:
        raise ValueError(f"ws must be >= 1, got {ws}.")
    return PolicyVector(kappa=(0.0,) + (1.0 / ws,) * ws)

def silent_policy(ws:int) -> PolicyVector:
    if ws < 1:
        raise ValueError(f"ws must be >= 1, got {ws}.")
    return PolicyVector(kappa=(1.0,) + (0.0,) * ws)


@dataclass(frozen=True, slots=True)
class StationaryState:
    mac:MacState = field(default_factory=MacState)


class StationaryAgent(AgentController):
    """Samples every action from a fixed kappa and executes it with the secondary slot mechanics.
    Ignores the feedback bit and never learns."""
    policy:PolicyVector
    state:StationaryState
    _probabilities:np.ndarray
    _fixed_action:ActionId|None

    def __init__(self, policy:PolicyVector, cfg:SimConfig, record_decisions:bool=True):
        if policy.ws != cfg.ws:
            raise InvalidConfigError(f"policy vector has {len(policy)} entries, but ws={cfg.ws} needs {cfg.ws + 1}.")
        super().__init__(cfg, record_decisions)
        self.policy = policy
        self.state = StationaryState()
        self._probabilities = np.asarray(policy.kappa, dtype=float)
        # deterministic arms need no draw at all
        nonzero = np.flatnonzero(self._probabilities)
        self._fixed_action = int(nonzero[0]) if len(nonzero) == 1 else None

    def sample_action(self, rng:RngStream) -> ActionId:
        if self._fixed_action is not None:
            return self._fixed_action
        return rng.exploration.choice(self._probabilities)

    def slot_step(self, channel_busy_prev:bool, rng:RngStream, slot:int, x0_now:float) -> bool:
        mac = self.mac
        if mac.phase == SecondaryPhase.DECIDING:
            action = self.sample_action(rng)
            self._record_decision(slot, action, False, mac.last_feedback_bit)
            self._set_mac(begin_action(mac, action, False, x0_now, self.cfg))
            return False
        mac, wants_tx = advance_mac(mac, channel_busy_prev, self.cfg)
        self._set_mac(mac)
        return wants_tx


def stationary_executor(kappa:PolicyVector, cfg:SimConfig, record_decisions:bool=True) -> StationaryAgent:
    return StationaryAgent(kappa, cfg, record_decisions)
