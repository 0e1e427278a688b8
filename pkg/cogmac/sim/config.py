from __future__ import annotations
import hashlib
import json
from enum import Enum
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from .errors import InvalidConfigError

# Scenario parameters shared by every layer of the simulator.
# The defaults reproduce the evaluation setup: B=4, m=4, windows 4/6/8/10, w_s=3,
# rho=0.2, rho*=0.5, nu=nu*=0.3, lambda1=0.05, gamma1=0.04.

class ConstraintMode(str, Enum):
    THROUGHPUT_LOSS = "ThroughputLoss"
    FAILURE_PROB = "FailureProb"

class SimConfig(BaseModel):
    """All parameters of one simulated scenario. Immutable and hashable, so it can key caches."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    lambda1:float = Field(default=0.05, ge=0.0)
    buffer_b:int = Field(default=4, ge=1)
    max_retry_m:int = Field(default=4, ge=1)
    windows:tuple[int, ...] = (4, 6, 8, 10)
    ws:int = Field(default=3, ge=1)
    rho:float = Field(default=0.2, ge=0.0, le=1.0)
    rho_star:float = Field(default=0.5, ge=0.0, le=1.0)
    nu:float = Field(default=0.3, ge=0.0, le=1.0)
    nu_star:float = Field(default=0.3, ge=0.0, le=1.0)
    gamma1:float = Field(default=0.04, ge=0.0)
    gamma2:float = Field(default=0.1, ge=0.0, le=1.0)
    constraint_mode:ConstraintMode = ConstraintMode.THROUGHPUT_LOSS
    packet_slots:int = Field(default=1, ge=1)
    difs_slots:int = Field(default=2, ge=1)
    seed:int = Field(default=0, ge=0)
    # secondary arrival rate, metadata only: the secondary is always backlogged
    lambda2:float = Field(default=1.0, ge=0.0)
    # packet size L in bits, metadata only
    packet_bits:int = Field(default=1024, ge=1)

    # learner knobs the algorithm leaves open
    tau0:float = Field(default=0.3, ge=0.0, le=1.0)
    tau_t0:float = Field(default=200.0, gt=0.0)
    convergence_window:int = Field(default=50, ge=2)
    convergence_tol:float = Field(default=1e-5, gt=0.0)
    update_on_forced_silence:bool = False
    gamma_discount:float = Field(default=0.0, ge=0.0, lt=1.0)

    # solo-primary calibration run behind theta_p_max
    calibration_slots:int = Field(default=1_000_000, ge=1)
    calibration_seed:int = Field(default=7919, ge=0)

    @model_validator(mode="after")
    def _check_consistency(self) -> SimConfig:
        if len(self.windows) != self.max_retry_m:
            raise ValueError(f"windows must have exactly max_retry_m={self.max_retry_m} entries, got {len(self.windows)}.")
        if any(w < 1 for w in self.windows):
            raise ValueError(f"all backoff windows must be >= 1, got {list(self.windows)}.")
        if self.rho_star < self.rho:
            raise ValueError(f"rho_star ({self.rho_star}) must be >= rho ({self.rho}).")
        if self.nu_star < self.nu:
            raise ValueError(f"nu_star ({self.nu_star}) must be >= nu ({self.nu}).")
        return self

    def window(self, stage:int) -> int:
        """Backoff window w_b for a 1-based stage."""
        return self.windows[stage - 1]

    def with_updates(self, **updates) -> SimConfig:
        """Returns a validated copy with the given fields replaced."""
        return make_config(**{**self.model_dump(), **updates})


def make_config(**values) -> SimConfig:
    try:
        return SimConfig(**values)
    except ValidationError as e:
        raise InvalidConfigError(str(e)) from e

def config_fields() -> list[str]:
    return list(SimConfig.model_fields.keys())

def config_id(cfg:SimConfig) -> str:
    """Stable identity of a config: sha256 of its canonical json."""
    canonical = json.dumps(cfg.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
