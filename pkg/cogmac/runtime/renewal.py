from typing import NamedTuple
import numpy as np
from cogmac.sim import SimConfig
from cogmac.agent import PolicyVector

# Closed-form renewal-reward throughput of single-user regimes, under the same slot rules as
# the simulator. They serve as independent checks of the slot chain and as quick estimates.
#
# Slot accounting per attempt:
#   primary  : 1 slot sensing its own previous packet + DIFS + counter + packet  (saturated queue)
#   secondary: 1 decision slot + DIFS + counter + packet, or 1 slot for a silent epoch

RenewalResult = NamedTuple("RenewalResult",
    [('throughput', float),          # payload-slots per slot
     ('drop_ratio', float),          # fraction of packets lost after the last attempt
     ('mean_cycle_slots', float)])   # expected slots per renewal cycle

def saturated_primary(cfg:SimConfig) -> RenewalResult:
    """Solo primary that always has a packet waiting (lambda1 -> infinity)."""
    windows = np.asarray(cfg.windows, dtype=float)
    reach = cfg.rho ** np.arange(cfg.max_retry_m) # probability that attempt b happens
    attempt_slots = 1 + cfg.difs_slots + (windows - 1.0) / 2.0 + cfg.packet_slots
    mean_cycle = float(np.dot(reach, attempt_slots))
    drop_ratio = cfg.rho ** cfg.max_retry_m
    payload = (1.0 - drop_ratio) * cfg.packet_slots
    return RenewalResult(payload / mean_cycle, drop_ratio, mean_cycle)

def solo_secondary(cfg:SimConfig, policy:PolicyVector) -> RenewalResult:
    """Secondary running a stationary policy on a channel without primary traffic (lambda1 = 0)."""
    kappa = np.asarray(policy.kappa, dtype=float)
    counters = np.arange(policy.ws, dtype=float) # arm i >= 1 uses counter i-1
    action_slots = np.concatenate(([1.0], 1 + cfg.difs_slots + counters + cfg.packet_slots))
    mean_cycle = float(np.dot(kappa, action_slots))
    payload = float(kappa[1:].sum()) * cfg.packet_slots * (1.0 - cfg.nu)
    return RenewalResult(payload / mean_cycle, cfg.nu, mean_cycle)
