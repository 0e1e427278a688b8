import logging
from functools import lru_cache
from cogmac.sim import *
from cogmac.agent import silent_policy, stationary_executor
from .simulation import run_simulation

logger = logging.getLogger(__name__)

# theta_P^max: the primary's long-run throughput with the channel to itself.
# Estimated by a solo-primary run (secondary permanently silent) with a dedicated seed,
# and cached on the fields that influence a solo primary.

def theta_p_max(cfg:SimConfig) -> float:
    return _theta_p_max_cached(_calibration_config(cfg))

def _calibration_config(cfg:SimConfig) -> SimConfig:
    # collapse everything a solo primary does not depend on, so sweeps over seeds, gammas,
    # or learner knobs share one calibration
    return SimConfig(
        lambda1=cfg.lambda1,
        buffer_b=cfg.buffer_b,
        max_retry_m=cfg.max_retry_m,
        windows=cfg.windows,
        ws=cfg.ws,
        rho=cfg.rho,
        rho_star=cfg.rho_star,
        packet_slots=cfg.packet_slots,
        difs_slots=cfg.difs_slots,
        seed=cfg.calibration_seed,
        calibration_slots=cfg.calibration_slots,
        calibration_seed=cfg.calibration_seed)

@lru_cache(maxsize=256)
def _theta_p_max_cached(solo_cfg:SimConfig) -> float:
    if solo_cfg.lambda1 == 0.0:
        return 0.0
    logger.info(f"calibrating theta_p_max: lambda1={solo_cfg.lambda1}, slots={solo_cfg.calibration_slots}, seed={solo_cfg.seed}")
    agent = stationary_executor(silent_policy(solo_cfg.ws), solo_cfg, record_decisions=False)
    trace = run_simulation(solo_cfg, agent, solo_cfg.calibration_slots, theta_p_max=0.0, record_trace=False)
    value = trace.metrics.theta_p
    logger.info(f"theta_p_max={value:.6f} for lambda1={solo_cfg.lambda1}")
    return value
