from cogmac.sim import *

def transmitting_state(stage:int, queue_len:int=1) -> PrimaryState:
    """A primary whose single-slot packet finishes in the current slot."""
    return PrimaryState(
        queue_len=queue_len,
        stage=stage,
        counter=0,
        difs_remaining=0,
        tx_remaining=0,
        phase=PrimaryPhase.TRANSMITTING)

def step_idle(state:PrimaryState, slots:int, cfg:SimConfig, rng:RngStream) -> tuple[PrimaryState, list[bool]]:
    on_air = []
    for _ in range(slots):
        state, wants_tx = primary_slot_step(state, False, cfg, rng)
        on_air.append(wants_tx)
    return state, on_air

def accumulator(slots:int, p_delivered:int, theta_p_max:float, x2:int=0, x3:int=0) -> MetricsAccumulator:
    return MetricsAccumulator(
        slots=slots,
        p_delivered_slots=p_delivered,
        theta_p_max=theta_p_max,
        x2_count=x2,
        x3_count=x3)
