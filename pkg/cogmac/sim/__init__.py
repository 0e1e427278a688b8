from . errors import *
from . config import SimConfig, ConstraintMode, make_config, config_fields, config_id
from . model import *
from . rng import RngStream, Substream
from . channel import arbitrate_decode, channel_busy
from . primary import (PrimaryState, idle_state, draw_arrivals, admit_arrivals, apply_arrivals, primary_slot_step,
                       consume_tx_slot, on_tx_complete)
from . metrics import MetricsAccumulator, throughput, failure_ratio, feedback_bit
