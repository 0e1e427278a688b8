from enum import Enum
from typing import NamedTuple

# Type aliases and small records that describe what happens on the channel.

class PrimaryPhase(str, Enum):
    IDLE = "Idle"
    DIFS = "Difs"
    BACKOFF = "Backoff"
    TRANSMITTING = "Transmitting"

class SecondaryPhase(str, Enum):
    DECIDING = "Deciding"
    DIFS = "Difs"
    BACKOFF = "Backoff"
    TRANSMITTING = "Transmitting"
    SILENT_EPOCH = "SilentEpoch"

class PrimaryEvent(str, Enum):
    PACKET_DELIVERED = "PacketDelivered"
    PACKET_DROPPED = "PacketDropped"
    NEW_SERVICE_STARTED = "NewServiceStarted"

ActionId = int # 0 = keep silent, i >= 1 = backoff counter i-1

SlotOutcome = NamedTuple("SlotOutcome",
    [('primary_transmitted', bool),
     ('secondary_transmitted', bool),
     ('primary_success', bool | None), # only set on the final slot of a primary packet
     ('secondary_success', bool | None),
     ('channel_busy', bool),
     ('slot_index', int)])

TraceRecord = NamedTuple("TraceRecord",
    [('outcome', SlotOutcome),
     ('feedback_bit', bool), # bit latched by the secondary at the end of the slot
     ('theta_p', float),
     ('theta_s', float)])

# one entry per completed secondary action that updated the reward vector
RewardRecord = NamedTuple("RewardRecord",
    [('t', int),
     ('action', ActionId),
     ('cost', float),
     ('rewards', tuple[float, ...])])

# one entry per secondary decision point
DecisionRecord = NamedTuple("DecisionRecord",
    [('slot', int),
     ('action', ActionId),
     ('forced', bool),
     ('feedback_bit', bool)])
