from .config import SimConfig
from .rng import RngStream

# Per-slot arbitration of the shared channel.
# Decoding outcomes depend only on whether the other user was on the air:
#   primary fails with rho when alone, rho* when overlapped
#   secondary fails with nu when alone, nu* when overlapped

def channel_busy(primary_tx:bool, secondary_tx:bool) -> bool:
    return primary_tx or secondary_tx

def arbitrate_decode(
        primary_tx:bool,
        secondary_tx:bool,
        cfg:SimConfig,
        rng:RngStream,
        primary_overlapped:bool|None=None,
        secondary_overlapped:bool|None=None,
        ) -> tuple[bool|None, bool|None]:
    """Draws decode results for the packets that complete in this slot.

    primary_tx/secondary_tx mark a packet finishing its final slot. By default both packets
    count as overlapped when both finish together; multi-slot packets pass the overlap
    they accumulated over their whole airtime instead.
    Each user draws from its own decode substream.
    """
    if primary_overlapped is None:
        primary_overlapped = primary_tx and secondary_tx
    if secondary_overlapped is None:
        secondary_overlapped = primary_tx and secondary_tx

    primary_ok = None
    secondary_ok = None
    if primary_tx:
        fail_prob = cfg.rho_star if primary_overlapped else cfg.rho
        primary_ok = not rng.primary_decode.bernoulli(fail_prob)
    if secondary_tx:
        fail_prob = cfg.nu_star if secondary_overlapped else cfg.nu
        secondary_ok = not rng.secondary_decode.bernoulli(fail_prob)
    return primary_ok, secondary_ok
