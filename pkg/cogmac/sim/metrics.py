from __future__ import annotations
import math
from dataclasses import dataclass, replace
from .config import SimConfig, ConstraintMode
from .errors import MetricError

# Cost functions and performance measures of a run.
#   X0: secondary throughput        -> s_delivered_slots / slots
#   X1: primary throughput          -> p_delivered_slots / slots
#   X2: drops after the m-th attempt -> x2_count
#   X3: new-packet service starts    -> x3_count
# Throughput is measured in payload-slots per slot, so it lies in [0, 1].

@dataclass(slots=True)
class MetricsAccumulator:
    slots:int = 0
    p_delivered_slots:int = 0
    s_delivered_slots:int = 0
    x2_count:int = 0
    x3_count:int = 0
    theta_p_max:float = 0.0
    arrivals_dropped:int = 0
    arrivals_admitted:int = 0
    delivered_count:int = 0
    # per-attempt primary decode outcomes, split by whether the secondary overlapped
    attempts_alone:int = 0
    failures_alone:int = 0
    attempts_overlap:int = 0
    failures_overlap:int = 0
    secondary_attempts:int = 0
    secondary_successes:int = 0
    # feedback bookkeeping
    primary_completions:int = 0
    feedback_false_count:int = 0

    @property
    def theta_p(self) -> float:
        return throughput(self.p_delivered_slots, self.slots) if self.slots > 0 else 0.0

    @property
    def theta_s(self) -> float:
        return throughput(self.s_delivered_slots, self.slots) if self.slots > 0 else 0.0

    @property
    def loss(self) -> float:
        return self.theta_p_max - self.theta_p

    def record_primary_attempt(self, success:bool, overlapped:bool, packet_slots:int):
        if overlapped:
            self.attempts_overlap += 1
            self.failures_overlap += 0 if success else 1
        else:
            self.attempts_alone += 1
            self.failures_alone += 0 if success else 1
        if success:
            self.p_delivered_slots += packet_slots
            self.delivered_count += 1

    def record_secondary_attempt(self, success:bool, packet_slots:int):
        self.secondary_attempts += 1
        if success:
            self.secondary_successes += 1
            self.s_delivered_slots += packet_slots

    def evaluate_feedback(self, cfg:SimConfig) -> bool:
        """Recomputes the constraint bit at a primary packet completion. The first completion is always true."""
        self.primary_completions += 1
        bit = True if self.primary_completions == 1 else feedback_bit(self, cfg)
        if not bit:
            self.feedback_false_count += 1
        return bit

    def snapshot(self) -> MetricsAccumulator:
        return replace(self)

    def check_finite(self):
        for name, value in (("theta_p", self.theta_p), ("theta_s", self.theta_s), ("theta_p_max", self.theta_p_max),
                            ("failure_ratio", failure_ratio(self))):
            if math.isnan(value) or math.isinf(value):
                raise MetricError(f"metric '{name}' is not finite: {value}")


def throughput(delivered_slots:int, slots:int) -> float:
    if slots < 1:
        raise ValueError(f"slots must be >= 1, got {slots}.")
    return delivered_slots / slots

def failure_ratio(acc:MetricsAccumulator) -> float:
    """X2/X3, the primary packet-failure probability. 0 before any packet was serviced."""
    if acc.x3_count == 0:
        return 0.0
    return acc.x2_count / acc.x3_count

def feedback_bit(acc:MetricsAccumulator, cfg:SimConfig) -> bool:
    """True iff the primary's performance constraint currently holds (boundary inclusive)."""
    if cfg.constraint_mode == ConstraintMode.THROUGHPUT_LOSS:
        theta_p = throughput(acc.p_delivered_slots, acc.slots) if acc.slots > 0 else 0.0
        return acc.theta_p_max - theta_p <= cfg.gamma1
    return failure_ratio(acc) <= cfg.gamma2
