from __future__ import annotations
import csv
import io
import os
import asyncio
import aiofiles
from typing import Iterable, NamedTuple
from cogmac.sim import *
from cogmac.agent import PolicyVector
from cogmac.runtime import SimulationTrace, GridSearchResult

# CSV artifacts of experiments.
# Every file starts with one comment line '# config_id=<sha256> seed=<seed>' that ties it to the
# exact config it was produced with, followed by a header row. Absent optional values are written
# as empty strings, booleans as 1/0. Output holds no timestamps, so reruns are byte-identical.

SUMMARY_HEADER = ["lambda1", "gamma1", "policy", "theta_s", "theta_p", "theta_p_max", "loss", "failure_ratio", "slots", "seed"]
TRACE_HEADER = ["slot", "primary_tx", "secondary_tx", "primary_ok", "secondary_ok", "feedback_bit", "theta_p", "theta_s"]
STRATEGY_HEADER = ["action", "learned_voluntary", "learned_forced", "learned_total", "oracle"]

SummaryRow = NamedTuple("SummaryRow",
    [('lambda1', float),
     ('gamma1', float),
     ('policy', str),
     ('theta_s', float),
     ('theta_p', float),
     ('theta_p_max', float),
     ('loss', float),
     ('failure_ratio', float),
     ('slots', int),
     ('seed', int)])

StrategyCounts = NamedTuple("StrategyCounts",
    [('voluntary', tuple[int, ...]),
     ('forced', tuple[int, ...])])

def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)

def provenance_line(cfg:SimConfig) -> str:
    return f"# config_id={config_id(cfg)} seed={cfg.seed}\n"

def render_csv(cfg:SimConfig, header:list[str], rows:Iterable[Iterable]) -> str:
    buffer = io.StringIO()
    buffer.write(provenance_line(cfg))
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()

def summary_csv(cfg:SimConfig, rows:list[SummaryRow]) -> str:
    return render_csv(cfg, SUMMARY_HEADER, rows)

def trace_csv(trace:SimulationTrace) -> str:
    if trace.records is None:
        raise ValueError("the run did not record a trace.")
    rows = ((r.outcome.slot_index,
             r.outcome.primary_transmitted,
             r.outcome.secondary_transmitted,
             r.outcome.primary_success,
             r.outcome.secondary_success,
             r.feedback_bit,
             r.theta_p,
             r.theta_s) for r in trace.records)
    return render_csv(trace.cfg, TRACE_HEADER, rows)

def rewards_csv(cfg:SimConfig, reward_log:list[RewardRecord]) -> str:
    header = ["t", "action", "cost"] + [f"r{i}" for i in range(cfg.ws + 1)]
    rows = ([rec.t, rec.action, rec.cost, *rec.rewards] for rec in reward_log)
    return render_csv(cfg, header, rows)

def grid_csv(cfg:SimConfig, result:GridSearchResult) -> str:
    header = [f"k{i}" for i in range(cfg.ws + 1)] + ["theta_s", "theta_p", "loss", "feasible"]
    rows = ([*row.policy.kappa, row.theta_s, row.theta_p, row.loss, row.feasible] for row in result.table)
    return render_csv(cfg, header, rows)

def emit_strategy_comparison(cfg:SimConfig, learned:StrategyCounts, oracle:PolicyVector) -> str:
    """Empirical action frequencies of a learned run next to the oracle policy.

    Forced silences (false feedback bit) are reported in their own column; the total column
    is what the secondary actually did.
    """
    if len(learned.voluntary) != len(oracle) or len(learned.forced) != len(oracle):
        raise ValueError(f"learned counts and oracle policy differ in length: {len(learned.voluntary)} vs {len(oracle)}.")
    total = sum(learned.voluntary) + sum(learned.forced)
    def freq(n:int) -> float:
        return n / total if total > 0 else 0.0
    rows = ([u, freq(v), freq(f), freq(v + f), k]
            for u, (v, f, k) in enumerate(zip(learned.voluntary, learned.forced, oracle.kappa, strict=True)))
    return render_csv(cfg, STRATEGY_HEADER, rows)


class ArtifactWriter:
    """Writes artifact files under one output directory, one file at a time."""

    _async_lock:asyncio.Lock
    output_dir:str
    written:list[str]

    def __init__(self, output_dir:str):
        self._async_lock = asyncio.Lock()
        self.output_dir = output_dir
        self.written = []
        try:
            os.makedirs(output_dir, exist_ok=True)
        except OSError as e:
            raise ExperimentError(f"cannot create output directory '{output_dir}': {e}") from e
        if not os.access(output_dir, os.W_OK):
            raise ExperimentError(f"output directory '{output_dir}' is not writable.")

    def path(self, file_name:str) -> str:
        return os.path.join(self.output_dir, file_name)

    async def write(self, file_name:str, text:str) -> str:
        file_path = self.path(file_name)
        async with self._async_lock:
            async with aiofiles.open(file_path, 'w', newline="") as f:
                await f.write(text)
            self.written.append(file_path)
        return file_path


def cell_name(policy:str, lambda1:float, replication:int) -> str:
    return f"{policy}_l{lambda1:g}_r{replication}"
