from __future__ import annotations
import asyncio
import logging
from concurrent.futures import Executor, ProcessPoolExecutor
from typing import NamedTuple
from cogmac.sim import *
from cogmac.agent import PolicyVector, QLearningAgent, stationary_executor, uniform_policy, silent_policy
from cogmac.runtime import run_simulation, theta_p_max, grid_search, GridSearchResult
from .spec_file import ExperimentSpec, PolicyName
from .artifacts import *

logger = logging.getLogger(__name__)

# Runs an experiment: every (lambda1, policy, replication) cell is an independent simulation.
# Cells are scheduled on an executor (threads by default, processes with workers > 1) and
# gathered in submission order, so the artifacts do not depend on the scheduling.
# Replication r runs with seed = base seed + r.

CellJob = NamedTuple("CellJob",
    [('cfg', SimConfig),
     ('policy', PolicyName),
     ('replication', int),
     ('horizon_slots', int),
     ('theta_p_max', float),
     ('kappa', PolicyVector | None)]) # None for the learner

CellResult = NamedTuple("CellResult",
    [('job', CellJob),
     ('summary', SummaryRow),
     ('trace_text', str | None),
     ('rewards_text', str | None),
     ('counts', StrategyCounts | None)])

ExperimentResult = NamedTuple("ExperimentResult",
    [('rows', list[SummaryRow]),
     ('grids', dict[float, GridSearchResult]),
     ('written', list[str])])

def run_cell(job:CellJob) -> CellResult:
    cfg = job.cfg
    learning = job.policy == PolicyName.QLEARNING
    if learning:
        agent = QLearningAgent(cfg, record_decisions=False)
    else:
        agent = stationary_executor(job.kappa, cfg, record_decisions=False)
    trace = run_simulation(cfg, agent, job.horizon_slots, theta_p_max=job.theta_p_max, record_trace=learning)
    acc = trace.metrics
    summary = SummaryRow(
        lambda1=cfg.lambda1,
        gamma1=cfg.gamma1,
        policy=job.policy.value,
        theta_s=acc.theta_s,
        theta_p=acc.theta_p,
        theta_p_max=acc.theta_p_max,
        loss=acc.loss,
        failure_ratio=failure_ratio(acc),
        slots=acc.slots,
        seed=cfg.seed)
    if not learning:
        return CellResult(job, summary, None, None, None)
    counts = StrategyCounts(tuple(agent.voluntary_counts), tuple(agent.forced_counts))
    return CellResult(job, summary, trace_csv(trace), rewards_csv(cfg, agent.reward_log), counts)

def _policy_kappa(policy:PolicyName, ws:int, grid:GridSearchResult|None) -> PolicyVector|None:
    if policy == PolicyName.QLEARNING:
        return None
    if policy == PolicyName.UNIFORM:
        return uniform_policy(ws)
    if policy == PolicyName.SILENT:
        return silent_policy(ws)
    if grid is None:
        raise ExperimentError("gridsearch cell scheduled without a grid search result.")
    return grid.best

def _grid_for(cfg:SimConfig, step:float, eval_slots:int) -> GridSearchResult:
    return grid_search(cfg, step=step, eval_slots=eval_slots)

def _grid_file_name(lambda1:float) -> str:
    return f"grid_l{lambda1:g}.csv"


class _Scheduler:
    """Runs blocking calls on an executor, at most 'workers' at a time."""
    _executor:Executor|None
    _semaphore:asyncio.Semaphore

    def __init__(self, workers:int):
        self._executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
        self._semaphore = asyncio.Semaphore(workers)

    async def submit(self, fn, *args):
        async with self._semaphore:
            loop = asyncio.get_running_loop()
            return await loop.run_in_executor(self._executor, fn, *args)

    def close(self):
        if self._executor is not None:
            self._executor.shutdown(wait=True)


async def run_experiment(spec:ExperimentSpec) -> ExperimentResult:
    writer = ArtifactWriter(spec.output_dir)
    scheduler = _Scheduler(spec.workers)
    base = spec.base
    logger.debug(f"experiment: lambda1={list(spec.sweep_lambda1)}, policies={[p.value for p in spec.policies]}, "
                 f"replications={spec.replications}, horizon={spec.horizon_slots}, config_id={config_id(base)}")
    try:
        lambda_cfgs = [base.with_updates(lambda1=lam) for lam in spec.sweep_lambda1]

        # the solo-primary reference once per lambda1
        references = await asyncio.gather(*[scheduler.submit(theta_p_max, cfg) for cfg in lambda_cfgs])

        grids:dict[float, GridSearchResult] = {}
        if PolicyName.GRIDSEARCH in spec.policies:
            results = await asyncio.gather(*[
                scheduler.submit(_grid_for, cfg, spec.grid_step, spec.grid_eval_slots) for cfg in lambda_cfgs])
            for cfg, result in zip(lambda_cfgs, results, strict=True):
                grids[cfg.lambda1] = result
                await writer.write(_grid_file_name(cfg.lambda1), grid_csv(cfg, result))
                logger.info(f"grid search lambda1={cfg.lambda1:g}: kappa={list(result.best.kappa)}, "
                            f"feasible={not result.no_feasible_point}")

        jobs:list[CellJob] = []
        for cfg, reference in zip(lambda_cfgs, references, strict=True):
            for policy in spec.policies:
                kappa = _policy_kappa(policy, cfg.ws, grids.get(cfg.lambda1))
                for replication in range(spec.replications):
                    jobs.append(CellJob(
                        cfg=cfg.with_updates(seed=base.seed + replication),
                        policy=policy,
                        replication=replication,
                        horizon_slots=spec.horizon_slots,
                        theta_p_max=reference,
                        kappa=kappa))
        cells:list[CellResult] = await asyncio.gather(*[scheduler.submit(run_cell, job) for job in jobs])
    finally:
        scheduler.close()

    rows:list[SummaryRow] = []
    for cell in cells:
        job, row = cell.job, cell.summary
        name = cell_name(job.policy.value, job.cfg.lambda1, job.replication)
        logger.info(f"cell {name}: theta_s={row.theta_s:.4f}, theta_p={row.theta_p:.4f}, "
                    f"loss={row.loss:.4f}, failure_ratio={row.failure_ratio:.4f}")
        rows.append(row)
        if cell.trace_text is not None:
            await writer.write(f"trace_{name}.csv", cell.trace_text)
        if cell.rewards_text is not None:
            await writer.write(f"rewards_{name}.csv", cell.rewards_text)
        grid = grids.get(job.cfg.lambda1)
        if cell.counts is not None and grid is not None:
            strategy = emit_strategy_comparison(job.cfg, cell.counts, grid.best)
            await writer.write(f"strategy_l{job.cfg.lambda1:g}_r{job.replication}.csv", strategy)

    await writer.write("summary.csv", summary_csv(base, rows))
    return ExperimentResult(rows, grids, list(writer.written))

async def run_grid_search(cfg:SimConfig, output_dir:str, step:float=0.1, eval_slots:int=100_000, workers:int=1) -> GridSearchResult:
    writer = ArtifactWriter(output_dir)
    result = await asyncio.to_thread(grid_search, cfg, step, eval_slots, None, workers)
    await writer.write(_grid_file_name(cfg.lambda1), grid_csv(cfg, result))
    return result
