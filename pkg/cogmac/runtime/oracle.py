from __future__ import annotations
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import NamedTuple
from cogmac.sim import *
from cogmac.agent import PolicyVector, silent_policy, stationary_executor
from .simulation import run_simulation

logger = logging.getLogger(__name__)

# Brute-force search over stationary policies kappa on a simplex grid.
# Every grid point is evaluated by simulation with the same evaluation seed (common random
# numbers), so comparisons between points are paired. The primary's reference throughput
# is the all-silent point under that same seed.

MIN_EVAL_SLOTS = 100_000

GridRow = NamedTuple("GridRow",
    [('policy', PolicyVector),
     ('theta_s', float),
     ('theta_p', float),
     ('loss', float),
     ('failure_ratio', float),
     ('feasible', bool)])

GridSearchResult = NamedTuple("GridSearchResult",
    [('best', PolicyVector),
     ('table', list[GridRow]),
     ('theta_p_max', float),
     ('no_feasible_point', bool)])

def simplex_grid(ws:int, step:float) -> list[PolicyVector]:
    """All policy vectors of length ws+1 whose entries are multiples of step, in a fixed order."""
    if step <= 0.0 or step > 1.0:
        raise ValueError(f"step must be in (0, 1], got {step}.")
    n = round(1.0 / step)
    if abs(n * step - 1.0) > 1e-9:
        raise ValueError(f"step must divide 1 evenly, got {step}.")
    parts = ws + 1
    grid = []
    # stars and bars: choosing the bar positions enumerates every composition of n into 'parts' parts
    for bars in itertools.combinations(range(n + parts - 1), parts - 1):
        edges = (-1,) + bars + (n + parts - 1,)
        counts = [edges[i + 1] - edges[i] - 1 for i in range(parts)]
        grid.append(PolicyVector(kappa=tuple(c / n for c in counts)))
    return grid

def evaluate_policy(cfg:SimConfig, policy:PolicyVector, eval_slots:int, theta_p_max:float) -> tuple[float, float, float]:
    """Returns (theta_s, theta_p, failure_ratio) of one stationary policy."""
    agent = stationary_executor(policy, cfg, record_decisions=False)
    trace = run_simulation(cfg, agent, eval_slots, theta_p_max=theta_p_max, record_trace=False)
    return trace.metrics.theta_s, trace.metrics.theta_p, failure_ratio(trace.metrics)

def _evaluate_point(args:tuple[SimConfig, PolicyVector, int, float]) -> tuple[float, float, float]:
    return evaluate_policy(*args)

def is_feasible(cfg:SimConfig, loss:float, ratio:float) -> bool:
    if cfg.constraint_mode == ConstraintMode.THROUGHPUT_LOSS:
        return loss <= cfg.gamma1
    return ratio <= cfg.gamma2

def grid_search(
        cfg:SimConfig,
        step:float=0.1,
        eval_slots:int=MIN_EVAL_SLOTS,
        eval_seed:int|None=None,
        workers:int=1,
        ) -> GridSearchResult:
    if eval_slots < MIN_EVAL_SLOTS:
        logger.warning(f"grid search with eval_slots={eval_slots} (< {MIN_EVAL_SLOTS}) gives noisy comparisons.")
    eval_cfg = cfg.with_updates(seed=cfg.seed if eval_seed is None else eval_seed)
    grid = simplex_grid(cfg.ws, step)
    logger.debug(f"grid search over {len(grid)} policies, {eval_slots} slots each, seed {eval_cfg.seed}")

    silent = silent_policy(cfg.ws)
    _, reference, _ = evaluate_policy(eval_cfg, silent, eval_slots, 0.0)

    jobs = [(eval_cfg, policy, eval_slots, reference) for policy in grid]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_point, jobs))
    else:
        results = [_evaluate_point(job) for job in jobs]

    table:list[GridRow] = []
    for policy, (theta_s, theta_p, ratio) in zip(grid, results, strict=True):
        loss = reference - theta_p
        table.append(GridRow(policy, theta_s, theta_p, loss, ratio, is_feasible(cfg, loss, ratio)))

    feasible = [row for row in table if row.feasible]
    if not feasible:
        logger.warning(f"no feasible policy on the grid (step={step}); falling back to the all-silent policy.")
        return GridSearchResult(silent, table, reference, True)
    best = min(feasible, key=lambda row: (-row.theta_s, -row.theta_p, row.policy.kappa))
    logger.debug(f"grid search best kappa={best.policy.kappa}, theta_s={best.theta_s:.4f}, theta_p={best.theta_p:.4f}")
    return GridSearchResult(best.policy, table, reference, False)
