import os
import pytest
from cogmac.sim import *
from cogmac.agent import *
from cogmac.experiment import *
import helpers_experiment as helpers

async def test_sweep_writes_all_artifacts(tmp_path):
    out = str(tmp_path / "out")
    spec = helpers.small_spec(out)
    result = await run_experiment(spec)

    # rows ordered by (lambda1, policy, replication)
    assert len(result.rows) == 2 * 3 * 2
    keys = [(row.lambda1, row.policy, row.seed) for row in result.rows]
    assert keys == [(lam, policy, seed)
                    for lam in (0.0, 0.1)
                    for policy in ("qlearning", "uniform", "gridsearch")
                    for seed in (0, 1)]
    assert all(row.slots == 2_000 for row in result.rows)
    assert all(row.theta_p == 0.0 for row in result.rows if row.lambda1 == 0.0)

    files = set(os.listdir(out))
    assert "summary.csv" in files
    assert {"grid_l0.csv", "grid_l0.1.csv"} <= files
    assert {"trace_qlearning_l0.1_r0.csv", "rewards_qlearning_l0.1_r1.csv", "strategy_l0.1_r1.csv"} <= files
    # only the learner leaves traces
    assert not any(f.startswith("trace_uniform") for f in files)

    summary = helpers.read_csv_lines(os.path.join(out, "summary.csv"))
    assert summary[0] == f"# config_id={config_id(spec.base)} seed=0"
    assert len(summary) == 2 + 12
    assert set(result.grids) == {0.0, 0.1}

async def test_sweep_is_reproducible(tmp_path):
    first = helpers.small_spec(str(tmp_path / "a"), sweep_lambda1=[0.1], replications=1)
    second = helpers.small_spec(str(tmp_path / "b"), sweep_lambda1=[0.1], replications=1)
    await run_experiment(first)
    await run_experiment(second)
    names = sorted(os.listdir(first.output_dir))
    assert names == sorted(os.listdir(second.output_dir))
    for name in names:
        with open(os.path.join(first.output_dir, name), "rb") as a, open(os.path.join(second.output_dir, name), "rb") as b:
            assert a.read() == b.read(), name

async def test_single_policy_without_grid(tmp_path):
    spec = helpers.small_spec(str(tmp_path / "out"), sweep_lambda1=[0.05], policies=["silent"], replications=1)
    result = await run_experiment(spec)
    assert result.grids == {}
    assert len(result.rows) == 1
    assert result.rows[0].theta_s == 0.0
    assert sorted(os.listdir(spec.output_dir)) == ["summary.csv"]

async def test_grid_search_writes_table(tmp_path):
    cfg = SimConfig(lambda1=0.0, calibration_slots=1_000)
    result = await run_grid_search(cfg, str(tmp_path / "grid"), step=0.5, eval_slots=2_000)
    lines = helpers.read_csv_lines(str(tmp_path / "grid" / "grid_l0.csv"))
    assert lines[1] == "k0,k1,k2,k3,theta_s,theta_p,loss,feasible"
    assert len(lines) == 2 + len(result.table)

async def test_unwritable_output_dir(tmp_path):
    blocker = helpers.create_file(str(tmp_path), "blocker", "not a directory")
    spec = helpers.small_spec(os.path.join(blocker, "out"))
    with pytest.raises(ExperimentError):
        await run_experiment(spec)

def test_run_cell():
    cfg = SimConfig(lambda1=0.1, calibration_slots=1_000)
    job = CellJob(cfg, PolicyName.QLEARNING, 0, 1_000, 0.1, None)
    cell = run_cell(job)
    assert cell.summary.policy == "qlearning"
    assert cell.summary.slots == 1_000
    assert cell.trace_text is not None
    assert sum(cell.counts.voluntary) + sum(cell.counts.forced) > 0

    job = CellJob(cfg, PolicyName.UNIFORM, 0, 1_000, 0.1, uniform_policy(cfg.ws))
    cell = run_cell(job)
    assert cell.trace_text is None
    assert cell.counts is None
