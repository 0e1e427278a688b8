import logging
import asyncio
import os
from dataclasses import dataclass
from enum import Enum
from typing import get_origin
import click
from cogmac.sim import *
from cogmac.agent import uniform_policy
from cogmac.runtime import theta_p_max, saturated_primary, solo_secondary, MIN_EVAL_SLOTS
from cogmac.experiment import *

# Main CLI to run cognitive MAC experiments.
# It utilizes the 'click' library.
#
# Every verb reads the optional TOML config given with --config and accepts one flag per
# SimConfig field; flags win over the file.

@dataclass
class CliContext:
    verbose:bool
    config_path:str|None

    def file_values(self, required:bool=False) -> dict:
        if self.config_path is None:
            if required:
                raise click.ClickException("this command needs a config file, pass one with '--config'.")
            return {}
        if not os.path.exists(self.config_path):
            raise click.ClickException(f"config file '{self.config_path}' does not exist.")
        try:
            return load_values(self.config_path)
        except InvalidConfigError as e:
            raise click.ClickException(str(e)) from e


def _parse_windows(ctx, param, value:str|None) -> tuple[int, ...]|None:
    if value is None:
        return None
    try:
        return tuple(int(w) for w in value.split(",") if w.strip())
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated integers like '4,6,8,10', got '{value}'.") from e

def _option_for(name:str, annotation):
    flag = "--" + name.replace("_", "-")
    help_text = f"Overrides '{name}' (default: {SimConfig.model_fields[name].default})."
    if annotation in (int, float, bool):
        return click.option(flag, name, type=annotation, default=None, help=help_text)
    if get_origin(annotation) is None and issubclass(annotation, Enum):
        return click.option(flag, name, type=click.Choice([m.value for m in annotation]), default=None, help=help_text)
    # the only sequence field, given as '4,6,8,10'
    return click.option(flag, name, type=str, default=None, callback=_parse_windows, help=help_text)

def sim_options(fn):
    """Adds one option per SimConfig field to a command."""
    for name, field in reversed(list(SimConfig.model_fields.items())):
        fn = _option_for(name, field.annotation)(fn)
    return fn

def _split_overrides(kwargs:dict) -> dict:
    fields = config_fields()
    return {k: v for k, v in kwargs.items() if k in fields and v is not None}

def _run_guarded(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (InvalidConfigError, ProtocolViolationError, MetricError, ExperimentError, ValueError) as e:
        raise click.ClickException(str(e)) from e

def _print_rows(rows:list[SummaryRow]):
    for row in rows:
        print(f"  lambda1={row.lambda1:g} policy={row.policy} seed={row.seed}: theta_s={row.theta_s:.4f} "
              f"theta_p={row.theta_p:.4f} loss={row.loss:.4f} failure_ratio={row.failure_ratio:.4f}")


@click.group()
@click.pass_context
@click.option("--config", "-c", "config_path", help="TOML config file with flat key = value pairs.")
@click.option("--verbose", "-v", is_flag=True, help="Will print debug logs.")
def cli(ctx:click.Context, config_path:str|None, verbose:bool):
    #print logs to console
    logging.basicConfig(level=logging.INFO)
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    ctx.obj = CliContext(verbose=verbose, config_path=config_path)

#===========================================================
# 'init' command
#===========================================================
@cli.command()
@click.pass_context
@click.argument("path", default="experiment.toml")
def init(ctx:click.Context, path:str):
    """Writes a default experiment config."""
    print("-> Initializing experiment config")
    if os.path.exists(path):
        print("Config file already exists: " + path)
        return
    spec = ExperimentSpec(sweep_lambda1=(0.01, 0.03, 0.05, 0.07, 0.1))
    write_experiment_spec(path, spec)
    print("Config file initialized: " + path)

#===========================================================
# 'run' command
#===========================================================
@cli.command()
@click.pass_context
@sim_options
@click.option("--policy", type=click.Choice([p.value for p in PolicyName]), default=PolicyName.QLEARNING.value, help="Secondary policy.")
@click.option("--horizon-slots", type=int, default=None, help="Slots to simulate.")
@click.option("--output-dir", "-o", default=None, help="Directory for the CSV artifacts.")
def run(ctx:click.Context, policy:str, horizon_slots:int|None, output_dir:str|None, **kwargs):
    """One simulation of a single config."""
    cli_ctx:CliContext = ctx.obj
    values = cli_ctx.file_values()
    overrides = _split_overrides(kwargs)
    cfg = _run_guarded(build_config, values, overrides)
    overrides.update(
        sweep_lambda1=[cfg.lambda1],
        policies=[policy],
        replications=1,
        horizon_slots=horizon_slots,
        output_dir=output_dir)
    spec = _run_guarded(build_experiment_spec, values, overrides)
    print(f"-> Running {policy} for {spec.horizon_slots} slots (lambda1={cfg.lambda1:g}, seed={cfg.seed})")
    result = _run_guarded(asyncio.run, run_experiment(spec))
    _print_rows(result.rows)
    print(f"Artifacts written to: {spec.output_dir}")

#===========================================================
# 'sweep' command
#===========================================================
@cli.command()
@click.pass_context
@sim_options
@click.option("--horizon-slots", type=int, default=None, help="Slots per run.")
@click.option("--replications", type=int, default=None, help="Runs per (lambda1, policy) cell.")
@click.option("--workers", type=int, default=None, help="Worker processes.")
@click.option("--output-dir", "-o", default=None, help="Directory for the CSV artifacts.")
def sweep(ctx:click.Context, horizon_slots:int|None, replications:int|None, workers:int|None, output_dir:str|None, **kwargs):
    """Runs the experiment described by the config file."""
    cli_ctx:CliContext = ctx.obj
    values = cli_ctx.file_values(required=True)
    overrides = _split_overrides(kwargs)
    overrides.update(horizon_slots=horizon_slots, replications=replications, workers=workers, output_dir=output_dir)
    spec = _run_guarded(build_experiment_spec, values, overrides)
    print(f"-> Sweeping lambda1 over {list(spec.sweep_lambda1)} with {[p.value for p in spec.policies]}")
    result = _run_guarded(asyncio.run, run_experiment(spec))
    _print_rows(result.rows)
    print(f"{len(result.written)} artifacts written to: {spec.output_dir}")

#===========================================================
# 'grid' command
#===========================================================
@cli.command()
@click.pass_context
@sim_options
@click.option("--step", type=float, default=0.1, help="Grid resolution of the policy simplex.")
@click.option("--eval-slots", type=int, default=MIN_EVAL_SLOTS, help="Slots per grid point.")
@click.option("--workers", type=int, default=1, help="Worker processes.")
@click.option("--output-dir", "-o", default="out", help="Directory for the CSV artifacts.")
def grid(ctx:click.Context, step:float, eval_slots:int, workers:int, output_dir:str, **kwargs):
    """Searches the best stationary policy on a simplex grid."""
    cli_ctx:CliContext = ctx.obj
    cfg = _run_guarded(build_config, cli_ctx.file_values(), _split_overrides(kwargs))
    print(f"-> Grid search (step={step}, {eval_slots} slots per point, lambda1={cfg.lambda1:g})")
    result = _run_guarded(asyncio.run, run_grid_search(cfg, output_dir, step, eval_slots, workers))
    best = next((row for row in result.table if row.policy == result.best), None)
    print(f"best kappa: {list(result.best.kappa)}")
    if result.no_feasible_point:
        print("no grid point meets the constraint, reporting the all-silent policy")
    elif best is not None:
        print(f"theta_s={best.theta_s:.4f} theta_p={best.theta_p:.4f} loss={best.loss:.4f}")

#===========================================================
# 'calibrate' command
#===========================================================
@cli.command()
@click.pass_context
@sim_options
@click.option("--analytic", is_flag=True, help="Also print the closed-form renewal-reward values.")
def calibrate(ctx:click.Context, analytic:bool, **kwargs):
    """Estimates the primary's solo throughput theta_p_max."""
    cli_ctx:CliContext = ctx.obj
    cfg = _run_guarded(build_config, cli_ctx.file_values(), _split_overrides(kwargs))
    value = _run_guarded(theta_p_max, cfg)
    print(f"theta_p_max={value:.6f} (lambda1={cfg.lambda1:g}, {cfg.calibration_slots} slots, seed={cfg.calibration_seed})")
    if analytic:
        primary = saturated_primary(cfg)
        secondary = solo_secondary(cfg, uniform_policy(cfg.ws))
        print(f"saturated primary: throughput={primary.throughput:.6f} drop_ratio={primary.drop_ratio:.6f} "
              f"mean_cycle_slots={primary.mean_cycle_slots:.4f}")
        print(f"solo uniform secondary: throughput={secondary.throughput:.6f} mean_cycle_slots={secondary.mean_cycle_slots:.4f}")


if __name__ == '__main__':
    cli(None)
