from . spec_file import (PolicyName, ExperimentSpec, load_values, loads_values, build_config, build_experiment_spec,
                        load_experiment_spec, dumps_experiment_spec, write_experiment_spec)
from . artifacts import (SummaryRow, StrategyCounts, ArtifactWriter, summary_csv, trace_csv, rewards_csv, grid_csv,
                        emit_strategy_comparison, cell_name)
from . runner import CellJob, CellResult, ExperimentResult, run_cell, run_experiment, run_grid_search
