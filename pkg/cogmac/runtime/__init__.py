from . simulation import SimulationTrace, run_simulation
from . calibration import theta_p_max
from . renewal import RenewalResult, saturated_primary, solo_secondary
from . oracle import MIN_EVAL_SLOTS, GridRow, GridSearchResult, simplex_grid, evaluate_policy, is_feasible, grid_search
