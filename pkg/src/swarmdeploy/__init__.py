"""Energy-aware deployment of UAV swarms covering a ground line interval."""

from .colocated import ColocatedSolution, refine_with_nfz, solve_colocated, solve_equal_leftover
from .deploy3d import ChordCover, Scenario3d, chord, reach_window_3d, solve_3d, split_scenario
from .linedeploy import (
    FeasibilityOutcome,
    SearchGrid,
    check_feasible,
    max_reach,
    reach_window,
    search_bounds,
    solve_line,
    solve_order,
)
from .model import (
    CoverageModel,
    DeployError,
    DomainError,
    InfeasibleError,
    Nfz,
    Placement,
    Scenario,
    SolveReport,
    UavSpec,
    UncoverableError,
    inverse_radius,
    leftover,
    radius,
    travel_distance,
)
from .oracle import GridSpec, brute_force, partition_scenario
from .permheur import enumerate_orders, solve_kappa

__version__ = "0.1.0"
