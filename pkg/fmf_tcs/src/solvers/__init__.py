from .options import SolverOptions
from .barrier import BarrierSolver, BarrierResult
from .continuous import ContinuousSolution, solve_continuous, find_interior_point, is_feasible
from .feasibility import feasibility_check, FeasibilityResult
from .report import SolveReport, RoundingStep, make_report
from .rounding import round_and_fix, adopt_incumbent, IterativeRounding
from .tcs import solve, fixed_power_levels, fixed_power_baseline
