from .src.data import export_report, import_report
from .src.network import (
    Link, Request, Topology, RoutingSolution,
    load_topology, bundled_topology, load_traffic, uniform_traffic, build_routing,
)
from .src.phy import PhysicalConstants, CouplingModel, TransponderConfig, load_constants, osnr, osnr_all, transponder_power
from .src.ros import RosConfig, route, order, solve_ros, save_ros, load_ros
from .src.program import ConvexProgram, DiscreteSets, ProblemInstance, build_instance
from .src.program.builder import build_program
from .src.solvers import SolverOptions, SolveReport, solve, fixed_power_baseline, feasibility_check
from .src.oracle import GridSpec, brute_force_tcs, finite_diff_check, convexity_sample
from .utils.parameters import check_parameter
from .utils.error_utils import (
    TopologyError, RoutingError, InfeasibleProgramError, RoundingError, EnumerationCapError, ScenarioError,
)
