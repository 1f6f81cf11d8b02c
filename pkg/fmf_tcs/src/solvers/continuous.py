from dataclasses import dataclass
import time
import numpy as np

from fmf_tcs.src.program.program import ConvexProgram
from fmf_tcs.src.program.builder import initial_point, interior_clip, tighten_distances
from fmf_tcs.src.solvers.barrier import BarrierSolver
from fmf_tcs.src.solvers.options import SolverOptions
from fmf_tcs.utils.error_utils import InfeasibleProgramError

@dataclass
class ContinuousSolution:
    """
    Solution of the continuous relaxation.

    Attributes
    ----------
    x : np.ndarray
        barrier solution with every distance variable set to its carrier gap
    x_interior : np.ndarray
        strictly feasible barrier iterate, used to warm start re-solves
    objective : float
        objective at x
    kkt_residual : float
    duality_gap : float
    newton_iterations : int
    converged : bool
    status : str
    wall_time : float
    """
    x: np.ndarray
    x_interior: np.ndarray
    objective: float
    kkt_residual: float
    duality_gap: float
    newton_iterations: int
    converged: bool
    status: str
    wall_time: float


def default_start(prog:ConvexProgram) -> np.ndarray:
    """Midpoint of the bounds (or next to the finite one)."""
    lo, hi = prog.lower, prog.upper
    x = np.zeros(prog.n)
    both = np.isfinite(lo) & np.isfinite(hi)
    x[both] = 0.5*(lo[both] + hi[both])
    only_lo = np.isfinite(lo) & ~np.isfinite(hi)
    x[only_lo] = lo[only_lo] + 1.0
    only_hi = ~np.isfinite(lo) & np.isfinite(hi)
    x[only_hi] = hi[only_hi] - 1.0
    return interior_clip(prog, x)


def find_interior_point(prog:ConvexProgram, x0:np.ndarray, opts:SolverOptions = None) -> np.ndarray:
    """
    Strictly feasible point of prog.

    Returns x0 (moved inside the bounds) if it is strictly feasible already,
    otherwise solves the phase-1 program min s s.t. g(x) <= s and stops as
    soon as s drops below -phase1_margin.

    Raises
    ------
    InfeasibleProgramError
        listing the largest constraint values at the best phase-1 point
    """
    if opts is None:
        opts = SolverOptions()
    x0 = interior_clip(prog, x0)
    if prog.m == 0:
        return x0
    g0 = prog.constraints(x0)
    if np.max(g0) < 0.0:
        return x0
    if prog.free_indices.size == 0:
        raise InfeasibleProgramError(
            f"every variable of '{prog.name}' is fixed and the point violates constraints",
            prog.violations(x0))

    phase1 = prog.phase1()
    s0 = max(float(np.max(g0)), 0.0) + 1.0
    lower = phase1.lower.copy()
    upper = phase1.upper.copy()
    lower[-1] = -1.0
    upper[-1] = s0 + 1.0
    phase1 = phase1.with_bounds(lower, upper)

    margin = opts['phase1_margin']
    solver = BarrierSolver.from_options(opts, name=f'{prog.name}_phase1')
    result = solver.run(phase1, np.append(x0, s0), stop=lambda x: x[-1] <= -margin)
    x = result.x[:-1]
    if np.max(prog.constraints(x)) >= 0.0:
        raise InfeasibleProgramError(
            f"phase-1 found no strictly feasible point of '{prog.name}' (smallest maximum constraint value {result.x[-1]:.3e})",
            prog.violations(x, threshold=-margin))
    return x


def is_feasible(prog:ConvexProgram, x0:np.ndarray, opts:SolverOptions = None):
    """Strictly feasible point of prog, or None."""
    try:
        return find_interior_point(prog, x0, opts)
    except InfeasibleProgramError:
        return None


def solve_continuous(prog:ConvexProgram, opts:SolverOptions = None, x0:np.ndarray = None, inst = None) -> ContinuousSolution:
    """
    Solves the continuous relaxation of a program.

    Parameters
    ----------
    prog : ConvexProgram
    opts : SolverOptions, optional
    x0 : np.ndarray, optional
        start; defaults to initial_point(prog, inst) when inst is given, to
        the middle of the bounds otherwise
    inst : ProblemInstance, optional

    Raises
    ------
    InfeasibleProgramError
        if phase-1 finds no strictly feasible point
    """
    if opts is None:
        opts = SolverOptions()
    start = time.perf_counter()
    if x0 is None:
        x0 = initial_point(prog, inst) if inst is not None else default_start(prog)

    if prog.free_indices.size == 0:
        x = interior_clip(prog, x0)
        violated = prog.violations(x, threshold=1e-9)
        if violated:
            raise InfeasibleProgramError(f"every variable of '{prog.name}' is fixed and the point violates constraints", violated)
        return ContinuousSolution(
            x=x, x_interior=x, objective=prog.objective(x), kkt_residual=0.0, duality_gap=0.0,
            newton_iterations=0, converged=True, status=f"'{prog.name}': no free variables",
            wall_time=time.perf_counter() - start)

    x_start = find_interior_point(prog, x0, opts)
    result = BarrierSolver.from_options(opts, name=prog.name).run(prog, x_start)
    x = tighten_distances(prog, result.x)
    return ContinuousSolution(
        x=x,
        x_interior=result.x,
        objective=prog.objective(x),
        kkt_residual=result.kkt_residual,
        duality_gap=result.duality_gap,
        newton_iterations=result.newton_iterations,
        converged=result.converged,
        status=result.status,
        wall_time=time.perf_counter() - start,
    )
