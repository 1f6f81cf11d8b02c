import time
import numpy as np

from fmf_tcs.src.program.builder import build_program
from fmf_tcs.src.phy.constants import derived_zeta, derived_varsigma
from fmf_tcs.src.phy.transponder import bandwidth
from fmf_tcs.src.solvers.options import SolverOptions
from fmf_tcs.src.solvers.rounding import round_and_fix, adopt_incumbent
from fmf_tcs.src.solvers.report import SolveReport
from fmf_tcs.utils.error_utils import InfeasibleProgramError, RoundingError


def solve(inst, opts:SolverOptions = None, incumbent:list = None) -> SolveReport:
    """
    Transponder configuration selection for one instance: builds the convex
    program, solves its relaxation and rounds it.

    Parameters
    ----------
    inst : ProblemInstance
    opts : SolverOptions, optional
    incumbent : list[TransponderConfig], optional
        known configurations; kept if feasible and cheaper, and returned when
        rounding fails

    Returns
    -------
    SolveReport

    Raises
    ------
    InfeasibleProgramError, RoundingError
        when no solution is found and no feasible incumbent is given
    """
    start = time.perf_counter()
    try:
        prog = build_program(inst)
        return round_and_fix(prog, inst, opts, incumbent=incumbent)
    except (InfeasibleProgramError, RoundingError) as error:
        report = adopt_incumbent(None, incumbent, inst)
        if report is None:
            raise
        report.status = f'solver failed ({error.message}); feasible incumbent returned'
        report.wall_time = time.perf_counter() - start
        return report


def fixed_power_levels(inst) -> np.ndarray:
    """
    Per-mode launch power of every request at the single-channel balance of
    ASE and nonlinear interference.

    p/m = (zeta N Delta / (2 kappa1 varsigma K))^(1/3)

    with Delta = F 2^round(mid b) and the worst-case interference proxy
    K = sum_i N_qi / (Delta (Delta + G)), every interferer adjacent at the
    guard band. A request without interferers uses K = N / (Delta (Delta + G)).
    The levels are clipped so that some mode count meets the power bounds.
    """
    k = inst.constants
    ds = inst.discrete
    routing = inst.routing
    width = float(bandwidth(round(0.5*(ds.b_range[0] + ds.b_range[1])), k))
    span_N = np.asarray(routing.span_N, dtype=float)
    shared = np.asarray(routing.shared_spans, dtype=float)

    proxy = shared.sum(axis=1)
    proxy = np.where(proxy > 0.0, proxy, span_N)/(width*(width + k.G))
    levels = np.cbrt(derived_zeta(k)*span_N*width/(2.0*k.kappa1*derived_varsigma(k)*proxy))
    p_lo, p_hi = inst.power_bounds
    return np.clip(levels, p_lo, p_hi/ds.m_range[0])


def fixed_power_baseline(inst, opts:SolverOptions = None, incumbent:list = None) -> SolveReport:
    """
    TCS with the per-mode launch power frozen at fixed_power_levels; the
    report is flagged power_mode = 'fixed'.
    """
    return solve(inst.with_fixed_power(fixed_power_levels(inst)), opts, incumbent)
