from dataclasses import dataclass, field
import time
import numpy as np

from fmf_tcs.src.phy.constants import derived_zeta, derived_varsigma
from fmf_tcs.src.phy.transponder import TransponderConfig, transponder_power, capacity_values, osnr_threshold
from fmf_tcs.src.oracle.grid import GridSpec
from fmf_tcs.utils.error_utils import EnumerationCapError
from fmf_tcs.utils.printing import write_csv

MAX_REQUESTS = 3

QOS_TOL = 1e-6
NONOVERLAP_TOL = 1e-6
SPECTRUM_TOL = 1e-9
RATE_TOL = 1e-9

RANKED_COLUMNS = ['rank', 'power_W', 'request_id', 'c', 'b', 'r', 'p_mW', 'm', 'omega_GHz']


@dataclass
class OracleResult:
    """
    Attributes
    ----------
    feasible : bool
    objective_power_W : float or None
        smallest total transponder power over feasible grid points
    configs : list[TransponderConfig] or None
        a feasible grid point reaching it
    ranked : list[tuple[float, list[TransponderConfig]]]
        best integer choices (with one feasible power/carrier point each), ascending power
    request_ids : tuple
    enumeration_size : float
        grid points of the reduced enumeration
    evaluated : int
        integer choices examined
    wall_time : float
    """
    feasible: bool
    objective_power_W: float
    configs: list
    ranked: list = field(default_factory=list)
    request_ids: tuple = ()
    enumeration_size: float = 0.0
    evaluated: int = 0
    wall_time: float = 0.0


@dataclass(frozen=True)
class _Option:
    b: int
    m: int
    r: float
    c: float
    power: float
    theta: float
    width: float


def _cartesian(arrays:list[np.ndarray]) -> np.ndarray:
    grids = np.meshgrid(*arrays, indexing='ij')
    return np.stack([g.ravel() for g in grids], axis=1)


class BruteForceTCS(object):
    def __init__(self, inst, grid:GridSpec = None):
        """
        Exhaustive grid search of the integer TCS problem with the exact
        power and OSNR expressions.

        Two reductions leave the grid optimum unchanged: for given (b, m, r)
        only the smallest modulation level carrying the rate is tried, and the
        first and last requests of the global order sit on the outermost grid
        carriers that fit.
        """
        if inst.n > MAX_REQUESTS:
            raise ValueError(f'the brute-force oracle handles at most {MAX_REQUESTS} requests, {inst.n} given')
        if inst.power_mode != 'adaptive':
            raise ValueError('the brute-force oracle searches adaptive launch powers only')
        self.inst = inst
        self.grid = grid if grid is not None else GridSpec.for_instance(inst)
        k = inst.constants
        self.k = k
        routing = inst.routing
        self.span_N = np.asarray(routing.span_N, dtype=float)
        self.shared = np.asarray(routing.shared_spans, dtype=float)
        self.omega_grid = self.grid.omega_values(inst.bandwidth_B)

        order = routing.global_order
        self.roles = ['free']*inst.n
        self.roles[routing.index[order[-1]]] = 'last'
        self.roles[routing.index[order[0]]] = 'first'
        self.options = [self._request_options(q) for q in range(inst.n)]

    def _request_options(self, q:int) -> list[_Option]:
        k = self.k
        rate = self.inst.rates[q]
        c_grid = np.asarray(self.grid.c_values, dtype=float)
        options = []
        for b in self.grid.b_values:
            for m in self.grid.m_values:
                for r in self.grid.r_values:
                    capacity = capacity_values(c_grid, b, r, m, self.span_N[q], self.inst.coupling, k)
                    carrying = np.flatnonzero((rate - capacity)/rate <= RATE_TOL)
                    if carrying.size == 0:
                        continue
                    c = float(c_grid[carrying[0]])
                    cfg = TransponderConfig(c=c, b=int(b), r=float(r), p=1.0, m=int(m), omega=1.0)
                    options.append(_Option(
                        b=int(b), m=int(m), r=float(r), c=c,
                        power=transponder_power(cfg, k),
                        theta=float(osnr_threshold(c, r, k)),
                        width=float(cfg.bandwidth(k)),
                    ))
        return options

    def _carriers(self, q:int, width:float) -> np.ndarray:
        B = self.inst.bandwidth_B
        omega = self.omega_grid
        inside = omega[(0.5*width - omega <= SPECTRUM_TOL*B) & (omega + 0.5*width - B <= SPECTRUM_TOL*B)]
        if self.roles[q] == 'first':
            return inside[:1]
        if self.roles[q] == 'last':
            return inside[-1:]
        return inside

    def enumeration_size(self) -> float:
        size = 1.0
        for q, options in enumerate(self.options):
            size *= float(sum(self._carriers(q, opt.width).size for opt in options))*self.grid.p_values.size
        return size

    def _feasible_point(self, choice:tuple[_Option]):
        """(carriers, powers) of a feasible grid point for an integer choice, or None."""
        n = len(choice)
        k = self.k
        carriers = [self._carriers(q, opt.width) for q, opt in enumerate(choice)]
        if any(c.size == 0 for c in carriers):
            return None
        W = _cartesian(carriers)
        width = np.array([opt.width for opt in choice])
        for a, b in self.inst.routing.consecutive_pairs:
            gap = W[:, b] - W[:, a]
            W = W[gap - (0.5*width[a] + k.G + 0.5*width[b]) >= -NONOVERLAP_TOL*k.G]
        if W.shape[0] == 0:
            return None

        m = np.array([opt.m for opt in choice], dtype=float)
        theta = np.array([opt.theta for opt in choice])
        P = _cartesian([self.grid.p_values]*n)
        per_mode = P/m
        ase = derived_zeta(k)*self.span_N*width
        nli_scale = k.kappa1*derived_varsigma(k)
        sharing = (self.shared > 0) & ~np.eye(n, dtype=bool)
        for row in W:
            d = np.abs(row[:, None] - row[None, :])
            with np.errstate(divide='ignore', invalid='ignore'):
                coef = np.where(sharing, self.shared/(width[None, :]*d), 0.0)
            nli = (P**2/m) @ coef.T
            psi = per_mode/(ase + nli_scale*per_mode*nli)
            margin = np.min(psi/theta, axis=1)
            best = int(np.argmax(margin))
            if margin[best] >= 1.0 - QOS_TOL:
                return row, P[best]
        return None

    def run(self, top:int = 10) -> OracleResult:
        start = time.perf_counter()
        ids = tuple(self.inst.routing.request_ids)
        if any(len(options) == 0 for options in self.options):
            return OracleResult(False, None, None, request_ids=ids, wall_time=time.perf_counter() - start)

        size = self.enumeration_size()
        if size > self.grid.cap:
            raise EnumerationCapError(
                f'brute-force enumeration of {size:.3e} grid points exceeds the cap of {self.grid.cap:.3e}',
                estimate=size)

        powers = [np.array([opt.power for opt in options]) for options in self.options]
        totals = powers[0]
        for p in powers[1:]:
            totals = np.add.outer(totals, p)
        order = np.argsort(np.ravel(totals), kind='stable')
        shape = tuple(len(options) for options in self.options)

        ranked = []
        evaluated = 0
        for flat in order:
            choice = tuple(self.options[q][j] for q, j in enumerate(np.unravel_index(flat, shape)))
            evaluated += 1
            point = self._feasible_point(choice)
            if point is None:
                continue
            carriers, p = point
            configs = [
                TransponderConfig(c=opt.c, b=opt.b, r=opt.r, p=float(p[q]), m=opt.m, omega=float(carriers[q]))
                for q, opt in enumerate(choice)
            ]
            ranked.append((float(sum(opt.power for opt in choice)), configs))
            if len(ranked) >= top:
                break

        wall_time = time.perf_counter() - start
        if not ranked:
            return OracleResult(False, None, None, request_ids=ids, enumeration_size=size,
                                evaluated=evaluated, wall_time=wall_time)
        return OracleResult(
            feasible=True,
            objective_power_W=ranked[0][0],
            configs=ranked[0][1],
            ranked=ranked,
            request_ids=ids,
            enumeration_size=size,
            evaluated=evaluated,
            wall_time=wall_time,
        )


def brute_force_tcs(inst, grid:GridSpec = None, top:int = 10) -> OracleResult:
    """
    Grid optimum of the integer TCS problem of a small instance.

    Parameters
    ----------
    inst : ProblemInstance
        at most three requests
    grid : GridSpec, optional
        defaults to GridSpec.for_instance(inst)
    top : int
        feasible integer choices kept in OracleResult.ranked

    Returns
    -------
    OracleResult
        feasible is False when no grid point satisfies every constraint

    Raises
    ------
    EnumerationCapError
        when the reduced enumeration exceeds grid.cap
    """
    return BruteForceTCS(inst, grid).run(top=top)


def write_ranked_csv(result:OracleResult, filename:str):
    """One row per request of every ranked choice."""
    rows = []
    for rank, (power, configs) in enumerate(result.ranked, start=1):
        for rid, cfg in zip(result.request_ids, configs):
            rows.append([rank, power, rid, float(cfg.c), int(cfg.b), float(cfg.r), float(cfg.p*1e3),
                         int(cfg.m), float(cfg.omega/1e9)])
    write_csv(filename, RANKED_COLUMNS, rows)
