from dataclasses import dataclass
import logging
import os
import time
import numpy as np

from fmf_tcs.src.network import Request
from fmf_tcs.src.ros import solve_ros
from fmf_tcs.src.program import build_instance
from fmf_tcs.src.solvers import solve
from fmf_tcs.src.oracle import brute_force_tcs, GridSpec, write_ranked_csv
from fmf_tcs.src.oracle.brute_force import MAX_REQUESTS
from fmf_tcs.utils.error_utils import InfeasibleProgramError, RoundingError, ScenarioError
from fmf_tcs.utils.inputs import id_key
from fmf_tcs.utils.printing import write_csv, print_tabularized

logger = logging.getLogger(__name__)

COMPARE_COLUMNS = [
    'instance', 'requests', 'solver_W', 'oracle_W', 'gap', 'solver_time_s', 'oracle_time_s',
    'speed_ratio', 'solver_feasible', 'oracle_feasible',
]


@dataclass(frozen=True)
class Comparison:
    instance: str
    requests: int
    solver_W: float
    oracle_W: float
    solver_time: float
    oracle_time: float
    solver_feasible: bool
    oracle_feasible: bool

    @property
    def gap(self) -> float:
        """(solver - oracle)/oracle; NaN unless both found a solution."""
        if not (self.solver_feasible and self.oracle_feasible):
            return np.nan
        return (self.solver_W - self.oracle_W)/self.oracle_W

    @property
    def speed_ratio(self) -> float:
        return self.oracle_time/self.solver_time if self.solver_time > 0.0 else np.nan

    def row(self) -> list:
        return [
            self.instance, self.requests, float(self.solver_W), float(self.oracle_W), float(self.gap),
            float(self.solver_time), float(self.oracle_time), float(self.speed_ratio),
            bool(self.solver_feasible), bool(self.oracle_feasible),
        ]


def random_requests(topology, count:int, rng:np.random.Generator, min_rate_gbps:float, max_rate_gbps:float) -> list:
    """count requests between distinct random node pairs, rates uniform in [min, max] Gb/s."""
    nodes = sorted(topology.nodes, key=id_key)
    pairs = [(a, b) for a in nodes for b in nodes if a != b]
    chosen = rng.choice(len(pairs), size=count, replace=False)
    rates = rng.uniform(min_rate_gbps, max_rate_gbps, size=count)
    return [Request(i + 1, *pairs[j], float(rate)*1e9) for i, (j, rate) in enumerate(zip(chosen, rates))]


def oracle_instances(scenario) -> list[tuple]:
    """
    (name, ProblemInstance) pairs: the scenario instance when it has at most
    three requests, then the seeded random variants.
    """
    instances = []
    value = scenario.base_value() if scenario.sweep_axis != 'power_mode' else None
    inst, _ = scenario.instance(value, 'adaptive')
    if inst.n <= MAX_REQUESTS:
        instances.append((scenario.name, inst))

    settings = scenario.point_settings(value, 'adaptive')
    topology = settings['topology']
    cfg = scenario.oracle
    count = int(cfg['requests'])
    if not 1 <= count <= MAX_REQUESTS:
        raise ScenarioError(f'oracle.requests must lie in [1, {MAX_REQUESTS}], got {count}', 'oracle.requests')
    rng = np.random.default_rng(scenario.seed)
    for j in range(int(cfg['random_instances'])):
        requests = random_requests(topology, count, rng, float(cfg['min_rate_gbps']), float(cfg['max_rate_gbps']))
        routing = solve_ros(topology, requests, scenario.ros)
        instances.append((f'random{j + 1}', build_instance(
            topology, requests, routing,
            constants=scenario.constants,
            coupling=settings['coupling'],
            discrete=scenario.discrete,
            penalty_K=scenario.penalty_K,
            power_bounds=scenario.power_bounds,
        )))
    if not instances:
        raise ScenarioError(
            f'the scenario has more than {MAX_REQUESTS} requests and oracle.random_instances is 0', 'oracle')
    return instances


def compare_instance(name:str, inst, opts, grid:GridSpec, top:int = 10, ranked_csv:str = None) -> Comparison:
    """
    Solver and brute-force optimum of one instance.

    Raises
    ------
    EnumerationCapError
        when the oracle refuses the instance
    """
    start = time.perf_counter()
    try:
        report = solve(inst, opts)
        solver_W, solver_feasible = report.objective_power_W, report.feasible
    except (InfeasibleProgramError, RoundingError) as error:
        logger.warning('%s: solver found no solution: %s', name, error.message)
        solver_W, solver_feasible = np.nan, False
    solver_time = time.perf_counter() - start

    oracle = brute_force_tcs(inst, grid, top=top)
    if ranked_csv is not None and oracle.feasible:
        write_ranked_csv(oracle, ranked_csv)
    return Comparison(
        instance=name,
        requests=inst.n,
        solver_W=solver_W,
        oracle_W=oracle.objective_power_W if oracle.feasible else np.nan,
        solver_time=solver_time,
        oracle_time=oracle.wall_time,
        solver_feasible=solver_feasible,
        oracle_feasible=oracle.feasible,
    )


def compare_oracle(scenario, out_dir:str = None) -> list[Comparison]:
    """
    Solver against brute-force oracle on the small instances of a scenario;
    writes oracle_compare.csv and one ranked oracle_<instance>.csv each to out_dir.
    """
    cfg = scenario.oracle
    opts = scenario.solver_options()
    comparisons = []
    for name, inst in oracle_instances(scenario):
        grid = GridSpec.for_instance(
            inst, points_per_decade=int(cfg['points_per_decade']), decades=int(cfg['decades']), cap=float(cfg['cap']))
        ranked_csv = None if out_dir is None else os.path.join(out_dir, f'oracle_{name}.csv')
        if out_dir is not None:
            os.makedirs(out_dir, exist_ok=True)
        comparison = compare_instance(name, inst, opts, grid, top=int(cfg['top']), ranked_csv=ranked_csv)
        logger.info('%s: solver %.6g W, oracle %.6g W, gap %.3g', name,
                    comparison.solver_W, comparison.oracle_W, comparison.gap)
        comparisons.append(comparison)
    if out_dir is not None:
        write_csv(os.path.join(out_dir, 'oracle_compare.csv'), COMPARE_COLUMNS, [c.row() for c in comparisons])
    return comparisons


def print_comparisons(comparisons:list[Comparison]):
    print_tabularized(COMPARE_COLUMNS, [c.row() for c in comparisons], title='solver against brute-force oracle')
