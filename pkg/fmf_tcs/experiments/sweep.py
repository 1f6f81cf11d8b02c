from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import logging
import os
import platform
import numpy as np

from fmf_tcs.src.solvers import solve, fixed_power_baseline
from fmf_tcs.src.solvers.report import ELEMENTS
from fmf_tcs.utils.error_utils import InfeasibleProgramError, RoundingError
from fmf_tcs.utils.printing import write_csv, print_tabularized

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    'sweep_value', 'series', 'total_W', 'normalized', 'bias_W', 'codec_W', 'fft_W', 'dsp_W',
    'penalty', 'epochs', 'feasible', 'incumbent_used', 'requests',
]
TIMING_COLUMNS = ['sweep_value', 'series', 'wall_time_s']


def _value(value):
    return '' if value is None else value


@dataclass(frozen=True)
class SweepPoint:
    """
    Outcome of one (sweep value, series) solve; configs feed the next point
    of the chain as incumbent.
    """
    sweep_value: object
    series: str
    total_W: float
    breakdown: dict
    penalty: float
    epochs: int
    feasible: bool
    incumbent_used: bool
    requests: int
    wall_time: float
    status: str = ''
    configs: tuple = None


@dataclass
class SweepResult:
    """
    Points of a sweep in scenario order (sweep values, then series).
    """
    scenario: str
    axis: str
    points: list = field(default_factory=list)

    @property
    def any_infeasible(self) -> bool:
        return any(not point.feasible for point in self.points)

    def _reference(self) -> dict:
        first = {}
        for point in self.points:
            first.setdefault(point.series, point)
        return {series: point.total_W if point.feasible else np.nan for series, point in first.items()}

    def rows(self) -> list[list]:
        reference = self._reference()
        rows = []
        for point in self.points:
            ref = reference[point.series]
            normalized = point.total_W/ref if point.feasible and np.isfinite(ref) else np.nan
            rows.append([
                _value(point.sweep_value), point.series, float(point.total_W), float(normalized),
                *[float(point.breakdown[key]) for key in ELEMENTS],
                float(point.penalty), int(point.epochs), bool(point.feasible),
                bool(point.incumbent_used), int(point.requests),
            ])
        return rows

    def timing_rows(self) -> list[list]:
        return [[_value(point.sweep_value), point.series, float(point.wall_time)] for point in self.points]

    def write(self, out_dir:str) -> list[str]:
        """Writes sweep.csv, timing.csv and plotdata.csv; returns their paths."""
        from fmf_tcs.experiments.plotdata import emit_plotdata
        os.makedirs(out_dir, exist_ok=True)
        paths = [os.path.join(out_dir, name) for name in ('sweep.csv', 'timing.csv', 'plotdata.csv')]
        write_csv(paths[0], SWEEP_COLUMNS, self.rows())
        write_csv(paths[1], TIMING_COLUMNS, self.timing_rows())
        emit_plotdata(self, paths[2])
        return paths

    def print_summary(self):
        title = f'{self.scenario}: sweep over {self.axis}' if self.axis else self.scenario
        print_tabularized(SWEEP_COLUMNS, self.rows(), title=title)


def plan_chains(scenario) -> list[list[tuple]]:
    """
    Groups the (sweep value, series) points into chains that run in order.

    Along a chain the feasible sets grow (mode budget up, weak to strong
    coupling, fixed to adaptive power), so every point may start from the
    configuration of its predecessor. Chains are independent.
    """
    axis = scenario.sweep_axis
    values = scenario.sweep_values or (None,)
    series = scenario.series()
    if axis == 'modes':
        return [[(value, s) for value in sorted(values)] for s in series]
    if axis == 'coupling':
        return [[(value, s) for value in sorted(values, key=lambda v: v != 'weak')] for s in series]
    if axis == 'power_mode':
        return [[(value, s) for value in sorted(values, key=lambda v: v != 'fixed')] for s in series]
    return [[(value, s) for s in series] for value in values]


def run_point(scenario, value, series:str, incumbent = None) -> SweepPoint:
    """
    Solves one sweep point. Infeasible points are returned flagged, with NaN powers.
    """
    inst, power_mode = scenario.instance(value, series)
    opts = scenario.solver_options()
    logger.debug('solving %s=%s (%s, %d requests)', scenario.sweep_axis, value, power_mode, inst.n)
    try:
        if power_mode == 'fixed':
            report = fixed_power_baseline(inst, opts, incumbent)
        else:
            report = solve(inst, opts, incumbent)
    except (InfeasibleProgramError, RoundingError) as error:
        logger.warning('%s=%s (%s) infeasible: %s', scenario.sweep_axis, value, series, error.message)
        return SweepPoint(
            sweep_value=value, series=series, total_W=np.nan,
            breakdown={key: np.nan for key in ELEMENTS}, penalty=np.nan, epochs=0,
            feasible=False, incumbent_used=False, requests=inst.n, wall_time=0.0,
            status=error.message)
    if not report.feasible:
        logger.warning('%s=%s (%s): final configuration violates %s', scenario.sweep_axis, value, series,
                       ', '.join(name for name, res in report.residuals.items() if res > 0.0))
    return SweepPoint(
        sweep_value=value,
        series=series,
        total_W=report.objective_power_W,
        breakdown=dict(report.breakdown),
        penalty=report.penalty_value,
        epochs=report.epochs,
        feasible=report.feasible,
        incumbent_used=report.incumbent_used,
        requests=inst.n,
        wall_time=report.wall_time,
        status=report.status,
        configs=tuple(report.configs),
    )


def _run_chain(scenario, chain:list[tuple]) -> list[SweepPoint]:
    points = []
    incumbent = None
    for value, series in chain:
        point = run_point(scenario, value, series, incumbent)
        if point.feasible:
            incumbent = list(point.configs)
        points.append(point)
    return points


def run_sweep(scenario, workers:int = None) -> SweepResult:
    """
    Runs every point of a scenario, chains in parallel on a process pool.

    The result does not depend on the worker count: chains are independent
    and the points are sorted back into scenario order.
    """
    chains = plan_chains(scenario)
    workers = workers if workers is not None else scenario.workers
    workers = max(1, min(workers, len(chains)))
    logger.info('%s: %d points in %d chains on %d worker(s)',
                scenario.name, sum(len(chain) for chain in chains), len(chains), workers)
    if workers == 1:
        results = [_run_chain(scenario, chain) for chain in chains]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chain, [scenario]*len(chains), chains))

    values = list(scenario.sweep_values or (None,))
    series = list(scenario.series())
    points = sorted((point for chain in results for point in chain),
                    key=lambda p: (values.index(p.sweep_value), series.index(p.series)))
    return SweepResult(scenario.name, scenario.sweep_axis, points)


def versions() -> dict:
    import numpy
    import scipy
    import rustworkx
    import networkx
    import yaml
    from fmf_tcs import __version__
    return {
        'fmf_tcs': __version__,
        'python': platform.python_version(),
        'numpy': numpy.__version__,
        'scipy': scipy.__version__,
        'rustworkx': rustworkx.__version__,
        'networkx': networkx.__version__,
        'pyyaml': yaml.__version__,
    }


def write_manifest(scenario, out_dir:str, outputs:list[str], command:str) -> str:
    """manifest.txt: command, inputs hash, seed, sweep and package versions."""
    os.makedirs(out_dir, exist_ok=True)
    lines = [
        f'command: {command}',
        f'scenario: {scenario.name}',
        f'inputs_sha256: {scenario.digest}',
        f'seed: {scenario.seed}',
        f'power_mode: {scenario.power_mode}',
        f'coupling: {scenario.coupling}',
        f'modes: {scenario.topology.modes_M}',
        f'sweep_axis: {scenario.sweep_axis}',
        f'sweep_values: {", ".join(str(v) for v in scenario.sweep_values)}',
    ]
    lines += [f'version.{name}: {version}' for name, version in versions().items()]
    lines += [f'output: {os.path.basename(path)}' for path in outputs]
    path = os.path.join(out_dir, 'manifest.txt')
    with open(path, 'w') as f:
        f.write('\n'.join(lines) + '\n')
    return path
