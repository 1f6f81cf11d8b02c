from dataclasses import dataclass, field, replace
import hashlib
import os
import yaml

from fmf_tcs.src.network import (
    Topology, load_topology, bundled_topology, load_traffic, uniform_traffic, traffic_to_document,
)
from fmf_tcs.src.phy import PhysicalConstants, CouplingModel, load_constants
from fmf_tcs.src.ros import RosConfig, solve_ros, load_ros
from fmf_tcs.src.program import DiscreteSets, build_instance
from fmf_tcs.src.solvers import SolverOptions
from fmf_tcs.utils.error_utils import ScenarioError, TopologyError, RoutingError
from fmf_tcs.utils.inputs import load_document, mw_to_w

SWEEP_AXES = ('traffic_tbps', 'modes', 'coupling', 'power_mode')
POWER_MODES = ('adaptive', 'fixed', 'both')
BUNDLED = ('ring6', 'cost239')

_KNOWN_FIELDS = (
    'name', 'topology', 'modes', 'traffic', 'constants', 'coupling', 'power_mode', 'discrete',
    'power_bounds_mw', 'penalty_K', 'solver', 'ros', 'routing', 'sweep', 'oracle', 'seed', 'workers',
)
_ORACLE_DEFAULTS = {
    'random_instances': 0,
    'requests': 2,
    'min_rate_gbps': 10.0,
    'max_rate_gbps': 200.0,
    'points_per_decade': 20,
    'decades': 3,
    'cap': 1e8,
    'top': 10,
}


@dataclass(frozen=True)
class Scenario:
    """
    One experiment: a network, its traffic, physics and solver settings, and
    at most one sweep axis.

    Attributes
    ----------
    name : str
    topology : Topology
        with the mode budget of the scenario applied
    traffic : dict
        either {'requests': [Request]} or {'total_tbps', 'pairs', 'jitter'}
    constants : PhysicalConstants
    coupling : str
    power_mode : str
        'adaptive', 'fixed' or 'both'
    discrete : DiscreteSets
    power_bounds : tuple
        (low, high) total transmit power [W]
    penalty_K : float or None
    solver : dict
        SolverOptions keyword arguments
    ros : RosConfig
    routing_file : str or None
        fixed ROS document; only with explicit requests
    sweep_axis : str or None
    sweep_values : tuple
    oracle : dict
    seed : int
    workers : int
    digest : str
        sha256 of the resolved inputs
    """
    name: str
    topology: Topology
    traffic: dict
    constants: PhysicalConstants
    coupling: str
    power_mode: str
    discrete: DiscreteSets
    power_bounds: tuple
    penalty_K: float
    solver: dict
    ros: RosConfig
    routing_file: str = None
    sweep_axis: str = None
    sweep_values: tuple = ()
    oracle: dict = field(default_factory=lambda: dict(_ORACLE_DEFAULTS))
    seed: int = 0
    workers: int = 1
    digest: str = ''

    # ------------------------------------------------------------------ overrides
    def override(self, seed:int = None, power_mode:str = None, coupling:str = None, modes:int = None) -> 'Scenario':
        """Copy with command-line overrides applied (None keeps the scenario value)."""
        changes = {}
        if seed is not None:
            changes['seed'] = _check_int(seed, 'seed', lower=0)
        if power_mode is not None:
            if power_mode not in POWER_MODES:
                raise ScenarioError(f"power_mode must be one of {POWER_MODES}, got {power_mode!r}", 'power_mode')
            changes['power_mode'] = power_mode
        if coupling is not None:
            changes['coupling'] = _coupling(coupling)
        if modes is not None:
            changes['topology'] = _with_modes(self.topology, modes)
        if not changes:
            return self
        changed = replace(self, **changes)
        return replace(changed, digest=scenario_digest(changed))

    # ------------------------------------------------------------------ points
    def series(self) -> tuple:
        if self.sweep_axis == 'power_mode':
            return ('sweep',)
        if self.power_mode == 'both':
            return ('fixed', 'adaptive')
        return (self.power_mode,)

    def base_value(self):
        """Sweep value used by single solves: the first one, or None without a sweep."""
        return self.sweep_values[0] if self.sweep_values else None

    def point_settings(self, value = None, series:str = None) -> dict:
        """topology, traffic total, coupling and power mode of one sweep point."""
        topology = self.topology
        total = self.traffic.get('total_tbps')
        coupling = self.coupling
        power_mode = series if series in ('adaptive', 'fixed') else self.power_mode
        if power_mode == 'both':
            power_mode = 'adaptive'
        axis = self.sweep_axis
        if value is not None:
            if axis == 'traffic_tbps':
                total = float(value)
            elif axis == 'modes':
                topology = _with_modes(topology, value)
            elif axis == 'coupling':
                coupling = value
            elif axis == 'power_mode':
                power_mode = value
        return {'topology': topology, 'total_tbps': total, 'coupling': coupling, 'power_mode': power_mode}

    def requests(self, topology:Topology = None, total_tbps:float = None) -> list:
        topology = topology if topology is not None else self.topology
        if 'requests' in self.traffic:
            return list(self.traffic['requests'])
        total = total_tbps if total_tbps is not None else self.traffic['total_tbps']
        return uniform_traffic(topology, total, pairs=self.traffic['pairs'], jitter=self.traffic['jitter'], seed=self.seed)

    def instance(self, value = None, series:str = None):
        """
        ProblemInstance of a sweep point.

        Returns
        -------
        (ProblemInstance, str)
            the instance and its power mode; fixed mode is applied by the caller
        """
        settings = self.point_settings(value, series)
        topology = settings['topology']
        requests = self.requests(topology, settings['total_tbps'])
        if self.routing_file is not None:
            routing = load_ros(self.routing_file, topology, requests)
        else:
            routing = solve_ros(topology, requests, self.ros)
        inst = build_instance(
            topology, requests, routing,
            constants=self.constants,
            coupling=settings['coupling'],
            discrete=self.discrete,
            penalty_K=self.penalty_K,
            power_bounds=self.power_bounds,
        )
        return inst, settings['power_mode']

    def solver_options(self) -> SolverOptions:
        return SolverOptions(**self.solver)


# ---------------------------------------------------------------------- loading
def _check_int(value, name:str, lower:int = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{name} must be an integer, got {value!r}", name)
    if lower is not None and value < lower:
        raise ScenarioError(f"{name} must be at least {lower}, got {value}", name)
    return value


def _coupling(value) -> str:
    try:
        return str(CouplingModel.from_value(value))
    except (TypeError, ValueError) as error:
        raise ScenarioError(f"invalid coupling {value!r}: {error}", 'coupling') from None


def _with_modes(topology:Topology, modes) -> Topology:
    try:
        return topology.with_modes(modes)
    except TopologyError as error:
        raise ScenarioError(error.message, 'modes') from None


def _resolve(base_dir:str, ref) -> str:
    if not isinstance(ref, str):
        raise ScenarioError(f"expected a file name, got {ref!r}")
    path = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
    if not os.path.isfile(path):
        raise ScenarioError(f"referenced file '{ref}' does not exist")
    return path


def _load_topology(document:dict, base_dir:str, constants:PhysicalConstants) -> Topology:
    ref = document.get('topology')
    if ref is None:
        raise ScenarioError("missing field 'topology'", 'topology')
    if isinstance(ref, dict):
        return load_topology(ref, constants)
    if ref in BUNDLED:
        return bundled_topology(ref, constants)
    try:
        return load_topology(_resolve(base_dir, ref), constants)
    except ScenarioError as error:
        raise ScenarioError(error.message, 'topology') from None


def _load_traffic(document:dict, base_dir:str, topology:Topology, constants:PhysicalConstants, axis:str) -> dict:
    spec = document.get('traffic')
    if spec is None:
        raise ScenarioError("missing field 'traffic'", 'traffic')
    if isinstance(spec, str):
        spec = {'file': spec}
    if not isinstance(spec, dict):
        raise ScenarioError('traffic must be a mapping', 'traffic')

    if 'file' in spec or 'requests' in spec:
        if axis == 'traffic_tbps':
            raise ScenarioError('a traffic sweep needs uniform traffic (total_tbps), not explicit requests', 'traffic')
        source = _resolve(base_dir, spec['file']) if 'file' in spec else {'requests': spec['requests']}
        return {'requests': load_traffic(source, topology, constants)}

    unknown = sorted(set(spec) - {'total_tbps', 'pairs', 'jitter'})
    if unknown:
        raise ScenarioError(f"unknown traffic field(s): {', '.join(unknown)}", 'traffic')
    total = spec.get('total_tbps')
    if total is None and axis != 'traffic_tbps':
        raise ScenarioError('uniform traffic needs total_tbps', 'traffic.total_tbps')
    traffic = {'total_tbps': None if total is None else float(total),
               'pairs': spec.get('pairs', 'unordered'),
               'jitter': float(spec.get('jitter', 0.0))}
    if traffic['pairs'] not in ('unordered', 'ordered'):
        raise ScenarioError(f"traffic.pairs must be 'unordered' or 'ordered', got {traffic['pairs']!r}", 'traffic.pairs')
    if traffic['total_tbps'] is not None and traffic['total_tbps'] <= 0:
        raise ScenarioError('traffic.total_tbps must be positive', 'traffic.total_tbps')
    if not 0.0 <= traffic['jitter'] < 1.0:
        raise ScenarioError('traffic.jitter must lie in [0, 1)', 'traffic.jitter')
    return traffic


def _load_sweep(document:dict) -> tuple:
    sweep = document.get('sweep')
    if sweep is None:
        return None, ()
    if not isinstance(sweep, dict) or set(sweep) != {'axis', 'values'}:
        raise ScenarioError('sweep must be a mapping with exactly the fields axis and values', 'sweep')
    axis = sweep['axis']
    if axis not in SWEEP_AXES:
        raise ScenarioError(f"sweep.axis must be one of {SWEEP_AXES}, got {axis!r}", 'sweep.axis')
    values = sweep['values']
    if not isinstance(values, list) or len(values) == 0:
        raise ScenarioError('sweep.values must be a non-empty list', 'sweep.values')
    if axis == 'traffic_tbps':
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) or v <= 0 for v in values):
            raise ScenarioError('traffic sweep values must be positive numbers', 'sweep.values')
        values = [float(v) for v in values]
    elif axis == 'modes':
        values = [_check_int(v, 'sweep.values', lower=1) for v in values]
    elif axis == 'coupling':
        values = [_coupling(v) for v in values]
    else:
        if any(v not in ('adaptive', 'fixed') for v in values):
            raise ScenarioError("power_mode sweep values must be 'adaptive' or 'fixed'", 'sweep.values')
    if len(set(values)) != len(values):
        raise ScenarioError('sweep.values must not repeat', 'sweep.values')
    return axis, tuple(values)


def load_scenario(path:str) -> Scenario:
    """
    Loads and validates a scenario file.

    Topology, traffic, constants and ROS files are resolved relative to the
    scenario file; 'ring6' and 'cost239' name the bundled topologies.

    Raises
    ------
    ScenarioError
        for every invalid field or missing file; topology and traffic
        problems are re-raised with their diagnostics
    """
    if not os.path.isfile(path):
        raise ScenarioError(f"scenario file '{path}' does not exist")
    base_dir = os.path.dirname(os.path.abspath(path))
    try:
        document = load_document(path, 'scenario')
    except (yaml.YAMLError, ValueError, TypeError) as error:
        raise ScenarioError(f'cannot read scenario: {error}') from None

    unknown = sorted(set(document) - set(_KNOWN_FIELDS))
    if unknown:
        raise ScenarioError(f"unknown scenario field(s): {', '.join(map(str, unknown))}", unknown[0])

    try:
        constants_ref = document.get('constants')
        if isinstance(constants_ref, str):
            constants_ref = _resolve(base_dir, constants_ref)
        constants = load_constants(constants_ref)

        axis, values = _load_sweep(document)
        topology = _load_topology(document, base_dir, constants)
        if document.get('modes') is not None:
            topology = _with_modes(topology, document['modes'])
        traffic = _load_traffic(document, base_dir, topology, constants, axis)

        routing_file = None
        if document.get('routing') is not None:
            if 'requests' not in traffic:
                raise ScenarioError('a fixed routing file needs explicit requests', 'routing')
            routing_file = _resolve(base_dir, document['routing'])

        discrete = DiscreteSets.from_document(document.get('discrete'))
        ros = RosConfig(**dict(document.get('ros') or {}))
        solver = dict(document.get('solver') or {})
        SolverOptions(**solver)

        bounds = document.get('power_bounds_mw', [1e-3, 1e3])
        if not isinstance(bounds, list) or len(bounds) != 2 or not 0 < bounds[0] < bounds[1]:
            raise ScenarioError('power_bounds_mw must be [low, high] with 0 < low < high', 'power_bounds_mw')

        oracle = dict(_ORACLE_DEFAULTS)
        oracle_doc = dict(document.get('oracle') or {})
        unknown = sorted(set(oracle_doc) - set(_ORACLE_DEFAULTS))
        if unknown:
            raise ScenarioError(f"unknown oracle field(s): {', '.join(unknown)}", 'oracle')
        oracle.update(oracle_doc)

        power_mode = document.get('power_mode', 'adaptive')
        if power_mode not in POWER_MODES:
            raise ScenarioError(f"power_mode must be one of {POWER_MODES}, got {power_mode!r}", 'power_mode')
        if axis == 'power_mode' and power_mode == 'both':
            power_mode = 'adaptive'

        scenario = Scenario(
            name=str(document.get('name', os.path.splitext(os.path.basename(path))[0])),
            topology=topology,
            traffic=traffic,
            constants=constants,
            coupling=_coupling(document.get('coupling', 'strong')),
            power_mode=power_mode,
            discrete=discrete,
            power_bounds=(mw_to_w(float(bounds[0])), mw_to_w(float(bounds[1]))),
            penalty_K=None if document.get('penalty_K') is None else float(document['penalty_K']),
            solver=solver,
            ros=ros,
            routing_file=routing_file,
            sweep_axis=axis,
            sweep_values=values,
            oracle=oracle,
            seed=_check_int(document.get('seed', 0), 'seed', lower=0),
            workers=_check_int(document.get('workers', 1), 'workers', lower=1),
        )
    except (TopologyError, RoutingError) as error:
        raise ScenarioError(str(error)) from None
    except (KeyError, TypeError, ValueError) as error:
        if isinstance(error, ScenarioError):
            raise
        raise ScenarioError(f'invalid scenario: {error}') from None
    return replace(scenario, digest=scenario_digest(scenario))


def scenario_digest(scenario:Scenario) -> str:
    """sha256 of the resolved inputs of a scenario."""
    document = {
        'topology': scenario.topology.to_document(),
        'traffic': traffic_to_document(scenario.traffic['requests']) if 'requests' in scenario.traffic
                   else dict(scenario.traffic),
        'constants': scenario.constants.to_document(),
        'coupling': scenario.coupling,
        'power_mode': scenario.power_mode,
        'discrete': {key: list(getattr(scenario.discrete, key)) if getattr(scenario.discrete, key) is not None else None
                     for key in ('c_values', 'r_values', 'b_range', 'm_range')},
        'power_bounds': list(scenario.power_bounds),
        'penalty_K': scenario.penalty_K,
        'solver': dict(sorted(scenario.solver.items())),
        'ros': {'k_paths': scenario.ros.k_paths, 'ordering_rule': scenario.ros.ordering_rule},
        'sweep': {'axis': scenario.sweep_axis, 'values': list(scenario.sweep_values)},
        'seed': scenario.seed,
    }
    if scenario.routing_file is not None:
        with open(scenario.routing_file, 'rb') as f:
            document['routing'] = hashlib.sha256(f.read()).hexdigest()
    text = yaml.safe_dump(document, sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()
