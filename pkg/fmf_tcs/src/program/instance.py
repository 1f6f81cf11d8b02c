from dataclasses import dataclass, replace
import numpy as np

from fmf_tcs.src.network.topology import Topology, Request
from fmf_tcs.src.network.routing import RoutingSolution
from fmf_tcs.src.phy.constants import PhysicalConstants, CouplingModel
from fmf_tcs.src.phy.transponder import transponder_power, TransponderConfig
from fmf_tcs.utils.parameters import check_parameter

@dataclass(frozen=True)
class DiscreteSets:
    """
    Allowed values of the integer decisions.

    Attributes
    ----------
    c_values : tuple
        modulation levels [bits/symbol], ascending
    r_values : tuple
        coding rates in (0, 1], ascending
    b_range : tuple
        inclusive (low, high) of log2 subcarrier counts
    m_range : tuple or None
        inclusive (low, high) of active modes; None means (1, modes_M)
    """
    c_values: tuple = (1, 2, 3, 4, 5, 6)
    r_values: tuple = (0.6, 0.7, 0.8, 0.9)
    b_range: tuple = (4, 11)
    m_range: tuple = None

    def __post_init__(self):
        for name in ('c_values', 'r_values'):
            values = tuple(float(v) for v in getattr(self, name))
            if len(values) == 0:
                raise ValueError(f"{name} must not be empty")
            if any(b <= a for a, b in zip(values[:-1], values[1:])):
                raise ValueError(f"{name} must be strictly ascending. {values} given")
            object.__setattr__(self, name, values)
        if self.c_values[0] <= 0:
            raise ValueError(f"modulation levels must be positive. {self.c_values} given")
        if self.r_values[0] <= 0 or self.r_values[-1] > 1:
            raise ValueError(f"coding rates must lie in (0, 1]. {self.r_values} given")
        for name in ('b_range', 'm_range'):
            value = getattr(self, name)
            if value is None:
                continue
            if len(value) != 2:
                raise ValueError(f"{name} must be a (low, high) pair. {value} given")
            lo, hi = value
            check_parameter(lo, f'{name}[0]', types=int)
            check_parameter(hi, f'{name}[1]', types=int, lower=lo)
            object.__setattr__(self, name, (int(lo), int(hi)))
        if self.m_range is not None and self.m_range[0] < 1:
            raise ValueError(f"m_range must start at 1 or above. {self.m_range} given")

    @property
    def b_values(self) -> tuple:
        return tuple(range(self.b_range[0], self.b_range[1] + 1))

    @property
    def m_values(self) -> tuple:
        return tuple(range(self.m_range[0], self.m_range[1] + 1))

    def resolved(self, modes_M:int) -> 'DiscreteSets':
        if self.m_range is None:
            return replace(self, m_range=(1, int(modes_M)))
        if self.m_range[1] > modes_M:
            raise ValueError(f"m_range {self.m_range} exceeds the {modes_M} modes of the fiber")
        return self

    @classmethod
    def from_document(cls, document:dict) -> 'DiscreteSets':
        document = dict(document or {})
        kwargs = {}
        for key in ('c_values', 'r_values', 'b_range', 'm_range'):
            if key in document and document[key] is not None:
                kwargs[key] = tuple(document.pop(key))
        if document:
            raise ValueError(f"unknown discrete set field(s): {', '.join(sorted(document))}")
        return cls(**kwargs)


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """
    Everything the TCS program is built from.

    Request-indexed quantities follow routing.request_ids.

    Attributes
    ----------
    topology : Topology
    requests : tuple[Request]
    routing : RoutingSolution
    constants : PhysicalConstants
    coupling : CouplingModel
    discrete : DiscreteSets
        with m_range resolved against the mode count
    penalty_K : float
        weight of the sum of inverse carrier distances in the objective
    power_bounds : tuple
        (low, high) total transmit power [W]
    power_mode : str
        'adaptive' or 'fixed'
    fixed_power : np.ndarray or None
        per-mode transmit power [W] per request when power_mode is 'fixed'
    """
    topology: Topology
    requests: tuple
    routing: RoutingSolution
    constants: PhysicalConstants
    coupling: CouplingModel
    discrete: DiscreteSets
    penalty_K: float
    power_bounds: tuple = (1e-6, 1.0)
    power_mode: str = 'adaptive'
    fixed_power: np.ndarray = None

    @property
    def n(self) -> int:
        return len(self.requests)

    @property
    def bandwidth_B(self) -> float:
        return self.topology.bandwidth_B

    @property
    def rates(self) -> np.ndarray:
        return np.array([req.rate_R for req in self.requests], dtype=float)

    def with_fixed_power(self, per_mode_power) -> 'ProblemInstance':
        per_mode_power = np.asarray(per_mode_power, dtype=float)
        if per_mode_power.shape != (self.n,) or np.any(per_mode_power <= 0):
            raise ValueError('fixed power needs one positive per-mode power per request')
        return replace(self, power_mode='fixed', fixed_power=per_mode_power)


def default_penalty_K(constants:PhysicalConstants, discrete:DiscreteSets) -> float:
    """
    1e-9 * G [Hz] * transponder power of a mid-grid configuration [W].
    """
    b_mid = int(round(0.5*(discrete.b_range[0] + discrete.b_range[1])))
    r_mid = discrete.r_values[len(discrete.r_values)//2]
    m_lo = discrete.m_range[0] if discrete.m_range is not None else 1
    typical = transponder_power(TransponderConfig(c=discrete.c_values[0], b=b_mid, r=r_mid, p=1.0, m=m_lo, omega=1.0), constants)
    return 1e-9*constants.G*typical


def build_instance(
        topology:Topology,
        requests:list[Request],
        routing:RoutingSolution = None,
        constants:PhysicalConstants = None,
        coupling = 'strong',
        discrete:DiscreteSets = None,
        penalty_K:float = None,
        power_bounds:tuple = (1e-6, 1.0),
        ros = None,
    ) -> ProblemInstance:
    """
    Validates the inputs and assembles a ProblemInstance.

    Parameters
    ----------
    topology : Topology
    requests : list[Request]
    routing : RoutingSolution, optional
        computed with the ROS heuristic (settings ``ros``) when omitted
    constants : PhysicalConstants, optional
    coupling : str or CouplingModel
    discrete : DiscreteSets, optional
    penalty_K : float, optional
        defaults to default_penalty_K
    power_bounds : tuple
        (low, high) total transmit power [W]
    ros : RosConfig, optional
    """
    if constants is None:
        constants = PhysicalConstants()
    coupling = CouplingModel.from_value(coupling)
    discrete = (discrete if discrete is not None else DiscreteSets()).resolved(topology.modes_M)
    if routing is None:
        from fmf_tcs.src.ros.ros import solve_ros
        routing = solve_ros(topology, requests, ros)

    by_id = {req.id: req for req in requests}
    if set(by_id) != set(routing.request_ids) or len(by_id) != len(requests):
        raise ValueError('routing does not cover exactly the given requests')
    ordered = tuple(by_id[rid] for rid in routing.request_ids)
    if constants.max_bit_rate_C is not None:
        for req in ordered:
            if req.rate_R > constants.max_bit_rate_C:
                raise ValueError(f"request {req.id!r} rate exceeds the transponder maximum bit rate")

    if penalty_K is None:
        penalty_K = default_penalty_K(constants, discrete)
    check_parameter(penalty_K, 'penalty_K', types=(int, float))
    if penalty_K <= 0:
        raise ValueError(f"penalty_K must be strictly positive. {penalty_K} given")
    p_lo, p_hi = power_bounds
    if not 0 < p_lo < p_hi:
        raise ValueError(f"power bounds must satisfy 0 < low < high. {power_bounds} given")

    return ProblemInstance(
        topology=topology,
        requests=ordered,
        routing=routing,
        constants=constants,
        coupling=coupling,
        discrete=discrete,
        penalty_K=float(penalty_K),
        power_bounds=(float(p_lo), float(p_hi)),
    )
