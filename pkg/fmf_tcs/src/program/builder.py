from collections import defaultdict
from dataclasses import dataclass
import numpy as np

from fmf_tcs.src.program.program import ConvexProgram
from fmf_tcs.src.program.layout import VariableLayout, LN2
from fmf_tcs.src.program.instance import ProblemInstance
from fmf_tcs.src.phy.constants import derived_zeta
from fmf_tcs.src.phy.transponder import TransponderConfig, bandwidth, osnr_threshold, capacity_values
from fmf_tcs.src.constraints.objective import add_power_objective, add_distance_penalty
from fmf_tcs.src.constraints.qos import add_qos_constraints
from fmf_tcs.src.constraints.nonoverlap import add_nonoverlap_constraints
from fmf_tcs.src.constraints.spectrum import add_spectrum_constraints
from fmf_tcs.src.constraints.rate import add_rate_constraints
from fmf_tcs.src.constraints.threshold_aux import add_threshold_aux_constraints
from fmf_tcs.src.constraints.distance import add_distance_constraints
from fmf_tcs.utils.error_utils import InfeasibleProgramError


@dataclass(frozen=True)
class IntegerVariable:
    """
    A relaxed integer decision of the program.

    Attributes
    ----------
    index : int
        program variable index
    kind : str
        'b', 'm', 'c' or 'r'
    q : int
        request index
    values : tuple
        admissible values in natural units, ascending
    name : str
    """
    index: int
    kind: str
    q: int
    values: tuple
    name: str

    @property
    def log_domain(self) -> bool:
        return self.kind != 'b'

    def natural(self, value:float) -> float:
        return float(np.exp(value)) if self.log_domain else float(value)

    def encode(self, natural:float) -> float:
        return float(np.log(natural)) if self.log_domain else float(natural)

    def nearest(self, natural:float) -> tuple[int, float]:
        """(position in values, distance) of the admissible value closest to natural."""
        values = np.asarray(self.values, dtype=float)
        if self.kind in ('c', 'r'):
            distance = np.abs(values - natural)/values
        else:
            distance = np.abs(values - natural)
        pos = int(np.argmin(distance))
        return pos, float(distance[pos])


def program_pairs(routing) -> list[tuple[int, int]]:
    """Ordered request index pairs with at least one shared span."""
    pairs = []
    for q, i in routing.sharing_pairs:
        pairs += [(q, i), (i, q)]
    return sorted(pairs)


def diagnose_spectrum(inst:ProblemInstance):
    """
    Checks before solving that the bounds admit a solution at all.

    The narrowest carriers, stacked with guard bands along every link in the
    spectral order, must fit into the fiber bandwidth, and every rate must be
    reachable with the largest configuration.

    Raises
    ------
    InfeasibleProgramError
    """
    k = inst.constants
    ds = inst.discrete
    routing = inst.routing
    B = inst.bandwidth_B
    min_width = float(bandwidth(ds.b_range[0], k))

    predecessors = defaultdict(set)
    for order in routing.link_order.values():
        for a, b in zip(order[:-1], order[1:]):
            predecessors[b].add(a)

    violated = []
    left_edge = {}
    for rid in routing.global_order:
        left_edge[rid] = max((left_edge[a] + min_width + k.G for a in predecessors[rid]), default=0.0)
        overflow = left_edge[rid] + min_width - B
        if overflow > 0.0:
            violated.append((f'spectrum_upper[{rid}]', overflow/B))
    if violated:
        violated.sort(key=lambda item: -item[1])
        raise InfeasibleProgramError(
            f'minimum bandwidths and guard bands along the spectral order exceed the {B/1e9:g} GHz of the fiber',
            violated)

    max_capacity = capacity_values(
        ds.c_values[-1], ds.b_range[1], ds.r_values[-1], ds.m_range[1],
        routing.span_N, inst.coupling, k)
    for q, rid in enumerate(routing.request_ids):
        if inst.rates[q] > max_capacity[q]:
            violated.append((f'rate[{rid}]', float(np.log(inst.rates[q]/max_capacity[q]))))
    if violated:
        violated.sort(key=lambda item: -item[1])
        raise InfeasibleProgramError('demanded rates exceed the largest transponder configuration', violated)


def variable_bounds(inst:ProblemInstance, layout:VariableLayout) -> tuple[np.ndarray, np.ndarray]:
    k = inst.constants
    ds = inst.discrete
    lower = np.empty(layout.size)
    upper = np.empty(layout.size)

    def put(block, lo, hi):
        lower[layout.block(block)] = lo
        upper[layout.block(block)] = hi

    put('C', np.log(ds.c_values[0]), np.log(ds.c_values[-1]))
    put('R', np.log(ds.r_values[0]), np.log(ds.r_values[-1]))
    put('P', np.log(inst.power_bounds[0]), np.log(inst.power_bounds[1]))
    put('M', np.log(ds.m_range[0]), np.log(ds.m_range[1]))
    put('W', np.log(0.5*bandwidth(ds.b_range[0], k)), np.log(inst.bandwidth_B))
    put('T', np.log1p(k.kappa3*ds.c_values[0]), np.log1p(k.kappa3*ds.c_values[-1]) + 1.0)
    put('b', ds.b_range[0], ds.b_range[1])
    lower[layout.d_slice] = np.log(k.F)
    upper[layout.d_slice] = np.log(inst.bandwidth_B)

    if inst.power_mode == 'fixed':
        per_mode = np.log(inst.fixed_power)
        M = layout.block('M')
        lower[M] = np.maximum(lower[M], np.log(inst.power_bounds[0]) - per_mode)
        upper[M] = np.minimum(upper[M], np.log(inst.power_bounds[1]) - per_mode)
        empty = np.flatnonzero(lower[M] > upper[M])
        if empty.size:
            raise InfeasibleProgramError(
                'fixed per-mode power leaves no admissible mode count within the power bounds',
                [(f'power_bounds[{layout.request_ids[q]}]', float(lower[M][q] - upper[M][q])) for q in empty])
        # placeholder, P is substituted by M + ln(per-mode power)
        lower[layout.block('P')] = upper[layout.block('P')] = per_mode
    return lower, upper


def integer_variables(inst:ProblemInstance, layout:VariableLayout, lower:np.ndarray, upper:np.ndarray) -> list[IntegerVariable]:
    ds = inst.discrete
    grids = {'b': ds.b_values, 'm': ds.m_values, 'c': ds.c_values, 'r': ds.r_values}
    block_of = {'b': 'b', 'm': 'M', 'c': 'C', 'r': 'R'}
    out = []
    for q, rid in enumerate(layout.request_ids):
        for kind in ('b', 'm', 'c', 'r'):
            index = layout.idx(block_of[kind], q)
            variable = IntegerVariable(index, kind, q, tuple(grids[kind]), f'{kind}[{rid}]')
            values = tuple(v for v in grids[kind] if lower[index] - 1e-12 <= variable.encode(v) <= upper[index] + 1e-12)
            if not values:
                raise InfeasibleProgramError(f'no admissible value of {variable.name} lies within its bounds')
            out.append(IntegerVariable(index, kind, q, values, variable.name))
    return out


def build_program(inst:ProblemInstance, name:str = 'tcs') -> ConvexProgram:
    """
    Log-domain convex TCS program of an instance.

    Variables follow VariableLayout. In fixed power mode every total power P_q
    is replaced by M_q + ln(per-mode power).

    Raises
    ------
    InfeasibleProgramError
        when the pre-solve diagnosis proves the bounds inconsistent
    """
    diagnose_spectrum(inst)
    layout = VariableLayout(inst.routing.request_ids, program_pairs(inst.routing))
    prog = ConvexProgram(layout.size, layout.names(), name=name)
    lower, upper = variable_bounds(inst, layout)

    if inst.power_mode == 'fixed':
        for q in range(inst.n):
            prog.tie(layout.idx('P', q), layout.idx('M', q), float(np.log(inst.fixed_power[q])))
    for j in range(layout.size):
        prog.set_bounds(j, lower[j], upper[j])

    add_power_objective(prog, inst, layout)
    add_distance_penalty(prog, inst, layout)
    add_qos_constraints(prog, inst, layout)
    add_nonoverlap_constraints(prog, inst, layout)
    add_spectrum_constraints(prog, inst, layout)
    add_rate_constraints(prog, inst, layout)
    add_threshold_aux_constraints(prog, inst, layout)
    add_distance_constraints(prog, inst, layout)

    distance_links = []
    for q, i in layout.pairs:
        left, right = inst.routing.left_right(q, i)
        distance_links.append((layout.d(q, i), layout.idx('W', left), layout.idx('W', right)))
    prog.metadata.update({
        'layout': layout,
        'integer': integer_variables(inst, layout, lower, upper),
        'distance_links': distance_links,
        'power_mode': inst.power_mode,
    })
    return prog.finalize()


def interior_clip(prog:ConvexProgram, x:np.ndarray) -> np.ndarray:
    """
    Moves x strictly inside the bounds of its free variables; fixed variables take their value.
    """
    x = np.array(x, dtype=float)
    fixed = prog.fixed_mask
    eps = np.minimum(1e-3, 0.01*(prog.upper - prog.lower))
    free = ~fixed
    x[free] = np.clip(x[free], prog.lower[free] + eps[free], prog.upper[free] - eps[free])
    x[fixed] = prog.lower[fixed]
    return x


def initial_point(prog:ConvexProgram, inst:ProblemInstance) -> np.ndarray:
    """
    Heuristic start: carriers spread evenly over the band in the global order
    with equal provisional widths, mid-grid c, r and b, m = min(2, M), and the
    power at four times the ASE-limited requirement.
    """
    k = inst.constants
    ds = inst.discrete
    layout = prog.metadata['layout']
    n = inst.n
    x = np.zeros(prog.n)

    slot = inst.bandwidth_B/n
    omega = (inst.routing.rank + 0.5)*slot
    b_mid = 0.5*(ds.b_range[0] + ds.b_range[1])
    width = min(float(bandwidth(b_mid, k)), 0.8*(slot - k.G))
    if width <= 0.0:
        width = float(bandwidth(ds.b_range[0], k))
    b0 = float(np.clip(np.log2(width/k.F), ds.b_range[0], ds.b_range[1]))
    width = float(bandwidth(b0, k))

    m0 = float(np.clip(min(2, ds.m_range[1]), ds.m_range[0], ds.m_range[1]))
    c0 = ds.c_values[len(ds.c_values)//2]
    r0 = ds.r_values[len(ds.r_values)//2]
    T0 = float(np.log1p(k.kappa3*c0)) + 0.1
    theta = osnr_threshold(c0, r0, k)*np.exp(0.1*k.kappa4)
    p0 = m0*4.0*theta*derived_zeta(k)*inst.routing.span_N*width

    x[layout.block('C')] = np.log(c0)
    x[layout.block('R')] = np.log(r0)
    x[layout.block('P')] = np.log(np.clip(p0, *inst.power_bounds))
    x[layout.block('M')] = np.log(m0)
    x[layout.block('W')] = np.log(omega)
    x[layout.block('T')] = T0
    x[layout.block('b')] = b0
    for q, i in layout.pairs:
        gap = abs(omega[q] - omega[i])
        x[layout.d(q, i)] = np.log(gap) - 0.05
    return interior_clip(prog, x)


def tighten_distances(prog:ConvexProgram, x:np.ndarray) -> np.ndarray:
    """
    Sets every distance variable to its carrier gap, ln(omega_right - omega_left).
    """
    x = np.array(x, dtype=float)
    for d, left, right in prog.metadata.get('distance_links', []):
        if x[right] <= x[left]:
            continue
        value = x[right] + np.log(-np.expm1(x[left] - x[right]))
        x[d] = np.clip(value, prog.lower[d], prog.upper[d])
    return x


def encode_configs(prog:ConvexProgram, inst:ProblemInstance, configs:list[TransponderConfig]) -> np.ndarray:
    """
    Program point of a list of configurations (one per request, in routing order).
    T is set to ln(1 + kappa3 c) and every D to the log carrier gap.
    """
    if len(configs) != inst.n:
        raise ValueError(f'{len(configs)} configurations given for {inst.n} requests')
    k = inst.constants
    layout = prog.metadata['layout']
    x = np.zeros(prog.n)
    for q, cfg in enumerate(configs):
        x[layout.idx('C', q)] = np.log(cfg.c)
        x[layout.idx('R', q)] = np.log(cfg.r)
        x[layout.idx('P', q)] = np.log(cfg.p)
        x[layout.idx('M', q)] = np.log(cfg.m)
        x[layout.idx('W', q)] = np.log(cfg.omega)
        x[layout.idx('T', q)] = np.log1p(k.kappa3*cfg.c)
        x[layout.idx('b', q)] = cfg.b
    if inst.power_mode == 'fixed':
        x[layout.block('P')] = prog.lower[layout.block('P')]
    omega = np.array([cfg.omega for cfg in configs], dtype=float)
    for q, i in layout.pairs:
        x[layout.d(q, i)] = np.log(abs(omega[q] - omega[i]))
    return x


def decode_point(prog:ConvexProgram, inst:ProblemInstance, x:np.ndarray, snap:bool = False) -> list[TransponderConfig]:
    """
    Configurations of a program point.

    With snap, b and m are rounded and c, r take the closest admissible value.
    """
    layout = prog.metadata['layout']
    ds = inst.discrete
    configs = []
    for q in range(inst.n):
        c = float(np.exp(x[layout.idx('C', q)]))
        r = float(np.exp(x[layout.idx('R', q)]))
        m = float(np.exp(x[layout.idx('M', q)]))
        b = float(x[layout.idx('b', q)])
        if snap:
            c = float(min(ds.c_values, key=lambda v: abs(v - c)))
            r = float(min(ds.r_values, key=lambda v: abs(v - r)))
            m = int(round(m))
            b = int(round(b))
        if inst.power_mode == 'fixed':
            p = float(m*inst.fixed_power[q])
        else:
            p = float(np.exp(x[layout.idx('P', q)]))
        omega = float(np.exp(x[layout.idx('W', q)]))
        configs.append(TransponderConfig(c=c, b=b, r=r, p=p, m=m, omega=omega))
    return configs
