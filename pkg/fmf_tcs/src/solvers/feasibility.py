from dataclasses import dataclass, field
import numpy as np

from fmf_tcs.src.phy.transponder import TransponderConfig, bandwidth, osnr_threshold, capacity_values
from fmf_tcs.src.phy.osnr import osnr_all

# residual <= tolerance passes; every residual is normalized
TOLERANCES = {
    'qos': 1e-6,
    'nonoverlap': 1e-6,
    'spectrum': 1e-9,
    'rate': 1e-9,
    'distance': 1e-3,
    'integer': 0.0,
    'power': 1e-9,
}

@dataclass
class FeasibilityResult:
    """
    Attributes
    ----------
    passed : bool
    residuals : dict
        constraint name -> normalized residual, positive when violated
    violated : list[str]
        names whose residual exceeds the tolerance of their family
    worst : tuple
        (name, residual) with the largest residual relative to its tolerance
    """
    passed: bool
    residuals: dict = field(default_factory=dict)
    violated: list = field(default_factory=list)
    worst: tuple = None


def _family(name:str) -> str:
    family = name.split('[')[0]
    return 'spectrum' if family.startswith('spectrum') else family


def feasibility_check(configs:list[TransponderConfig], inst, distances:dict = None) -> FeasibilityResult:
    """
    Checks integer configurations against the MINLP constraints directly,
    without the log-domain program.

    Parameters
    ----------
    configs : list[TransponderConfig]
        one per request in routing order
    inst : ProblemInstance
    distances : dict, optional
        (q, i) -> carrier distance d_qi [Hz] to check against |omega_q - omega_i|

    Returns
    -------
    FeasibilityResult

    Residuals
    ---------
    qos         1 - Psi/Theta                                 (Psi >= Theta (1 - 1e-6))
    nonoverlap  (Delta_a/2 + G + Delta_b/2 - (omega_b - omega_a))/G
    spectrum    (Delta/2 - omega)/B and (omega + Delta/2 - B)/B
    rate        (R - capacity)/R
    distance    |d_qi - |omega_q - omega_i|| / G              (<= 1e-3)
    integer     0 or 1 for membership of b, m, c, r in their sets
    power       bound violation of p relative to the bound
    """
    if len(configs) != inst.n:
        raise ValueError(f'{len(configs)} configurations given for {inst.n} requests')
    k = inst.constants
    ds = inst.discrete
    routing = inst.routing
    ids = routing.request_ids
    B = inst.bandwidth_B

    c = np.array([cfg.c for cfg in configs], dtype=float)
    b = np.array([cfg.b for cfg in configs], dtype=float)
    r = np.array([cfg.r for cfg in configs], dtype=float)
    p = np.array([cfg.p for cfg in configs], dtype=float)
    m = np.array([cfg.m for cfg in configs], dtype=float)
    omega = np.array([cfg.omega for cfg in configs], dtype=float)
    width = bandwidth(b, k)

    residuals = {}
    for q, rid in enumerate(ids):
        ok = (
            float(b[q]).is_integer() and ds.b_range[0] <= b[q] <= ds.b_range[1]
            and float(m[q]).is_integer() and ds.m_range[0] <= m[q] <= ds.m_range[1]
            and np.any(np.isclose(c[q], ds.c_values, rtol=1e-9, atol=0.0))
            and np.any(np.isclose(r[q], ds.r_values, rtol=1e-9, atol=0.0))
        )
        residuals[f'integer[{rid}]'] = 0.0 if ok else 1.0

    try:
        psi = osnr_all(configs, inst)
    except ValueError:
        psi = np.zeros(inst.n)
    theta = osnr_threshold(c, r, k)
    for q, rid in enumerate(ids):
        residuals[f'qos[{rid}]'] = float(1.0 - psi[q]/theta[q])

    for a, bb in routing.consecutive_pairs:
        required = 0.5*width[a] + k.G + 0.5*width[bb]
        residuals[f'nonoverlap[{ids[a]},{ids[bb]}]'] = float((required - (omega[bb] - omega[a]))/k.G)

    capacity = capacity_values(c, b, r, m, routing.span_N, inst.coupling, k)
    rates = inst.rates
    p_lo, p_hi = inst.power_bounds
    for q, rid in enumerate(ids):
        residuals[f'spectrum_lower[{rid}]'] = float((0.5*width[q] - omega[q])/B)
        residuals[f'spectrum_upper[{rid}]'] = float((omega[q] + 0.5*width[q] - B)/B)
        residuals[f'rate[{rid}]'] = float((rates[q] - capacity[q])/rates[q])
        power = max((p_lo - p[q])/p_lo, (p[q] - p_hi)/p_hi)
        if inst.power_mode == 'fixed':
            power = max(power, abs(p[q]/m[q] - inst.fixed_power[q])/inst.fixed_power[q])
        residuals[f'power[{rid}]'] = float(power)

    if distances is not None:
        for (q, i), d in distances.items():
            residuals[f'distance[{ids[q]},{ids[i]}]'] = float(abs(d - abs(omega[q] - omega[i]))/k.G)

    violated = [name for name, value in residuals.items() if not value <= TOLERANCES[_family(name)]]
    def excess(item):
        name, value = item
        return value - TOLERANCES[_family(name)]
    worst = max(residuals.items(), key=excess) if residuals else None
    return FeasibilityResult(passed=not violated, residuals=residuals, violated=violated, worst=worst)
