from dataclasses import dataclass, field
import numpy as np

from fmf_tcs.src.phy.transponder import TransponderConfig, power_breakdown, osnr_threshold
from fmf_tcs.src.phy.osnr import osnr_all
from fmf_tcs.utils.inputs import save_document, load_document
from fmf_tcs.utils.printing import write_csv, print_tabularized

CONFIG_COLUMNS = ['request_id', 'c', 'b', 'r', 'p_mW', 'm', 'omega_GHz', 'osnr_dB', 'threshold_dB', 'power_W']
ELEMENTS = ('bias', 'codec', 'fft', 'dsp')


@dataclass(frozen=True)
class RoundingStep:
    """
    One entry of the rounding trace.

    Attributes
    ----------
    variable : str
        integer variable name, e.g. 'b[3]'
    relaxed : float
        value in the continuous solution before fixing (natural units)
    fixed : float
        value it was fixed to
    epoch : int
    reason : str
        'accepted', 'forced', 'fallback', 'polish' or 'snap'
    """
    variable: str
    relaxed: float
    fixed: float
    epoch: int
    reason: str

    def to_dict(self) -> dict:
        return {'variable': self.variable, 'relaxed': float(self.relaxed), 'fixed': float(self.fixed),
                'epoch': int(self.epoch), 'reason': self.reason}


@dataclass
class SolveReport:
    """
    Final integer transponder configurations and how they were obtained.

    objective_power_W is the exact total transponder power, not the convex
    surrogate. Request-indexed lists follow request_ids.
    """
    configs: list
    request_ids: tuple
    power_mode: str
    coupling: str
    objective_power_W: float
    penalty_value: float
    breakdown: dict
    per_request_power: list
    osnr: list
    threshold: list
    residuals: dict
    feasible: bool
    kkt_residual: float = 0.0
    relaxed_objective: float = None
    rounding_trace: list = field(default_factory=list)
    epochs: int = 0
    wall_time: float = 0.0
    incumbent_used: bool = False
    status: str = ''

    def to_document(self) -> dict:
        configs = []
        for rid, cfg in zip(self.request_ids, self.configs):
            entry = {'request_id': rid}
            entry.update(cfg.to_dict())
            configs.append(entry)
        return {
            'power_mode': self.power_mode,
            'coupling': self.coupling,
            'objective_power_W': float(self.objective_power_W),
            'penalty_value': float(self.penalty_value),
            'breakdown': {key: float(self.breakdown[key]) for key in ELEMENTS},
            'feasible': bool(self.feasible),
            'incumbent_used': bool(self.incumbent_used),
            'kkt_residual': float(self.kkt_residual),
            'relaxed_objective': None if self.relaxed_objective is None else float(self.relaxed_objective),
            'epochs': int(self.epochs),
            'wall_time': float(self.wall_time),
            'status': self.status,
            'configs': configs,
            'per_request_power': [float(v) for v in self.per_request_power],
            'osnr': [float(v) for v in self.osnr],
            'threshold': [float(v) for v in self.threshold],
            'residuals': {name: float(value) for name, value in self.residuals.items()},
            'rounding_trace': [step.to_dict() for step in self.rounding_trace],
        }

    @classmethod
    def from_document(cls, document:dict) -> 'SolveReport':
        configs = [TransponderConfig.from_dict(entry) for entry in document['configs']]
        return cls(
            configs=configs,
            request_ids=tuple(entry['request_id'] for entry in document['configs']),
            power_mode=document['power_mode'],
            coupling=document['coupling'],
            objective_power_W=float(document['objective_power_W']),
            penalty_value=float(document['penalty_value']),
            breakdown={key: float(document['breakdown'][key]) for key in ELEMENTS},
            per_request_power=list(document['per_request_power']),
            osnr=list(document['osnr']),
            threshold=list(document['threshold']),
            residuals=dict(document.get('residuals', {})),
            feasible=bool(document['feasible']),
            kkt_residual=float(document.get('kkt_residual', 0.0)),
            relaxed_objective=document.get('relaxed_objective'),
            rounding_trace=[RoundingStep(**step) for step in document.get('rounding_trace', [])],
            epochs=int(document.get('epochs', 0)),
            wall_time=float(document.get('wall_time', 0.0)),
            incumbent_used=bool(document.get('incumbent_used', False)),
            status=document.get('status', ''),
        )

    def write_yaml(self, filename:str):
        save_document(self.to_document(), filename)

    @classmethod
    def read_yaml(cls, filename:str) -> 'SolveReport':
        return cls.from_document(load_document(filename))

    def config_rows(self) -> list[list]:
        rows = []
        for q, (rid, cfg) in enumerate(zip(self.request_ids, self.configs)):
            rows.append([
                rid, float(cfg.c), int(cfg.b), float(cfg.r), float(cfg.p*1e3), int(cfg.m),
                float(cfg.omega/1e9), _dB(self.osnr[q]), _dB(self.threshold[q]),
                float(self.per_request_power[q]),
            ])
        return rows

    def write_configs_csv(self, filename:str):
        write_csv(filename, CONFIG_COLUMNS, self.config_rows())

    def print_summary(self):
        title = f'{self.power_mode} TCS, {self.coupling} coupling: {self.objective_power_W:.6g} W'
        print_tabularized(CONFIG_COLUMNS, self.config_rows(), title=title)


def _dB(value:float) -> float:
    return float(10.0*np.log10(value)) if value > 0 else float('-inf')


def penalty_value(configs:list[TransponderConfig], inst) -> float:
    """K times the sum of inverse carrier distances over ordered sharing pairs."""
    omega = np.array([cfg.omega for cfg in configs], dtype=float)
    pairs = np.array(inst.routing.sharing_pairs, dtype=int).reshape(-1, 2)
    with np.errstate(divide='ignore'):
        total = np.sum(2.0/np.abs(omega[pairs[:, 0]] - omega[pairs[:, 1]]))
    return float(inst.penalty_K*total)


def make_report(configs:list[TransponderConfig], inst, check, **info) -> SolveReport:
    """
    SolveReport of integer configurations.

    Parameters
    ----------
    configs : list[TransponderConfig]
    inst : ProblemInstance
    check : FeasibilityResult
        feasibility_check of configs on inst
    **info
        remaining SolveReport fields (kkt_residual, rounding_trace, ...)
    """
    k = inst.constants
    m = np.array([cfg.m for cfg in configs], dtype=float)
    b = np.array([cfg.b for cfg in configs], dtype=float)
    r = np.array([cfg.r for cfg in configs], dtype=float)
    c = np.array([cfg.c for cfg in configs], dtype=float)
    terms = power_breakdown(m, b, r, k)
    per_request = sum(terms[key] for key in ELEMENTS)
    try:
        psi = osnr_all(configs, inst)
    except ValueError:
        psi = np.zeros(inst.n)
    return SolveReport(
        configs=list(configs),
        request_ids=tuple(inst.routing.request_ids),
        power_mode=inst.power_mode,
        coupling=str(inst.coupling),
        objective_power_W=float(np.sum(per_request)),
        penalty_value=penalty_value(configs, inst),
        breakdown={key: float(np.sum(terms[key])) for key in ELEMENTS},
        per_request_power=[float(v) for v in per_request],
        osnr=[float(v) for v in psi],
        threshold=[float(v) for v in np.atleast_1d(osnr_threshold(c, r, k))],
        residuals=dict(check.residuals),
        feasible=bool(check.passed),
        **info,
    )
