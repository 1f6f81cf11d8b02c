from dataclasses import dataclass, fields, replace, asdict
from typing import Optional
import numpy as np

from fmf_tcs.utils.inputs import load_document, db_per_km_to_per_m, LOG10_E
from fmf_tcs.utils.parameters import check_parameter

# constants that may be switched off for ablation runs
ZERO_ALLOWED = ('P_trb', 'P_edc', 'P_fft', 'P_dsp', 'sigma_cd', 'rho_mc')

@dataclass(frozen=True)
class PhysicalConstants:
    """
    Fiber, amplifier and transponder constants, all in SI units.

    Attributes
    ----------
    alpha : float
        fiber power attenuation [1/m]
    beta2_abs : float
        magnitude of the group velocity dispersion [s^2/m]
    gamma_nl : float
        fiber nonlinearity coefficient [1/(W m)]
    nu : float
        optical carrier frequency [Hz]
    n_sp : float
        amplifier spontaneous emission factor
    L_spn : float
        span length [m]
    F : float
        OFDM subcarrier spacing [Hz]
    sigma_cd : float
        chromatic dispersion broadening coefficient [s]
    rho_mc : float
        mode coupling broadening coefficient [s]
    mode_exp : float
        exponent of the mode count in the mode coupling broadening
    G : float
        guard band between neighbouring requests [Hz]
    kappa1, kappa2, kappa3, kappa4 : float
        fit constants of the OSNR model and of the OSNR threshold
    P_trb, P_edc : float
        transceiver bias and electronic dispersion compensation power [W]
    P_fft, P_dsp : float
        per-operation FFT and DSP power [W]
    planck_h : float
        Planck constant [J s]
    fft_scale, fft_exp : float
        fit of the FFT term, 2 b 2^b ~ fft_scale exp(fft_exp b)
    max_bit_rate_C : float or None
        optional transponder maximum information bit rate [bit/s]
    """
    alpha: float = db_per_km_to_per_m(0.22)
    beta2_abs: float = 20393e-30
    gamma_nl: float = 1.3e-3
    nu: float = 193.55e12
    n_sp: float = 1.58
    L_spn: float = 80e3
    F: float = 80e6
    sigma_cd: float = 14e-15
    rho_mc: float = 113e-12
    mode_exp: float = 0.78
    G: float = 20e9
    kappa1: float = 0.4343
    kappa2: float = 3.37
    kappa3: float = 0.21
    kappa4: float = 5.73
    P_trb: float = 36.0
    P_edc: float = 3.2
    P_fft: float = 4e-3
    P_dsp: float = 3e-3
    planck_h: float = 6.62607015e-34
    fft_scale: float = 5.36
    fft_exp: float = 0.82
    max_bit_rate_C: Optional[float] = None

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == 'max_bit_rate_C':
                check_parameter(value, f.name, types=(int, float), lower=0.0, allow_none=True)
                if value is not None and value <= 0.0:
                    raise ValueError(f"Value ({value}) of parameter '{f.name}' must be strictly positive.")
                continue
            check_parameter(value, f.name, types=(int, float, np.floating))
            if not np.isfinite(value):
                raise ValueError(f"Value ({value}) of parameter '{f.name}' must be finite.")
            if f.name in ZERO_ALLOWED:
                if value < 0.0:
                    raise ValueError(f"Value ({value}) of parameter '{f.name}' must be non-negative.")
            elif value <= 0.0:
                raise ValueError(f"Value ({value}) of parameter '{f.name}' must be strictly positive.")

    def replace(self, **changes) -> 'PhysicalConstants':
        return replace(self, **changes)

    def to_document(self) -> dict:
        """
        Returns the constants in file units (inverse of load_constants).
        """
        out = {}
        for key, value in asdict(self).items():
            if value is None:
                continue
            out[key] = float(value/FILE_UNITS[key]) if key != 'alpha' else float(value*10.0*LOG10_E*1000.0)
        return out


# SI value = file value * factor ('alpha' is converted from dB/km separately)
FILE_UNITS = {
    'alpha': None,
    'beta2_abs': 1e-30,     # fs^2/m
    'gamma_nl': 1e-3,       # 1/(W km)
    'nu': 1e12,             # THz
    'n_sp': 1.0,
    'L_spn': 1e3,           # km
    'F': 1e6,               # MHz
    'sigma_cd': 1e-15,      # fs
    'rho_mc': 1e-12,        # ps
    'mode_exp': 1.0,
    'G': 1e9,               # GHz
    'kappa1': 1.0,
    'kappa2': 1.0,
    'kappa3': 1.0,
    'kappa4': 1.0,
    'P_trb': 1.0,           # W
    'P_edc': 1.0,           # W
    'P_fft': 1e-3,          # mW
    'P_dsp': 1e-3,          # mW
    'planck_h': 1.0,
    'fft_scale': 1.0,
    'fft_exp': 1.0,
    'max_bit_rate_C': 1e9,  # Gb/s
}


def load_constants(source=None) -> PhysicalConstants:
    """
    Builds PhysicalConstants from an override document in file units.

    Parameters
    ----------
    source : dict, path, YAML text or None
        Keys are the attribute names of PhysicalConstants. Missing keys keep
        their defaults. None returns the defaults.

    Returns
    -------
    PhysicalConstants
    """
    if source is None:
        return PhysicalConstants()
    document = load_document(source, 'constants')
    if 'constants' in document and isinstance(document['constants'], dict):
        document = document['constants']

    unknown = [key for key in document if key not in FILE_UNITS]
    if unknown:
        raise ValueError(f"Unknown physical constant(s): {', '.join(sorted(map(str, unknown)))}")

    overrides = {}
    for key, value in document.items():
        if key == 'max_bit_rate_C' and value is None:
            overrides[key] = None
            continue
        check_parameter(value, key, types=(int, float))
        if key == 'alpha':
            overrides[key] = db_per_km_to_per_m(float(value))
        else:
            overrides[key] = float(value)*FILE_UNITS[key]
    return PhysicalConstants(**overrides)


def derived_zeta(k:PhysicalConstants) -> float:
    """
    ASE noise power spectral density added per span [W/Hz].

    zeta = (exp(alpha L_spn) - 1) h nu n_sp
    """
    return float(np.expm1(k.alpha*k.L_spn)*k.planck_h*k.nu*k.n_sp)


def derived_varsigma(k:PhysicalConstants) -> float:
    """
    Nonlinear interference coefficient [Hz^2/W^2].

    varsigma = 3 gamma^2 / (2 alpha pi |beta2|)
    """
    return float(3.0*k.gamma_nl**2/(2.0*k.alpha*np.pi*k.beta2_abs))


@dataclass(frozen=True)
class CouplingModel:
    """
    Group delay spread scaling of the fiber: sqrt(N) for strongly coupled
    fibers, N for weakly coupled ones.
    """
    kind: str = 'strong'

    def __post_init__(self):
        check_parameter(self.kind, 'coupling', values=('strong', 'weak'))

    def broadening(self, span_N):
        span_N = np.asarray(span_N, dtype=float)
        if self.kind == 'strong':
            return np.sqrt(span_N)
        return span_N

    @classmethod
    def from_value(cls, value) -> 'CouplingModel':
        if isinstance(value, CouplingModel):
            return value
        return cls(value)

    def __str__(self):
        return self.kind
