from dataclasses import dataclass, asdict
import numpy as np

from fmf_tcs.src.phy.constants import PhysicalConstants, CouplingModel
from fmf_tcs.utils.typing import ArrayLike

@dataclass(frozen=True)
class TransponderConfig:
    """
    Configuration of one transmit/receive transponder pair.

    Attributes
    ----------
    c : float
        modulation level [bits/symbol]
    b : int
        log2 of the subcarrier count
    r : float
        coding rate in (0, 1]
    p : float
        total transmit optical power [W]
    m : int
        active mode count
    omega : float
        carrier frequency [Hz]
    """
    c: float
    b: int
    r: float
    p: float
    m: int
    omega: float

    def bandwidth(self, k:PhysicalConstants) -> float:
        """Occupied bandwidth Delta = 2^b F [Hz]."""
        return bandwidth(self.b, k)

    def to_dict(self) -> dict:
        return {key: (int(v) if key in ('b', 'm') else float(v)) for key, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, d:dict) -> 'TransponderConfig':
        return cls(
            c=float(d['c']), b=int(d['b']), r=float(d['r']),
            p=float(d['p']), m=int(d['m']), omega=float(d['omega']))


def bandwidth(b:ArrayLike, k:PhysicalConstants):
    return np.exp2(b)*k.F


def power_breakdown(m:ArrayLike, b:ArrayLike, r:ArrayLike, k:PhysicalConstants) -> dict:
    """
    Terms of the transponder power consumption (vectorized).

    Returns
    -------
    dict
        'bias', 'codec', 'fft' and 'dsp' terms [W]; they sum to the total power.
    """
    m = np.asarray(m, dtype=float)
    b = np.asarray(b, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError(f"Coding rate must be strictly positive. {r} given")
    n_sub = np.exp2(b)
    return {
        'bias': k.P_trb*np.ones(np.broadcast(m, b, r).shape),
        'codec': 2.0*k.P_edc*m/r,
        'fft': 2.0*m*n_sub*b*k.P_fft,
        'dsp': 2.0*m**2*n_sub*k.P_dsp,
    }


def transponder_power(cfg:TransponderConfig, k:PhysicalConstants) -> float:
    """
    Power consumption of a transmit/receive transponder pair [W].

    P = P_trb + 2 P_edc m/r + 2 m 2^b b P_fft + 2 m^2 2^b P_dsp

    Parameters
    ----------
    cfg : TransponderConfig
    k : PhysicalConstants

    Returns
    -------
    float
    """
    if cfg.r <= 0.0:
        raise ValueError(f"Coding rate must be strictly positive. {cfg.r} given")
    terms = power_breakdown(cfg.m, cfg.b, cfg.r, k)
    return float(sum(terms.values()))


def transponder_power_convex(M:ArrayLike, R:ArrayLike, b:ArrayLike, k:PhysicalConstants):
    """
    Log-domain transponder power with the FFT term replaced by its exponential fit.

    P~ = P_trb + 2 P_edc e^(M-R) + fft_scale P_fft e^(fft_exp b + M) + 2 P_dsp e^(2M + b ln2)
    """
    M = np.asarray(M, dtype=float)
    R = np.asarray(R, dtype=float)
    b = np.asarray(b, dtype=float)
    return (k.P_trb
            + 2.0*k.P_edc*np.exp(M - R)
            + k.fft_scale*k.P_fft*np.exp(k.fft_exp*b + M)
            + 2.0*k.P_dsp*np.exp(2.0*M + b*np.log(2.0)))


def fft_factor_exact(m:ArrayLike, b:ArrayLike):
    return 2.0*np.asarray(m, dtype=float)*np.asarray(b, dtype=float)*np.exp2(b)


def fft_factor_fit(m:ArrayLike, b:ArrayLike, k:PhysicalConstants):
    return k.fft_scale*np.asarray(m, dtype=float)*np.exp(k.fft_exp*np.asarray(b, dtype=float))


def fft_fit_log_error(m:ArrayLike, b:ArrayLike, k:PhysicalConstants):
    """
    Relative error of the FFT fit measured in the log domain, |ln fit - ln exact| / ln exact.
    """
    exact = np.log(fft_factor_exact(m, b))
    return np.abs(np.log(fft_factor_fit(m, b, k)) - exact)/exact


def osnr_threshold(c:ArrayLike, r:ArrayLike, k:PhysicalConstants):
    """
    Minimum linear OSNR required by modulation level c and coding rate r.

    Theta = r^kappa2 (1 + kappa3 c)^kappa4
    """
    c = np.asarray(c, dtype=float)
    r = np.asarray(r, dtype=float)
    value = r**k.kappa2*(1.0 + k.kappa3*c)**k.kappa4
    return float(value) if value.ndim == 0 else value


def capacity_values(c, b, r, m, span_N, coupling:CouplingModel, k:PhysicalConstants):
    """
    Vectorized information rate [bit/s] carried by a configuration.

    2 m r c 2^b / (1/F + sigma N 2^b + rho m^-mode_exp g(N))
    """
    c = np.asarray(c, dtype=float)
    b = np.asarray(b, dtype=float)
    r = np.asarray(r, dtype=float)
    m = np.asarray(m, dtype=float)
    n_sub = np.exp2(b)
    g = CouplingModel.from_value(coupling).broadening(span_N)
    overhead = 1.0/k.F + k.sigma_cd*np.asarray(span_N, dtype=float)*n_sub + k.rho_mc*m**(-k.mode_exp)*g
    return 2.0*m*r*c*n_sub/overhead


def rate_capacity(cfg:TransponderConfig, span_N:int, coupling, k:PhysicalConstants) -> float:
    """
    Information rate [bit/s] a configuration can convey over span_N spans
    once the cyclic prefix overhead is taken out. A request is served iff its
    demanded rate is at most this capacity.
    """
    if span_N < 1:
        raise ValueError(f"span_N must be at least 1. {span_N} given")
    return float(capacity_values(cfg.c, cfg.b, cfg.r, cfg.m, span_N, coupling, k))
