from dataclasses import dataclass
import numpy as np

from fmf_tcs.utils.parameters import check_parameter

@dataclass(frozen=True)
class GridSpec:
    """
    Finite grids of the brute-force oracle.

    Attributes
    ----------
    b_values, m_values, c_values, r_values : tuple
        integer decisions, normally the discrete sets of the instance
    p_values : np.ndarray
        total transmit power grid [W], ascending
    omega_step : float
        carrier frequency grid spacing [Hz]; carriers sit on multiples of it
    cap : float
        largest enumeration size the oracle accepts
    """
    b_values: tuple
    m_values: tuple
    c_values: tuple
    r_values: tuple
    p_values: np.ndarray
    omega_step: float
    cap: float = 1e8

    def __post_init__(self):
        for name in ('b_values', 'm_values', 'c_values', 'r_values', 'p_values'):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"grid {name} must not be empty")
        check_parameter(self.omega_step, 'omega_step', types=(int, float), lower=1e-300)
        check_parameter(self.cap, 'cap', types=(int, float), lower=1.0)
        object.__setattr__(self, 'p_values', np.sort(np.asarray(self.p_values, dtype=float)))

    @classmethod
    def for_instance(
            cls,
            inst,
            points_per_decade:int = 20,
            decades:int = 3,
            omega_step:float = None,
            cap:float = 1e8,
        ) -> 'GridSpec':
        """
        Grids of an instance: its discrete sets, powers log-spaced over
        ``decades`` decades below the upper power bound, and carriers every
        G/4 unless omega_step is given.
        """
        check_parameter(points_per_decade, 'points_per_decade', types=int, lower=1)
        check_parameter(decades, 'decades', types=int, lower=1)
        ds = inst.discrete
        p_lo, p_hi = inst.power_bounds
        top = np.log10(p_hi)
        p_values = 10.0**np.linspace(top - decades, top, decades*points_per_decade + 1)
        p_values = p_values[p_values >= p_lo*(1.0 - 1e-12)]
        if omega_step is None:
            omega_step = 0.25*inst.constants.G
        return cls(
            b_values=tuple(ds.b_values),
            m_values=tuple(ds.m_values),
            c_values=tuple(ds.c_values),
            r_values=tuple(ds.r_values),
            p_values=p_values,
            omega_step=float(omega_step),
            cap=float(cap),
        )

    def omega_values(self, bandwidth_B:float) -> np.ndarray:
        """Grid carriers strictly inside (0, B)."""
        count = int(np.floor(bandwidth_B/self.omega_step + 1e-9))
        values = self.omega_step*np.arange(1, count + 1)
        return values[values < bandwidth_B]
