from .constants import (
    PhysicalConstants,
    CouplingModel,
    load_constants,
    derived_zeta,
    derived_varsigma,
)
from .transponder import (
    TransponderConfig,
    bandwidth,
    power_breakdown,
    transponder_power,
    transponder_power_convex,
    fft_fit_log_error,
    osnr_threshold,
    capacity_values,
    rate_capacity,
)
from .osnr import osnr, osnr_all
