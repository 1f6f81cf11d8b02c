import numpy as np

from fmf_tcs.src.phy.constants import PhysicalConstants, derived_zeta, derived_varsigma
from fmf_tcs.src.phy.transponder import TransponderConfig, bandwidth

def _routing_of(inst):
    return getattr(inst, 'routing', inst)

def _constants_of(inst, k):
    if k is not None:
        return k
    k = getattr(inst, 'constants', None)
    if k is None:
        raise ValueError('physical constants must be given when the instance does not carry them')
    return k

def osnr_all(cfgs:list[TransponderConfig], inst, k:PhysicalConstants = None) -> np.ndarray:
    """
    Linear OSNR of every request.

    Psi_q = (p_q/m_q) / [zeta N_q Delta_q + kappa1 varsigma (p_q/m_q) sum_i (p_i^2/m_i) N_qi / (Delta_i d_qi)]

    Parameters
    ----------
    cfgs : list[TransponderConfig]
        one configuration per request, in the order of the routing solution
    inst : ProblemInstance or RoutingSolution
        provides span_N and shared_spans
    k : PhysicalConstants, optional
        defaults to inst.constants

    Returns
    -------
    np.ndarray
    """
    routing = _routing_of(inst)
    k = _constants_of(inst, k)
    n = len(cfgs)
    span_N = np.asarray(routing.span_N, dtype=float)
    shared = np.asarray(routing.shared_spans, dtype=float)
    if span_N.shape != (n,):
        raise ValueError(f"{n} configurations given for {span_N.size} routed requests")

    p = np.array([cfg.p for cfg in cfgs], dtype=float)
    m = np.array([cfg.m for cfg in cfgs], dtype=float)
    omega = np.array([cfg.omega for cfg in cfgs], dtype=float)
    delta = bandwidth(np.array([cfg.b for cfg in cfgs], dtype=float), k)

    d = np.abs(omega[:, None] - omega[None, :])
    coincident = (shared > 0) & (d == 0.0)
    if np.any(coincident):
        q, i = np.argwhere(coincident)[0]
        raise ValueError(f"requests {q} and {i} share spans but their carriers coincide")

    with np.errstate(divide='ignore', invalid='ignore'):
        pair = np.where(shared > 0, shared/(delta[None, :]*d), 0.0)
    nli = pair @ (p**2/m)

    zeta = derived_zeta(k)
    varsigma = derived_varsigma(k)
    per_mode = p/m
    return per_mode/(zeta*span_N*delta + k.kappa1*varsigma*per_mode*nli)


def osnr(q:int, cfgs:list[TransponderConfig], inst, k:PhysicalConstants = None) -> float:
    """
    Linear OSNR of request q (index into cfgs). See osnr_all.
    """
    return float(osnr_all(cfgs, inst, k)[q])
