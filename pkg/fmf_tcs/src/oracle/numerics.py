import numpy as np


def sample_points(prog, count:int, rng:np.random.Generator) -> np.ndarray:
    """
    Uniform random points within the bounds of a program, shape (count, n).
    Infinite bounds are replaced by a unit interval next to the finite one.
    """
    lo = np.array(prog.lower, dtype=float)
    hi = np.array(prog.upper, dtype=float)
    lo_inf = ~np.isfinite(lo)
    hi_inf = ~np.isfinite(hi)
    lo[lo_inf] = np.where(hi_inf[lo_inf], -1.0, hi[lo_inf] - 1.0)
    hi[hi_inf] = lo[hi_inf] + 1.0
    return lo + rng.random((count, prog.n))*(hi - lo)


def finite_diff_check(prog, points:int = 100, seed:int = 0, step:float = 1e-6) -> float:
    """
    Largest relative difference between the analytic gradients of the
    objective and every constraint and their central finite differences.

    error = |analytic - central difference| / max(1, |analytic|)

    Parameters
    ----------
    prog : ConvexProgram
    points : int
        random points within the bounds
    seed : int
    step : float
        relative coordinate step

    Returns
    -------
    float
        0.0 for a program without variables
    """
    if prog.n == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    X = sample_points(prog, points, rng)
    error = 0.0
    for x in X:
        h = step*np.maximum(1.0, np.abs(x))
        shifts = np.diag(h)
        plus = x + shifts
        minus = x - shifts

        fd = (prog.objective_batch(plus) - prog.objective_batch(minus))/(2.0*h)
        analytic = np.asarray(prog.objective_gradient(x)).ravel()
        error = max(error, float(np.max(np.abs(analytic - fd)/np.maximum(1.0, np.abs(analytic)))))

        if prog.m:
            fd = (prog.constraint_batch(plus) - prog.constraint_batch(minus))/(2.0*h[:, None])
            analytic = prog.constraint_jacobian(x).T
            error = max(error, float(np.max(np.abs(analytic - fd)/np.maximum(1.0, np.abs(analytic)))))
    return error


def convexity_sample(prog, pairs:int = 10000, seed:int = 0, batch:int = 2000) -> float:
    """
    Largest midpoint convexity violation over random pairs within the bounds,

    f((x + y)/2) - (f(x) + f(y))/2

    taken over the objective (scaled by max(1, mean |f|)) and every constraint.

    Returns
    -------
    float
        0.0 when every function is convex along the sampled chords (or the
        domain is a single point)
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    remaining = pairs
    while remaining > 0:
        size = min(batch, remaining)
        remaining -= size
        X = sample_points(prog, size, rng)
        Y = sample_points(prog, size, rng)
        Z = 0.5*(X + Y)

        fx, fy, fz = prog.objective_batch(X), prog.objective_batch(Y), prog.objective_batch(Z)
        scale = np.maximum(1.0, 0.5*(np.abs(fx) + np.abs(fy)))
        worst = max(worst, float(np.max((fz - 0.5*(fx + fy))/scale)))

        if prog.m:
            gx, gy, gz = prog.constraint_batch(X), prog.constraint_batch(Y), prog.constraint_batch(Z)
            worst = max(worst, float(np.max(gz - 0.5*(gx + gy))))
    return worst
