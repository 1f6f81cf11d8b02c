from dataclasses import dataclass
import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg

from fmf_tcs.src.program.program import ConvexProgram
from fmf_tcs.utils.parameters import check_parameter

# dense Cholesky up to this many free variables, sparse LU above
DENSE_LIMIT = 300

@dataclass
class BarrierResult:
    """
    Attributes
    ----------
    x : np.ndarray
        last (strictly feasible) iterate
    objective : float
    t : float
        final barrier parameter
    newton_iterations : int
    outer_iterations : int
    kkt_residual : float
        Newton decrement of the last centering divided by t
    duality_gap : float
        barrier count divided by t
    converged : bool
    stopped : bool
        True if the stop callback ended the run
    status : str
    """
    x: np.ndarray
    objective: float
    t: float
    newton_iterations: int
    outer_iterations: int
    kkt_residual: float
    duality_gap: float
    converged: bool
    stopped: bool
    status: str


class BarrierSolver(object):
    def __init__(
            self,
            name:str = 'barrier',
            print_status:bool = False,
            tolerance:float = 1e-8,
            max_iter:int = 200,
            mu:float = 10.0,
            t0:float = 1.0,
            newton_tol:float = 1e-10,
            alpha:float = 0.01,
            beta:float = 0.5,
        ):
        """
        Primal log-barrier interior point method with damped Newton centering.

        Minimizes t f0(x) - sum ln(-g_j(x)) - sum ln(bound slacks) over the free
        variables for t = t0, mu t0, ... until 1/t <= tolerance.

        Parameters
        ----------
        name : str
        print_status : bool
        tolerance : float
            terminal value of 1/t
        max_iter : int
            Newton steps per centering
        mu : float
            growth of t per centering
        t0 : float
        newton_tol : float
            centering stops once half the squared Newton decrement is below it
        alpha, beta : float
            backtracking line search parameters
        """
        check_parameter(name, 'name', types=str)
        check_parameter(print_status, 'print_status', types=bool)
        check_parameter(tolerance, 'tolerance', types=(int, float), lower=1e-16)
        check_parameter(max_iter, 'max_iter', types=int, lower=1)
        check_parameter(mu, 'mu', types=(int, float), lower=1.0)
        check_parameter(t0, 't0', types=(int, float), lower=1e-12)
        check_parameter(alpha, 'alpha', types=(int, float), lower=0.0, upper=0.5)
        check_parameter(beta, 'beta', types=(int, float), lower=0.0, upper=1.0)
        self.name = name
        self.print_status = print_status

        self.metadata = {}
        self.add_metadata('tolerance', float(tolerance))
        self.add_metadata('max_iter', max_iter)
        self.add_metadata('mu', float(mu))
        self.add_metadata('t0', float(t0))
        self.add_metadata('newton_tol', float(newton_tol))
        self.add_metadata('alpha', float(alpha))
        self.add_metadata('beta', float(beta))

    def add_metadata(self, key, datum):
        self.metadata[key] = datum

    @classmethod
    def from_options(cls, opts, name:str = 'barrier') -> 'BarrierSolver':
        return cls(
            name=name,
            print_status=opts['print_status'],
            tolerance=opts['tolerance'],
            max_iter=opts['max_newton'],
            mu=opts['mu'],
            t0=opts['t0'],
            newton_tol=opts['newton_tol'],
        )

    # ------------------------------------------------------------------ barrier pieces
    def _prepare(self, prog:ConvexProgram):
        self.prog = prog
        self.free = prog.free_indices
        self.lo = prog.lower[self.free]
        self.hi = prog.upper[self.free]
        self.has_lo = np.isfinite(self.lo)
        self.has_hi = np.isfinite(self.hi)
        self.barrier_count = prog.m + int(np.sum(self.has_lo)) + int(np.sum(self.has_hi))

    def _phi(self, x:np.ndarray, t:float) -> float:
        """Barrier function, inf outside the strict interior."""
        z = x[self.free]
        slack_lo = z[self.has_lo] - self.lo[self.has_lo]
        slack_hi = self.hi[self.has_hi] - z[self.has_hi]
        if np.any(slack_lo <= 0.0) or np.any(slack_hi <= 0.0):
            return np.inf
        g = self.prog.constraints(x)
        if np.any(g >= 0.0):
            return np.inf
        return float(t*self.prog.objective(x) - np.sum(np.log(-g)) - np.sum(np.log(slack_lo)) - np.sum(np.log(slack_hi)))

    def _derivatives(self, x:np.ndarray, t:float):
        prog = self.prog
        free = self.free
        g, w, U, G = prog.constraint_state(x)
        inv = 1.0/(-g)

        grad = t*prog.objective_gradient(x)
        if prog.A_obj.shape[0]:
            e = np.exp(prog.A_obj @ x + prog.c_obj)
            hess = t*(prog.A_obj.T @ sp.diags(e) @ prog.A_obj)
        else:
            hess = sp.csc_matrix((prog.n, prog.n))
        if prog.m:
            grad = grad + G.T @ inv
            hess = hess + G.T @ sp.diags(inv**2) @ G
            hess = hess + prog.A.T @ sp.diags(w*inv[prog.owner]) @ prog.A
            hess = hess - U.T @ sp.diags(inv) @ U
        grad = np.asarray(grad)[free]
        hess = sp.csc_matrix(hess)[free][:, free]

        z = x[free]
        diag = np.zeros(free.size)
        d_lo = z[self.has_lo] - self.lo[self.has_lo]
        d_hi = self.hi[self.has_hi] - z[self.has_hi]
        grad[self.has_lo] -= 1.0/d_lo
        grad[self.has_hi] += 1.0/d_hi
        diag[self.has_lo] += 1.0/d_lo**2
        diag[self.has_hi] += 1.0/d_hi**2
        return grad, (hess + sp.diags(diag)).tocsc()

    def _newton_direction(self, grad:np.ndarray, hess:sp.csc_matrix) -> np.ndarray:
        scale = max(1.0, float(np.max(np.abs(hess.diagonal()))))
        shift = 0.0
        for _ in range(12):
            try:
                if grad.size <= DENSE_LIMIT:
                    H = hess.toarray()
                    if shift:
                        H[np.diag_indices_from(H)] += shift
                    step = scipy.linalg.cho_solve(scipy.linalg.cho_factor(H), -grad)
                else:
                    H = hess if not shift else (hess + shift*sp.identity(grad.size, format='csc'))
                    step = scipy.sparse.linalg.splu(H.tocsc()).solve(-grad)
                if np.all(np.isfinite(step)) and -grad @ step >= 0.0:
                    return step
            except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, RuntimeError):
                pass
            shift = 1e-12*scale if shift == 0.0 else 10.0*shift
        raise np.linalg.LinAlgError(f"{self.name}: barrier Hessian could not be factorized")

    def _max_step(self, z:np.ndarray, dz:np.ndarray) -> float:
        step = 1.0
        down = self.has_lo & (dz < 0.0)
        if np.any(down):
            step = min(step, 0.99*float(np.min((z[down] - self.lo[down])/(-dz[down]))))
        up = self.has_hi & (dz > 0.0)
        if np.any(up):
            step = min(step, 0.99*float(np.min((self.hi[up] - z[up])/dz[up])))
        return step

    def _center(self, x:np.ndarray, t:float, stop):
        """
        Newton iterations on the barrier at t. Returns (x, iterations, decrement^2, stopped).
        """
        alpha = self.metadata['alpha']
        beta = self.metadata['beta']
        lam2 = np.inf
        iterations = 0
        for _ in range(self.metadata['max_iter']):
            grad, hess = self._derivatives(x, t)
            dz = self._newton_direction(grad, hess)
            lam2 = float(-grad @ dz)
            if lam2/2.0 <= self.metadata['newton_tol']:
                break

            z = x[self.free]
            phi0 = self._phi(x, t)
            s_max = self._max_step(z, dz)
            s = s_max
            accepted = None
            while s >= 1e-12:
                trial = x.copy()
                trial[self.free] = z + s*dz
                value = self._phi(trial, t)
                if value <= phi0 - alpha*s*lam2:
                    accepted = trial
                    break
                s *= beta
            if accepted is None:
                # inside the quadratic convergence region rounding hides the decrease
                trial = x.copy()
                trial[self.free] = z + s_max*dz
                if lam2 < 0.0625 and np.isfinite(self._phi(trial, t)):
                    accepted = trial
                else:
                    break
            x = accepted
            iterations += 1
            if stop is not None and stop(x):
                return x, iterations, lam2, True
        return x, iterations, lam2, False

    # ------------------------------------------------------------------ driver
    def run(self, prog:ConvexProgram, x0:np.ndarray, stop = None) -> BarrierResult:
        """
        Runs the barrier method from a strictly feasible x0.

        Parameters
        ----------
        prog : ConvexProgram
        x0 : np.ndarray
            strictly feasible point (fixed variables at their value)
        stop : callable, optional
            stop(x) -> bool, checked after every Newton step

        Raises
        ------
        ValueError
            if x0 is not strictly feasible
        """
        self._prepare(prog)
        x = np.array(x0, dtype=float)
        x[prog.fixed_mask] = prog.lower[prog.fixed_mask]
        if not np.isfinite(self._phi(x, self.metadata['t0'])):
            raise ValueError(f"{self.name}: the starting point is not strictly feasible")
        if stop is not None and stop(x):
            return self._result(x, self.metadata['t0'], 0, 0, 0.0, True, True)

        t = self.metadata['t0']
        newton = 0
        outer = 0
        lam2 = np.inf
        stopped = False
        if self.free.size == 0:
            return self._result(x, t, 0, 0, 0.0, True, False)
        while True:
            x, iterations, lam2, stopped = self._center(x, t, stop)
            newton += iterations
            outer += 1
            if stopped or 1.0/t <= self.metadata['tolerance']:
                break
            t *= self.metadata['mu']

        converged = stopped or lam2/2.0 <= max(self.metadata['newton_tol'], 1e-6)
        return self._result(x, t, newton, outer, lam2, converged, stopped)

    def _result(self, x, t, newton, outer, lam2, converged, stopped) -> BarrierResult:
        kkt = float(np.sqrt(max(lam2, 0.0))/t)
        gap = self.barrier_count/t
        if converged:
            status = f'barrier solver: {self.name} converged in {newton} Newton iterations ({outer} centering steps).'
        else:
            status = f'\nbarrier solver: {self.name} did not converge in {newton} Newton iterations ({outer} centering steps).\n'
            status += f'    final t:          {t:.3e}\n'
            status += f'    Newton decrement: {np.sqrt(max(lam2, 0.0)):.3e}\n'
            largest = self.prog.violations(x, threshold=-np.inf)[:5]
            for name, value in largest:
                status += f'    {name:<30} {value: .3e}\n'
        if self.print_status:
            print(status)
        return BarrierResult(
            x=x,
            objective=self.prog.objective(x),
            t=float(t),
            newton_iterations=newton,
            outer_iterations=outer,
            kkt_residual=kkt,
            duality_gap=float(gap),
            converged=bool(converged),
            stopped=bool(stopped),
            status=status,
        )
