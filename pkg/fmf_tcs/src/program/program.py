import copy
from collections import defaultdict
import numpy as np
import scipy.sparse as sp

class ConvexProgram(object):
    """
    Convex program in log-sum-exp form.

    objective:   f0(x) = const + l.x + sum_k exp(a_k.x + c_k)
    constraints: g_j(x) = log(sum_{t in j} exp(A_t.x + c_t)) - (E_j.x + f_j) <= 0
    bounds:      lower <= x <= upper (variables with lower == upper are fixed)

    Terms are added with coefficient dictionaries {variable index: coefficient}
    and a log-domain constant, then the program is finalized into sparse
    matrices. A finalized program is immutable; bound changes return copies.
    """
    def __init__(self, n_vars:int, names:list[str] = None, name:str = 'tcs'):
        if names is not None and len(names) != n_vars:
            raise ValueError(f"{len(names)} names given for {n_vars} variables")
        self.name = name
        self.n = int(n_vars)
        self.names = list(names) if names is not None else [f'x{j}' for j in range(self.n)]
        self.lower = np.full(self.n, -np.inf)
        self.upper = np.full(self.n, np.inf)
        self.metadata = {}

        self.objective_constant = 0.0
        self.objective_linear = np.zeros(self.n)
        self.constraint_names = []
        self.constraint_families = []

        self._ties = {}
        self._objective_terms = []
        self._constraint_terms = []
        self._constraint_affine = []
        self.locked = False

    # ------------------------------------------------------------------ building
    def _check_unlocked(self):
        if self.locked:
            raise RuntimeError(f"program '{self.name}' is finalized and cannot be modified")

    def _check_index(self, index):
        if not 0 <= index < self.n:
            raise IndexError(f"variable index {index} out of range for {self.n} variables")

    def tie(self, index:int, target:int, offset:float):
        """
        Substitutes x[index] = x[target] + offset in every term added afterwards.
        """
        self._check_unlocked()
        self._check_index(index)
        self._check_index(target)
        if target in self._ties:
            raise ValueError(f"cannot tie to the tied variable {self.names[target]}")
        self._ties[index] = (target, float(offset))

    def _expand(self, coeffs:dict, const:float):
        out = defaultdict(float)
        const = float(const)
        for index, coeff in coeffs.items():
            self._check_index(index)
            if index in self._ties:
                target, offset = self._ties[index]
                out[target] += coeff
                const += coeff*offset
            else:
                out[index] += coeff
        return {index: coeff for index, coeff in out.items() if coeff != 0.0}, const

    def add_objective_term(self, coeffs:dict, log_coeff:float):
        """Adds exp(coeffs.x + log_coeff) to the objective."""
        self._check_unlocked()
        self._objective_terms.append(self._expand(coeffs, log_coeff))

    def add_objective_constant(self, value:float):
        self._check_unlocked()
        self.objective_constant += float(value)

    def add_objective_linear(self, index:int, coeff:float):
        self._check_unlocked()
        coeffs, const = self._expand({index: coeff}, 0.0)
        self.objective_constant += const
        for j, a in coeffs.items():
            self.objective_linear[j] += a

    def add_constraint(self, name:str, family:str, terms:list[tuple[dict, float]], affine:tuple[dict, float] = None):
        """
        Adds log(sum_t exp(coeffs_t.x + const_t)) - (affine_coeffs.x + affine_const) <= 0.
        """
        self._check_unlocked()
        if len(terms) == 0:
            raise ValueError(f"constraint '{name}' needs at least one exponential term")
        if affine is None:
            affine = ({}, 0.0)
        self._constraint_terms.append([self._expand(coeffs, const) for coeffs, const in terms])
        self._constraint_affine.append(self._expand(*affine))
        self.constraint_names.append(name)
        self.constraint_families.append(family)

    def set_bounds(self, index:int, lower:float, upper:float):
        self._check_unlocked()
        self._check_index(index)
        if lower > upper:
            raise ValueError(f"lower bound {lower} above upper bound {upper} for {self.names[index]}")
        self.lower[index] = lower
        self.upper[index] = upper

    def finalize(self) -> 'ConvexProgram':
        """
        Assembles the sparse term matrices and locks the program.
        """
        self._check_unlocked()
        n = self.n

        rows, cols, vals = [], [], []
        for k, (coeffs, _) in enumerate(self._objective_terms):
            for j, a in coeffs.items():
                rows.append(k); cols.append(j); vals.append(a)
        self.A_obj = sp.csr_matrix((vals, (rows, cols)), shape=(len(self._objective_terms), n))
        self.c_obj = np.array([const for _, const in self._objective_terms], dtype=float)

        rows, cols, vals, consts, owner = [], [], [], [], []
        t = 0
        for j, terms in enumerate(self._constraint_terms):
            for coeffs, const in terms:
                for index, a in coeffs.items():
                    rows.append(t); cols.append(index); vals.append(a)
                consts.append(const)
                owner.append(j)
                t += 1
        m = len(self._constraint_terms)
        self.A = sp.csr_matrix((vals, (rows, cols)), shape=(t, n))
        self.c = np.array(consts, dtype=float)
        self.owner = np.array(owner, dtype=int)
        self.starts = np.searchsorted(self.owner, np.arange(m)) if m else np.zeros(0, dtype=int)
        self.S = sp.csr_matrix((np.ones(t), (self.owner, np.arange(t))), shape=(m, t))

        rows, cols, vals = [], [], []
        for j, (coeffs, _) in enumerate(self._constraint_affine):
            for index, a in coeffs.items():
                rows.append(j); cols.append(index); vals.append(a)
        self.E = sp.csr_matrix((vals, (rows, cols)), shape=(m, n))
        self.f = np.array([const for _, const in self._constraint_affine], dtype=float)

        self.locked = True
        return self

    # ------------------------------------------------------------------ structure
    @property
    def m(self) -> int:
        return len(self.constraint_names)

    @property
    def fixed_mask(self) -> np.ndarray:
        return self.upper <= self.lower

    @property
    def free_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.fixed_mask)

    def family_indices(self, family:str) -> np.ndarray:
        return np.array([j for j, fam in enumerate(self.constraint_families) if fam == family], dtype=int)

    def with_bounds(self, lower:np.ndarray, upper:np.ndarray) -> 'ConvexProgram':
        if not self.locked:
            raise RuntimeError('finalize the program before deriving copies')
        new = copy.copy(self)
        new.lower = np.array(lower, dtype=float)
        new.upper = np.array(upper, dtype=float)
        new.metadata = dict(self.metadata)
        return new

    def fix(self, values:dict) -> 'ConvexProgram':
        """Copy of the program with variables {index: value} fixed."""
        lower = self.lower.copy()
        upper = self.upper.copy()
        for index, value in values.items():
            lower[index] = upper[index] = value
        return self.with_bounds(lower, upper)

    def phase1(self) -> 'ConvexProgram':
        """
        Program in (x, s) minimizing s subject to g_j(x) <= s; s is the last variable.
        """
        new = copy.copy(self)
        new.name = f'{self.name}_phase1'
        new.n = self.n + 1
        new.names = self.names + ['s']
        new.A = sp.hstack([self.A, sp.csr_matrix((self.A.shape[0], 1))]).tocsr()
        new.E = sp.hstack([self.E, sp.csr_matrix(np.ones((self.m, 1)))]).tocsr()
        new.A_obj = sp.csr_matrix((0, new.n))
        new.c_obj = np.zeros(0)
        new.objective_constant = 0.0
        new.objective_linear = np.zeros(new.n)
        new.objective_linear[-1] = 1.0
        new.lower = np.append(self.lower, -np.inf)
        new.upper = np.append(self.upper, np.inf)
        new.metadata = {'phase1_of': self.name}
        return new

    # ------------------------------------------------------------------ evaluation
    def _lse_batch(self, X:np.ndarray):
        Z = np.asarray(self.A @ X.T).T + self.c
        zmax = np.maximum.reduceat(Z, self.starts, axis=1)
        ez = np.exp(Z - zmax[:, self.owner])
        s = np.add.reduceat(ez, self.starts, axis=1)
        return zmax + np.log(s), ez/s[:, self.owner]

    def constraint_batch(self, X:np.ndarray) -> np.ndarray:
        """Constraint values at every row of X, shape (points, m)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.m == 0:
            return np.zeros((X.shape[0], 0))
        lse, _ = self._lse_batch(X)
        return lse - (np.asarray(self.E @ X.T).T + self.f)

    def constraints(self, x:np.ndarray) -> np.ndarray:
        return self.constraint_batch(x)[0]

    def constraint_state(self, x:np.ndarray):
        """
        Returns
        -------
        g : np.ndarray
            constraint values
        w : np.ndarray
            softmax weight of every exponential term within its constraint
        U : sp.csr_matrix
            gradients of the log-sum-exp parts, one row per constraint
        G : sp.csr_matrix
            constraint gradients U - E
        """
        x = np.asarray(x, dtype=float)
        if self.m == 0:
            empty = sp.csr_matrix((0, self.n))
            return np.zeros(0), np.zeros(0), empty, empty
        lse, w = self._lse_batch(x[None, :])
        g = lse[0] - (self.E @ x + self.f)
        U = (self.S @ sp.diags(w[0]) @ self.A).tocsr()
        return g, w[0], U, (U - self.E).tocsr()

    def constraint_jacobian(self, x:np.ndarray) -> np.ndarray:
        return self.constraint_state(x)[3].toarray()

    def objective_batch(self, X:np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        value = self.objective_constant + X @ self.objective_linear
        if self.A_obj.shape[0]:
            value = value + np.exp(np.asarray(self.A_obj @ X.T).T + self.c_obj).sum(axis=1)
        return value

    def objective(self, x:np.ndarray) -> float:
        return float(self.objective_batch(x)[0])

    def objective_gradient(self, x:np.ndarray) -> np.ndarray:
        e = np.exp(self.A_obj @ x + self.c_obj)
        return self.A_obj.T @ e + self.objective_linear

    def objective_hessian(self, x:np.ndarray) -> np.ndarray:
        if self.A_obj.shape[0] == 0:
            return np.zeros((self.n, self.n))
        e = np.exp(self.A_obj @ x + self.c_obj)
        return (self.A_obj.T @ sp.diags(e) @ self.A_obj).toarray()

    def in_bounds(self, x:np.ndarray, strict:bool = False) -> bool:
        free = ~self.fixed_mask
        if strict:
            return bool(np.all(x[free] > self.lower[free]) and np.all(x[free] < self.upper[free]))
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def violations(self, x:np.ndarray, threshold:float = 0.0) -> list[tuple[str, float]]:
        """
        Constraints with g > threshold, most violated first.
        """
        g = self.constraints(x)
        order = np.argsort(-g, kind='stable')
        return [(self.constraint_names[j], float(g[j])) for j in order if g[j] > threshold]
