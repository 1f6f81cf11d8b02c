from fmf_tcs.utils.parameters import Options

class SolverOptions(Options):
    """
    Options of the barrier solver and of the rounding loop.

    Any declared option can be given as a keyword argument.
    """
    def __init__(self, **kwargs):
        super().__init__('SolverOptions')
        self.declare('tolerance', 1e-8, types=(int, float), lower=1e-16, upper=1.0,
                     desc='barrier stops once 1/t is below this value')
        self.declare('mu', 10.0, types=(int, float), lower=1.0 + 1e-9,
                     desc='barrier parameter growth per outer iteration')
        self.declare('t0', 1.0, types=(int, float), lower=1e-12,
                     desc='initial barrier parameter')
        self.declare('max_newton', 200, types=int, lower=1,
                     desc='Newton steps per centering')
        self.declare('newton_tol', 1e-10, types=(int, float), lower=0.0,
                     desc='centering stops once half the squared Newton decrement is below this value')
        self.declare('phase1_margin', 1e-4, types=(int, float), lower=0.0,
                     desc='phase-1 stops once every constraint is below minus this margin')
        self.declare('int_precision', 0.1, types=(int, float), lower=0.0, upper=0.5,
                     desc='accepted distance of relaxed b and m from an integer')
        self.declare('grid_precision', 0.05, types=(int, float), lower=0.0, upper=1.0,
                     desc='accepted relative distance of relaxed c and r from a grid value')
        self.declare('max_epochs', None, types=int, lower=1,
                     desc='rounding epochs, defaults to the number of integer variables')
        self.declare('max_fallback_steps', 3, types=int, lower=0,
                     desc='conservative grid steps tried when a rounded value is infeasible')
        self.declare('polish', True, types=bool,
                     desc='try to lower b and m of every request after rounding')
        self.declare('print_status', False, types=bool)
        self.update(kwargs)

    @classmethod
    def from_document(cls, document:dict) -> 'SolverOptions':
        """Options from a scenario 'solver' mapping; unknown keys raise KeyError."""
        return cls(**dict(document or {}))
