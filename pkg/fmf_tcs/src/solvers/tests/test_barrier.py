import fmf_tcs.utils.testing_utils as tcs_tests
from fmf_tcs.src.program.program import ConvexProgram
from fmf_tcs.src.solvers import BarrierSolver, SolverOptions
from fmf_tcs.src.solvers.barrier import DENSE_LIMIT
import numpy as np
import pytest


def _cosh_program(n:int) -> ConvexProgram:
    # sum_j e^x_j + e^-x_j, minimum 2n at zero
    prog = ConvexProgram(n, name='cosh')
    for j in range(n):
        prog.add_objective_term({j: 1.0}, 0.0)
        prog.add_objective_term({j: -1.0}, 0.0)
        prog.set_bounds(j, -5.0, 5.0)
    return prog.finalize()


class TestBarrierSolver(tcs_tests.TCSTest):

    def test_unconstrained(self):
        self.prep()
        prog = _cosh_program(2)
        result = BarrierSolver().run(prog, np.array([1.0, -2.0]))

        compare_values = []
        compare_values += [tcs_tests.TestingPair(result.x, np.zeros(2), decimal=5, tag='x')]
        compare_values += [tcs_tests.TestingPair(result.objective, 4.0, decimal=7, tag='objective')]
        self.run_tests(compare_values=compare_values)
        assert result.converged
        assert 'converged' in result.status

    def test_active_constraint(self):
        self.prep()
        # min e^-x  s.t.  x <= ln 2
        prog = ConvexProgram(1, name='toy')
        prog.add_objective_term({0: -1.0}, 0.0)
        prog.add_constraint('cap', 'toy', [({0: 1.0}, 0.0)], affine=({}, np.log(2.0)))
        prog.set_bounds(0, -5.0, 5.0)
        prog.finalize()
        result = BarrierSolver(tolerance=1e-9).run(prog, np.array([0.0]))

        compare_values = []
        compare_values += [tcs_tests.TestingPair(result.x, [np.log(2.0)], decimal=6, tag='x')]
        compare_values += [tcs_tests.TestingPair(result.objective, 0.5, decimal=7, tag='objective')]
        self.run_tests(compare_values=compare_values)
        assert prog.constraints(result.x)[0] < 0.0
        assert result.duality_gap < 3.1e-9
        assert result.kkt_residual < 1e-6

    def test_sparse_path(self):
        prog = _cosh_program(DENSE_LIMIT + 20)
        result = BarrierSolver().run(prog, np.full(prog.n, 0.5))
        assert np.max(np.abs(result.x)) < 1e-4
        assert np.isclose(result.objective, 2.0*prog.n, rtol=1e-8)

    def test_fixed_variables(self):
        prog = _cosh_program(3).fix({1: 0.7})
        result = BarrierSolver().run(prog, np.zeros(3))
        assert result.x[1] == 0.7
        assert abs(result.x[0]) < 1e-4 and abs(result.x[2]) < 1e-4

    def test_stop_callback(self):
        prog = _cosh_program(1)
        result = BarrierSolver().run(prog, np.array([3.0]), stop=lambda x: abs(x[0]) < 1.0)
        assert result.stopped
        assert abs(result.x[0]) < 1.0

    def test_infeasible_start(self):
        prog = ConvexProgram(1, name='toy')
        prog.add_objective_term({0: -1.0}, 0.0)
        prog.add_constraint('cap', 'toy', [({0: 1.0}, 0.0)], affine=({}, 0.0))
        prog.set_bounds(0, -5.0, 5.0)
        prog.finalize()
        with pytest.raises(ValueError):
            BarrierSolver().run(prog, np.array([1.0]))
        with pytest.raises(ValueError):
            BarrierSolver().run(prog, np.array([-6.0]))

    def test_parameters(self):
        with pytest.raises(TypeError):
            BarrierSolver(tolerance='small')
        with pytest.raises(ValueError):
            BarrierSolver(mu=0.5)
        solver = BarrierSolver.from_options(SolverOptions(mu=20.0, max_newton=50), name='tcs')
        assert solver.name == 'tcs'
        assert solver.metadata['mu'] == 20.0
        assert solver.metadata['max_iter'] == 50
