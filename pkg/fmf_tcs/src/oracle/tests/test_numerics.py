import fmf_tcs.utils.testing_utils as tcs_tests
from fmf_tcs.src.oracle import finite_diff_check, convexity_sample, sample_points
import numpy as np


FIVE_REQUESTS = ((1, 3, 100.0), (1, 2, 50.0), (2, 4, 80.0), (3, 4, 40.0), (1, 4, 60.0))


class _Raw(object):
    # natural-unit codec and DSP power terms, m/r + m^2 2^b over (m, r, b)
    n = 3
    m = 0
    lower = np.array([1.0, 0.6, 4.0])
    upper = np.array([3.0, 0.9, 11.0])

    def objective_batch(self, X):
        return X[:, 0]/X[:, 1] + X[:, 0]**2*np.exp2(X[:, 2])


class TestNumerics(tcs_tests.TCSTest):

    def test_gradients(self):
        inst, prog = tcs_tests.make_program(requests=FIVE_REQUESTS, n_nodes=4)
        assert finite_diff_check(prog, points=100, seed=0) < 1e-5

    def test_corrupted_gradient(self, monkeypatch):
        inst, prog = tcs_tests.make_program(requests=((1, 3, 100.0), (1, 2, 50.0)), n_nodes=3)
        gradient = prog.objective_gradient
        monkeypatch.setattr(prog, 'objective_gradient', lambda x: np.asarray(gradient(x)) + 1.0)
        assert finite_diff_check(prog, points=5, seed=0) > 1e-2

    def test_convexity(self):
        inst, prog = tcs_tests.make_program(requests=FIVE_REQUESTS, n_nodes=4)
        assert convexity_sample(prog, pairs=10000, seed=0) <= 1e-9

    def test_natural_units_are_not_convex(self):
        assert convexity_sample(_Raw(), pairs=2000, seed=0) > 1e-6

    def test_single_point_domain(self):
        raw = _Raw()
        raw.upper = raw.lower.copy()
        assert convexity_sample(raw, pairs=100, seed=0) == 0.0

    def test_sample_points(self):
        self.prep(seed=3)
        inst, prog = tcs_tests.make_program(requests=((1, 2, 50.0),), n_nodes=2)
        X = sample_points(prog, 50, self.rng)
        assert X.shape == (50, prog.n)
        assert np.all(X >= prog.lower) and np.all(X <= prog.upper)
