import fmf_tcs.utils.testing_utils as tcs_tests
from fmf_tcs.src.program.builder import build_program, encode_configs
from fmf_tcs.src.solvers import (
    SolverOptions, ContinuousSolution, round_and_fix, adopt_incumbent, feasibility_check, solve,
)
from dataclasses import replace
import numpy as np
import pytest


def _relaxed(prog, x) -> ContinuousSolution:
    return ContinuousSolution(
        x=x, x_interior=x, objective=prog.objective(x), kkt_residual=0.0, duality_gap=0.0,
        newton_iterations=0, converged=True, status='given', wall_time=0.0)


class TestRoundAndFix(tcs_tests.TCSTest):

    @pytest.mark.slow
    def test_epoch_bound_and_feasibility(self):
        self.prep(seed=2)
        for _ in range(100):
            n_nodes = int(self.rng.integers(3, 6))
            if self.rng.random() < 0.5:
                topology = tcs_tests.line_topology(n_nodes=n_nodes)
                hops = lambda a, b: abs(a - b)
            else:
                # every detour around the ring stays within 800 km
                topology = tcs_tests.ring_topology(n_nodes=n_nodes, length_km=800.0/(n_nodes - 1))
                hops = lambda a, b: min(abs(a - b), n_nodes - abs(a - b))
            pairs = [(a, b) for a in range(1, n_nodes + 1) for b in range(1, n_nodes + 1)
                     if 1 <= hops(a, b) <= 2]
            n = int(self.rng.integers(1, 5))
            requests = []
            for j in self.rng.choice(len(pairs), size=n, replace=False):
                src, dst = pairs[j]
                requests.append((src, dst, float(self.rng.uniform(10.0, 200.0))))
            inst = tcs_tests.make_instance(requests=tuple(requests), topology=topology)
            prog = build_program(inst)
            report = round_and_fix(prog, inst)

            integer_count = len(prog.metadata['integer'])
            assert integer_count == 4*inst.n
            assert 1 <= report.epochs <= integer_count
            assert report.feasible, report.residuals
            assert feasibility_check(report.configs, inst).passed
            assert all(step.epoch <= report.epochs for step in report.rounding_trace)

    def test_integral_relaxation_single_epoch(self):
        inst = tcs_tests.make_instance(requests=((1, 3, 100.0), (1, 2, 50.0)), n_nodes=3)
        prog = build_program(inst)
        first = round_and_fix(prog, inst)

        x = encode_configs(prog, inst, first.configs)
        report = round_and_fix(prog, inst, relaxed=_relaxed(prog, x))
        assert report.epochs == 1
        epoch_one = [step for step in report.rounding_trace if step.reason in ('accepted', 'forced', 'fallback')]
        assert len(epoch_one) == 4*inst.n
        assert all(step.reason == 'accepted' and step.epoch == 1 for step in epoch_one)
        assert report.feasible

    def test_closest_variable_forced(self):
        inst = tcs_tests.make_instance(requests=((1, 3, 100.0), (1, 2, 50.0)), n_nodes=3)
        prog = build_program(inst)
        first = round_and_fix(prog, inst)
        layout = prog.metadata['layout']

        # every relaxed integer outside the acceptance precision, b[1] the closest
        x = encode_configs(prog, inst, first.configs)
        for q, cfg in enumerate(first.configs):
            x[layout.idx('b', q)] = cfg.b + (0.3 if q == 0 else 0.4)
            x[layout.idx('M', q)] = np.log(cfg.m + 0.45)
            x[layout.idx('C', q)] = np.log(cfg.c + 0.5)
            x[layout.idx('R', q)] = np.log(0.65)
        opts = SolverOptions(int_precision=0.25, grid_precision=0.01)
        report = round_and_fix(prog, inst, opts, relaxed=_relaxed(prog, x))

        epoch_one = [step for step in report.rounding_trace if step.epoch == 1]
        assert len(epoch_one) == 1
        assert epoch_one[0].variable == 'b[1]'
        assert epoch_one[0].reason == 'forced'
        assert np.isclose(epoch_one[0].relaxed, first.configs[0].b + 0.3)
        assert epoch_one[0].fixed == first.configs[0].b
        assert report.epochs <= 4*inst.n
        assert report.feasible

    def test_polish_lowers_power(self):
        inst = tcs_tests.make_instance(requests=((1, 2, 100.0),), n_nodes=2)
        prog = build_program(inst)
        polished = round_and_fix(prog, inst)
        plain = round_and_fix(prog, inst, SolverOptions(polish=False))
        assert polished.feasible and plain.feasible
        assert polished.objective_power_W <= plain.objective_power_W + 1e-9

    def test_adopt_incumbent(self):
        inst = tcs_tests.make_instance(requests=((1, 3, 100.0), (1, 2, 50.0)), n_nodes=3)
        report = solve(inst)
        assert not report.incumbent_used

        # a costlier result is replaced by the feasible incumbent
        costly = replace(report, objective_power_W=report.objective_power_W + 100.0)
        adopted = adopt_incumbent(costly, report.configs, inst)
        assert adopted.incumbent_used
        assert np.isclose(adopted.objective_power_W, report.objective_power_W, rtol=1e-12)
        assert adopted.epochs == report.epochs

        # a cheaper result is kept
        assert adopt_incumbent(report, report.configs, inst) is report

        # an infeasible incumbent is ignored
        broken = [replace(cfg, omega=report.configs[0].omega) for cfg in report.configs]
        assert adopt_incumbent(costly, broken, inst) is costly
        assert adopt_incumbent(None, broken, inst) is None

    def test_violated_final_configuration_raises(self, monkeypatch):
        from fmf_tcs.src.solvers import rounding
        from fmf_tcs.src.solvers.feasibility import FeasibilityResult
        from fmf_tcs.utils.error_utils import RoundingError

        inst = tcs_tests.make_instance(requests=((1, 3, 100.0), (1, 2, 50.0)), n_nodes=3)
        good = solve(inst)

        # only the final check of the rounding loop passes distances
        def failing(configs, inst, distances=None):
            if distances is None:
                return feasibility_check(configs, inst)
            return FeasibilityResult(
                passed=False, residuals={'osnr[2]': 0.3}, violated=['osnr[2]'], worst=('osnr[2]', 0.3))

        monkeypatch.setattr(rounding, 'feasibility_check', failing)
        with pytest.raises(RoundingError) as error:
            round_and_fix(build_program(inst), inst)
        assert error.value.binding == 'osnr[2]'
        assert 'osnr[2]' in error.value.message

        with pytest.raises(RoundingError):
            solve(inst)
        report = solve(inst, incumbent=good.configs)
        assert report.incumbent_used and report.feasible
        assert 'solver failed' in report.status
