import numpy as np

from fmf_tcs.src.program.layout import LN2
import fmf_tcs.utils.testing_utils as tcs_tests

def add_spectrum_constraints(prog, inst, layout):
    """
    Every spectrum stays inside the fiber band: omega - Delta/2 >= 0 and omega + Delta/2 <= B.
    """
    log_half_F = np.log(0.5*inst.constants.F)
    log_B = np.log(inst.bandwidth_B)
    for q, rid in enumerate(layout.request_ids):
        W = layout.idx('W', q)
        b = layout.idx('b', q)
        prog.add_constraint(
            f'spectrum_upper[{rid}]', 'spectrum',
            [({W: 1.0}, 0.0), ({b: LN2}, log_half_F)],
            ({}, log_B))
        prog.add_constraint(
            f'spectrum_lower[{rid}]', 'spectrum',
            [({b: LN2}, log_half_F)],
            ({W: 1.0}, 0.0))


class TestSpectrumConstraint(tcs_tests.TCSTest):

    def test_value(self):
        self.prep()
        from fmf_tcs.src.program.builder import encode_configs
        from fmf_tcs.src.phy import TransponderConfig

        inst, prog = tcs_tests.make_program(requests=((1, 2, 100.0), (2, 3, 40.0)), bandwidth_ghz=1000.0)
        configs = [
            TransponderConfig(c=4, b=8, r=0.8, p=1e-3, m=1, omega=5e9),
            TransponderConfig(c=4, b=10, r=0.8, p=1e-3, m=1, omega=990e9),
        ]
        x = encode_configs(prog, inst, configs)
        g = prog.constraints(x)
        index = prog.constraint_names.index

        compare_values = []
        compare_values += [tcs_tests.TestingPair(g[index('spectrum_upper[1]')], np.log((5e9 + 10.24e9)/1000e9), decimal=11, tag='upper 1')]
        compare_values += [tcs_tests.TestingPair(g[index('spectrum_lower[1]')], np.log(10.24e9/5e9), decimal=11, tag='lower 1')]
        compare_values += [tcs_tests.TestingPair(g[index('spectrum_upper[2]')], np.log((990e9 + 40.96e9)/1000e9), decimal=11, tag='upper 2')]
        compare_values += [tcs_tests.TestingPair(g[index('spectrum_lower[2]')], np.log(40.96e9/990e9), decimal=11, tag='lower 2')]
        self.run_tests(compare_values=compare_values, program=prog, verify_gradients=True, verify_convexity=True)

        # request 1 starts below zero, request 2 ends above the band
        assert g[index('spectrum_lower[1]')] > 0.0
        assert g[index('spectrum_upper[2]')] > 0.0
        assert g[index('spectrum_upper[1]')] < 0.0
        assert g[index('spectrum_lower[2]')] < 0.0
