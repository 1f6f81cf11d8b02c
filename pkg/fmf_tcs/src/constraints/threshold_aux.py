import numpy as np

import fmf_tcs.utils.testing_utils as tcs_tests

def add_threshold_aux_constraints(prog, inst, layout):
    """1 + kappa3 c <= t, i.e. ln(1 + kappa3 e^C) - T <= 0"""
    log_kappa3 = np.log(inst.constants.kappa3)
    for q, rid in enumerate(layout.request_ids):
        prog.add_constraint(
            f'threshold_aux[{rid}]', 'threshold_aux',
            [({}, 0.0), ({layout.idx('C', q): 1.0}, log_kappa3)],
            ({layout.idx('T', q): 1.0}, 0.0))


class TestThresholdAuxConstraint(tcs_tests.TCSTest):

    def test_value(self):
        self.prep()
        inst, prog = tcs_tests.make_program(requests=((1, 2, 100.0),))
        layout = prog.metadata['layout']
        j = prog.constraint_names.index('threshold_aux[1]')

        x = np.zeros(prog.n)
        x[layout.idx('C', 0)] = np.log(4.0)
        x[layout.idx('T', 0)] = np.log(1.0 + 0.21*4.0)
        compare_values = [tcs_tests.TestingPair(prog.constraints(x)[j], 0.0, decimal=12, tag='tight')]

        x[layout.idx('T', 0)] += 0.25
        compare_values += [tcs_tests.TestingPair(prog.constraints(x)[j], -0.25, decimal=12, tag='slack')]
        self.run_tests(compare_values=compare_values, program=prog, verify_gradients=True, verify_convexity=True)
