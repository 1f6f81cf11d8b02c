import numpy as np

from fmf_tcs.src.program.layout import LN2
import fmf_tcs.utils.testing_utils as tcs_tests

def add_nonoverlap_constraints(prog, inst, layout):
    """
    Neighbours a < b on a link keep a guard band between their spectra:
    omega_a + Delta_a/2 + G + Delta_b/2 <= omega_b. One constraint per
    distinct neighbour pair over all links.
    """
    k = inst.constants
    log_half_F = np.log(0.5*k.F)
    log_G = np.log(k.G)
    ids = layout.request_ids
    for a, b in inst.routing.consecutive_pairs:
        terms = [
            ({layout.idx('W', a): 1.0}, 0.0),
            ({layout.idx('b', a): LN2}, log_half_F),
            ({}, log_G),
            ({layout.idx('b', b): LN2}, log_half_F),
        ]
        prog.add_constraint(f'nonoverlap[{ids[a]},{ids[b]}]', 'nonoverlap', terms, ({layout.idx('W', b): 1.0}, 0.0))


class TestNonoverlapConstraint(tcs_tests.TCSTest):

    def test_value(self):
        self.prep()
        from fmf_tcs.src.program.builder import encode_configs
        from fmf_tcs.src.phy import TransponderConfig

        inst, prog = tcs_tests.make_program(requests=((1, 3, 100.0), (1, 2, 50.0), (2, 3, 80.0)), global_order=(1, 2, 3))
        configs = [
            TransponderConfig(c=4, b=8, r=0.8, p=1e-3, m=1, omega=100e9),
            TransponderConfig(c=2, b=6, r=0.6, p=2e-3, m=2, omega=400e9),
            TransponderConfig(c=3, b=7, r=0.9, p=5e-4, m=3, omega=130e9),
        ]
        x = encode_configs(prog, inst, configs)
        g = prog.constraints(x)

        # 1 and 2 neighbour on link 1-2, 1 and 3 on link 2-3
        names = [name for name in prog.constraint_names if name.startswith('nonoverlap')]
        assert names == ['nonoverlap[1,2]', 'nonoverlap[1,3]']

        width = lambda b: 80e6*2**b
        expected_12 = np.log((100e9 + width(8)/2 + 20e9 + width(6)/2)/400e9)
        expected_13 = np.log((100e9 + width(8)/2 + 20e9 + width(7)/2)/130e9)
        compare_values = []
        compare_values += [tcs_tests.TestingPair(g[prog.constraint_names.index('nonoverlap[1,2]')], expected_12, decimal=11, tag='1-2')]
        compare_values += [tcs_tests.TestingPair(g[prog.constraint_names.index('nonoverlap[1,3]')], expected_13, decimal=11, tag='1-3')]
        self.run_tests(compare_values=compare_values, program=prog, verify_gradients=True, verify_convexity=True)

        assert g[prog.constraint_names.index('nonoverlap[1,2]')] < 0.0
        # 130 GHz leaves less than a guard band after request 1
        assert g[prog.constraint_names.index('nonoverlap[1,3]')] > 0.0

    def test_deduplicated(self):
        # both requests travel 1-2-3, the pair is listed once
        inst, prog = tcs_tests.make_program(requests=((1, 3, 100.0), (1, 3, 50.0)))
        names = [name for name in prog.constraint_names if name.startswith('nonoverlap')]
        assert names == ['nonoverlap[1,2]']
