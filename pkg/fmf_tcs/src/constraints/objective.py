import numpy as np

from fmf_tcs.src.program.layout import LN2
import fmf_tcs.utils.testing_utils as tcs_tests

def add_power_objective(prog, inst, layout):
    """
    Sum over requests of the log-domain transponder power

    P_trb + 2 P_edc e^(M-R) + fft_scale P_fft e^(fft_exp b + M) + 2 P_dsp e^(2M + b ln2)

    Terms with a zero coefficient are left out.
    """
    k = inst.constants
    for q in range(inst.n):
        C_M = layout.idx('M', q)
        C_R = layout.idx('R', q)
        C_b = layout.idx('b', q)
        prog.add_objective_constant(k.P_trb)
        if k.P_edc > 0.0:
            prog.add_objective_term({C_M: 1.0, C_R: -1.0}, np.log(2.0*k.P_edc))
        if k.P_fft > 0.0:
            prog.add_objective_term({C_b: k.fft_exp, C_M: 1.0}, np.log(k.fft_scale*k.P_fft))
        if k.P_dsp > 0.0:
            prog.add_objective_term({C_M: 2.0, C_b: LN2}, np.log(2.0*k.P_dsp))


def add_distance_penalty(prog, inst, layout):
    """penalty_K * sum of 1/d over all distance variables"""
    log_K = np.log(inst.penalty_K)
    for pair in layout.pairs:
        prog.add_objective_term({layout.d(*pair): -1.0}, log_K)


class TestObjective(tcs_tests.TCSTest):

    def _configs(self):
        from fmf_tcs.src.phy.transponder import TransponderConfig
        return [
            TransponderConfig(c=4, b=8, r=0.8, p=1e-3, m=1, omega=100e9),
            TransponderConfig(c=2, b=6, r=0.6, p=2e-3, m=2, omega=400e9),
        ]

    def test_value(self):
        self.prep()
        from fmf_tcs.src.program.builder import encode_configs
        from fmf_tcs.src.phy.transponder import transponder_power_convex

        inst, prog = tcs_tests.make_program(requests=((1, 3, 100.0), (1, 2, 50.0)))
        configs = self._configs()
        x = encode_configs(prog, inst, configs)

        power = sum(float(transponder_power_convex(np.log(cfg.m), np.log(cfg.r), cfg.b, self.k)) for cfg in configs)
        penalty = 2.0*inst.penalty_K/300e9

        compare_values = []
        compare_values += [tcs_tests.TestingPair(prog.objective(x), power + penalty, relative=True, decimal=12, tag='objective')]
        self.run_tests(compare_values=compare_values, program=prog, verify_gradients=True, verify_convexity=True)

    def test_reference_surrogate(self):
        self.prep()
        from fmf_tcs.src.program.builder import encode_configs
        from fmf_tcs.src.phy.transponder import TransponderConfig

        inst, prog = tcs_tests.make_program(requests=((1, 2, 100.0),))
        x = encode_configs(prog, inst, [TransponderConfig(c=4, b=8, r=0.8, p=1e-3, m=1, omega=500e9)])
        # exact power 61.92 W, the fit replaces 2*8*2^8*P_fft = 16.384 W by 5.36*e^(0.82*8)*P_fft
        surrogate = 61.92 - 16.384 + 5.36*np.exp(0.82*8)*4e-3
        compare_values = [tcs_tests.TestingPair(prog.objective(x), surrogate, decimal=9, tag='surrogate')]
        self.run_tests(compare_values=compare_values)

    def test_zero_coefficients(self):
        self.prep()
        from fmf_tcs.src.phy.constants import PhysicalConstants
        k = PhysicalConstants(P_edc=0.0, P_fft=0.0, P_dsp=0.0)
        inst, prog = tcs_tests.make_program(requests=((1, 2, 10.0),), constants=k)
        assert prog.A_obj.shape[0] == 0
        x = np.zeros(prog.n)
        assert prog.objective(x) == k.P_trb
        assert np.all(prog.objective_gradient(x) == 0.0)
