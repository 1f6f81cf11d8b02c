import numpy as np

from fmf_tcs.src.program.layout import LN2
import fmf_tcs.utils.testing_utils as tcs_tests

def add_rate_constraints(prog, inst, layout):
    """
    Demanded rate within the capacity after the cyclic prefix:

    R_q (1/F + sigma N 2^b + rho m^-mode_exp g(N)) <= 2 m r c 2^b

    divided through by the right-hand side. The dispersion and mode coupling
    terms are left out when their coefficient is zero.
    """
    k = inst.constants
    span_N = inst.routing.span_N
    g_N = inst.coupling.broadening(span_N)
    rates = inst.rates
    for q, rid in enumerate(layout.request_ids):
        C = layout.idx('C', q)
        R = layout.idx('R', q)
        M = layout.idx('M', q)
        b = layout.idx('b', q)
        terms = [({M: -1.0, R: -1.0, C: -1.0, b: -LN2}, np.log(0.5*rates[q]/k.F))]
        if k.sigma_cd > 0.0:
            terms.append(({M: -1.0, R: -1.0, C: -1.0}, np.log(0.5*k.sigma_cd*span_N[q]*rates[q])))
        if k.rho_mc > 0.0:
            terms.append(({M: -(1.0 + k.mode_exp), R: -1.0, C: -1.0, b: -LN2}, np.log(0.5*k.rho_mc*g_N[q]*rates[q])))
        prog.add_constraint(f'rate[{rid}]', 'rate', terms)


class TestRateConstraint(tcs_tests.TCSTest):

    def _check(self, coupling, constants=None):
        from fmf_tcs.src.program.builder import encode_configs
        from fmf_tcs.src.phy import TransponderConfig, rate_capacity

        inst, prog = tcs_tests.make_program(
            requests=((1, 4, 150.0), (2, 3, 60.0)), n_nodes=4, coupling=coupling, constants=constants)
        configs = [
            TransponderConfig(c=4, b=8, r=0.8, p=1e-3, m=1, omega=100e9),
            TransponderConfig(c=2, b=5, r=0.7, p=1e-3, m=3, omega=500e9),
        ]
        x = encode_configs(prog, inst, configs)
        g = prog.constraints(x)
        compare_values = []
        for q, rid in enumerate(inst.routing.request_ids):
            capacity = rate_capacity(configs[q], inst.routing.span_N[q], coupling, inst.constants)
            j = prog.constraint_names.index(f'rate[{rid}]')
            compare_values += [tcs_tests.TestingPair(g[j], np.log(inst.rates[q]/capacity), decimal=11, tag=f'{coupling} rate[{rid}]')]
        self.run_tests(compare_values=compare_values, program=prog, verify_gradients=True, verify_convexity=True)
        return prog

    def test_strong(self):
        self.prep()
        self._check('strong')

    def test_weak(self):
        self.prep()
        self._check('weak')

    def test_without_broadening(self):
        self.prep(sigma_cd=0.0, rho_mc=0.0)
        prog = self._check('strong', self.k)
        j = prog.constraint_names.index('rate[1]')
        assert np.sum(prog.owner == j) == 1

    def test_reference_capacity(self):
        self.prep()
        from fmf_tcs.src.phy import TransponderConfig, rate_capacity
        cfg = TransponderConfig(c=4, b=8, r=0.8, p=1e-3, m=1, omega=1e12)
        compare_values = [tcs_tests.TestingPair(rate_capacity(cfg, 25, 'strong', self.k)/1e9, 124.55, decimal=2, tag='capacity')]
        self.run_tests(compare_values=compare_values)
