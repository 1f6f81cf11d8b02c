import numpy as np

from fmf_tcs.src.program.layout import LN2
from fmf_tcs.src.phy.constants import derived_zeta, derived_varsigma
import fmf_tcs.utils.testing_utils as tcs_tests

def add_qos_constraints(prog, inst, layout):
    """
    OSNR of every request above its threshold r^kappa2 t^kappa4, written as

    ln[ zeta F N_q e^(kappa2 R + kappa4 T + M - P + b ln2)
        + sum_i kappa1 varsigma N_qi / F e^(kappa2 R + kappa4 T + 2 P_i - M_i - b_i ln2 - D_qi) ] <= 0

    with one interference term per request sharing spans with q.
    """
    k = inst.constants
    zeta = derived_zeta(k)
    varsigma = derived_varsigma(k)
    span_N = inst.routing.span_N
    shared = inst.routing.shared_spans
    for q, rid in enumerate(layout.request_ids):
        own = {
            layout.idx('R', q): k.kappa2,
            layout.idx('T', q): k.kappa4,
        }
        ase = dict(own)
        ase[layout.idx('M', q)] = 1.0
        ase[layout.idx('P', q)] = -1.0
        ase[layout.idx('b', q)] = LN2
        terms = [(ase, np.log(zeta*k.F*span_N[q]))]
        for i in range(inst.n):
            if i == q or shared[q, i] <= 0:
                continue
            nli = dict(own)
            nli[layout.idx('P', i)] = 2.0
            nli[layout.idx('M', i)] = -1.0
            nli[layout.idx('b', i)] = -LN2
            nli[layout.d(q, i)] = -1.0
            terms.append((nli, np.log(k.kappa1*varsigma*shared[q, i]/k.F)))
        prog.add_constraint(f'qos[{rid}]', 'qos', terms)


class TestQoSConstraint(tcs_tests.TCSTest):

    def test_matches_osnr(self):
        self.prep()
        from fmf_tcs.src.program.builder import encode_configs
        from fmf_tcs.src.phy import TransponderConfig, osnr_all, osnr_threshold

        inst, prog = tcs_tests.make_program(
            requests=((1, 3, 100.0), (1, 2, 50.0), (2, 3, 80.0)),
            n_nodes=3,
        )
        configs = [
            TransponderConfig(c=4, b=8, r=0.8, p=1e-3, m=1, omega=100e9),
            TransponderConfig(c=2, b=6, r=0.6, p=2e-3, m=2, omega=400e9),
            TransponderConfig(c=3, b=7, r=0.9, p=5e-4, m=3, omega=900e9),
        ]
        x = encode_configs(prog, inst, configs)
        g = prog.constraints(x)
        psi = osnr_all(configs, inst)

        compare_values = []
        for q, rid in enumerate(inst.routing.request_ids):
            j = prog.constraint_names.index(f'qos[{rid}]')
            theta = osnr_threshold(configs[q].c, configs[q].r, self.k)
            compare_values += [tcs_tests.TestingPair(g[j], np.log(theta/psi[q]), decimal=10, tag=f'qos[{rid}]')]
        self.run_tests(compare_values=compare_values, program=prog, verify_gradients=True, verify_convexity=True)

    def test_single_request(self):
        self.prep()
        from fmf_tcs.src.phy.constants import derived_zeta

        inst, prog = tcs_tests.make_program(requests=((1, 2, 100.0),))
        j = prog.constraint_names.index('qos[1]')
        assert np.sum(prog.owner == j) == 1

        x = self.rng.uniform(-1.0, 1.0, size=prog.n)
        layout = prog.metadata['layout']
        R, T, M, P, b = (x[layout.idx(block, 0)] for block in ('R', 'T', 'M', 'P', 'b'))
        expected = self.k.kappa2*R + self.k.kappa4*T + M - P + b*LN2 + np.log(derived_zeta(self.k)*self.k.F*5)
        compare_values = [tcs_tests.TestingPair(prog.constraints(x)[j], expected, decimal=11, tag='single_exponential')]
        self.run_tests(compare_values=compare_values)

    def test_fixed_power_substitution(self):
        self.prep()
        from fmf_tcs.src.program.builder import build_program, encode_configs
        from fmf_tcs.src.phy import TransponderConfig, osnr_all, osnr_threshold

        inst = tcs_tests.make_instance(requests=((1, 3, 100.0), (1, 2, 50.0)))
        inst = inst.with_fixed_power([4e-4, 7e-4])
        prog = build_program(inst)
        configs = [
            TransponderConfig(c=4, b=8, r=0.8, p=2*4e-4, m=2, omega=100e9),
            TransponderConfig(c=2, b=6, r=0.6, p=3*7e-4, m=3, omega=400e9),
        ]
        x = encode_configs(prog, inst, configs)
        g = prog.constraints(x)
        psi = osnr_all(configs, inst)
        compare_values = []
        for q, rid in enumerate(inst.routing.request_ids):
            j = prog.constraint_names.index(f'qos[{rid}]')
            theta = osnr_threshold(configs[q].c, configs[q].r, self.k)
            compare_values += [tcs_tests.TestingPair(g[j], np.log(theta/psi[q]), decimal=10, tag=f'fixed qos[{rid}]')]
        self.run_tests(compare_values=compare_values, program=prog, verify_gradients=True)
