import fmf_tcs.utils.testing_utils as tcs_tests

def add_distance_constraints(prog, inst, layout):
    """
    Carrier distances of requests sharing spans: d_qi, d_iq <= omega_right - omega_left,
    as ln(e^D + e^W_left) - W_right <= 0. The objective penalty pushes both to equality.
    """
    ids = layout.request_ids
    for q, i in inst.routing.sharing_pairs:
        left, right = inst.routing.left_right(q, i)
        for a, b in ((q, i), (i, q)):
            prog.add_constraint(
                f'distance[{ids[a]},{ids[b]}]', 'distance',
                [({layout.d(a, b): 1.0}, 0.0), ({layout.idx('W', left): 1.0}, 0.0)],
                ({layout.idx('W', right): 1.0}, 0.0))


class TestDistanceConstraint(tcs_tests.TCSTest):

    def test_value(self):
        self.prep()
        import numpy as np
        from fmf_tcs.src.program.builder import encode_configs, tighten_distances
        from fmf_tcs.src.phy import TransponderConfig

        inst, prog = tcs_tests.make_program(requests=((1, 3, 100.0), (1, 2, 50.0)), global_order=(2, 1))
        configs = [
            TransponderConfig(c=4, b=8, r=0.8, p=1e-3, m=1, omega=700e9),
            TransponderConfig(c=2, b=6, r=0.6, p=2e-3, m=2, omega=300e9),
        ]
        x = encode_configs(prog, inst, configs)
        families = np.array(prog.constraint_families)
        g = prog.constraints(x)[families == 'distance']
        assert len(g) == 2

        compare_values = [tcs_tests.TestingPair(g, np.zeros(2), decimal=12, tag='tight')]

        layout = prog.metadata['layout']
        x[layout.d(0, 1)] -= 0.1
        loose = prog.constraints(x)[prog.constraint_names.index('distance[1,2]')]
        compare_values += [tcs_tests.TestingPair(loose, np.log((400e9*np.exp(-0.1) + 300e9)/700e9), decimal=12, tag='loose')]

        tightened = tighten_distances(prog, x)
        compare_values += [tcs_tests.TestingPair(np.exp(tightened[layout.d_slice]), [400e9, 400e9], relative=True, decimal=12, tag='tightened')]
        self.run_tests(compare_values=compare_values, program=prog, verify_gradients=True, verify_convexity=True)
