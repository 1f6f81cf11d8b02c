import fmf_tcs.utils.testing_utils as tcs_tests
from fmf_tcs.src.program import ConvexProgram, VariableLayout, BLOCKS, DiscreteSets
from fmf_tcs.src.program.builder import (
    build_program, program_pairs, initial_point, encode_configs, decode_point, interior_clip,
)
from fmf_tcs.src.phy import TransponderConfig
from fmf_tcs.utils.error_utils import InfeasibleProgramError
import numpy as np
import pytest


class TestLayout(tcs_tests.TCSTest):

    def test_size_and_names(self):
        layout = VariableLayout((4, 7, 9), [(0, 2), (2, 0)])
        assert layout.size == 7*3 + 2
        assert len(BLOCKS) == 7
        names = layout.names()
        assert names[layout.idx('W', 1)] == 'W[7]'
        assert names[layout.idx('b', 2)] == 'b[9]'
        assert names[layout.d(2, 0)] == 'D[9,4]'
        assert layout.block('P') == slice(6, 9)


class TestBuildProgram(tcs_tests.TCSTest):

    def test_structure(self):
        inst, prog = tcs_tests.make_program(requests=((1, 3, 100.0), (1, 2, 50.0), (2, 3, 80.0)), n_nodes=3)
        layout = prog.metadata['layout']
        pairs = program_pairs(inst.routing)
        assert prog.n == 7*inst.n + len(pairs)
        assert len(pairs) == 2*len(inst.routing.sharing_pairs)

        assert prog.family_indices('qos').size == inst.n
        assert prog.family_indices('rate').size == inst.n
        assert prog.family_indices('spectrum').size == 2*inst.n
        assert prog.family_indices('threshold_aux').size == inst.n
        assert prog.family_indices('distance').size == len(pairs)
        assert prog.family_indices('nonoverlap').size == len(inst.routing.consecutive_pairs)

        integer = prog.metadata['integer']
        assert len(integer) == 4*inst.n
        assert {var.name for var in integer} >= {'b[1]', 'm[2]', 'c[3]', 'r[1]'}
        assert prog.metadata['power_mode'] == 'adaptive'
        assert prog.locked
        with pytest.raises(RuntimeError):
            prog.add_objective_constant(1.0)
        assert layout.request_ids == (1, 2, 3)

    def test_initial_point_inside_bounds(self):
        inst, prog = tcs_tests.make_program(requests=((1, 3, 100.0), (1, 2, 50.0)), n_nodes=3)
        x = initial_point(prog, inst)
        assert prog.in_bounds(x, strict=True)

    def test_encode_decode(self):
        inst, prog = tcs_tests.make_program(requests=((1, 3, 100.0), (1, 2, 50.0)), n_nodes=3, global_order=(1, 2))
        configs = [
            TransponderConfig(c=4, b=8, r=0.8, p=1e-3, m=2, omega=300e9),
            TransponderConfig(c=2, b=6, r=0.6, p=2e-3, m=1, omega=700e9),
        ]
        x = encode_configs(prog, inst, configs)
        decoded = decode_point(prog, inst, x, snap=True)
        for cfg, back in zip(configs, decoded):
            assert (back.c, back.b, back.r, back.m) == (cfg.c, cfg.b, cfg.r, cfg.m)
            assert np.isclose(back.p, cfg.p, rtol=1e-12)
            assert np.isclose(back.omega, cfg.omega, rtol=1e-12)
        layout = prog.metadata['layout']
        assert np.isclose(np.exp(x[layout.d(0, 1)]), 400e9, rtol=1e-12)
        with pytest.raises(ValueError):
            encode_configs(prog, inst, configs[:1])

    def test_fixed_power_tie(self):
        inst = tcs_tests.make_instance(requests=((1, 2, 100.0),), n_nodes=2).with_fixed_power([2e-3])
        prog = build_program(inst)
        layout = prog.metadata['layout']
        assert prog.metadata['power_mode'] == 'fixed'
        assert prog.fixed_mask[layout.idx('P', 0)]

        # the objective and qos rows never read P, only M + ln(per-mode power)
        column = prog.A[:, layout.idx('P', 0)]
        assert column.nnz == 0
        configs = [TransponderConfig(c=4, b=8, r=0.8, p=4e-3, m=2, omega=500e9)]
        decoded = decode_point(prog, inst, encode_configs(prog, inst, configs), snap=True)
        assert np.isclose(decoded[0].p, 4e-3, rtol=1e-12)

    def test_spectrum_diagnosis(self):
        # 17 carriers of at least 1.28 GHz plus 20 GHz guard bands need more than 300 GHz
        requests = tuple((1, 2, 10.0) for _ in range(17))
        inst = tcs_tests.make_instance(requests=requests, n_nodes=2, bandwidth_ghz=300.0)
        with pytest.raises(InfeasibleProgramError) as error:
            build_program(inst)
        assert error.value.violated[0][0].startswith('spectrum_upper')

    def test_rate_diagnosis(self):
        inst = tcs_tests.make_instance(requests=((1, 2, 1e5),), n_nodes=2)
        with pytest.raises(InfeasibleProgramError) as error:
            build_program(inst)
        assert [name for name, _ in error.value.violated] == ['rate[1]']
        assert error.value.violated[0][1] > 0.0

    def test_discrete_sets(self):
        with pytest.raises(ValueError):
            DiscreteSets(c_values=(2, 1))
        with pytest.raises(ValueError):
            DiscreteSets(r_values=(0.5, 1.2))
        with pytest.raises(ValueError):
            DiscreteSets(m_range=(0, 2))
        ds = DiscreteSets(b_range=(5, 7)).resolved(3)
        assert ds.b_values == (5, 6, 7)
        assert ds.m_values == (1, 2, 3)
        with pytest.raises(ValueError):
            DiscreteSets(m_range=(1, 4)).resolved(3)


class TestConvexProgram(tcs_tests.TCSTest):

    def test_tie_and_fix(self):
        prog = ConvexProgram(2, name='toy')
        prog.tie(1, 0, 0.5)
        prog.add_objective_term({1: 1.0}, 0.0)
        prog.set_bounds(0, -1.0, 1.0)
        prog.set_bounds(1, -1.0, 1.0)
        prog.finalize()
        # e^(x0 + 0.5)
        assert np.isclose(prog.objective(np.array([0.0, 9.0])), np.exp(0.5))
        fixed = prog.fix({0: 0.25})
        assert fixed.fixed_mask.tolist() == [True, False]
        assert not prog.fixed_mask.any()
        x = interior_clip(fixed, np.array([3.0, 3.0]))
        assert x[0] == 0.25 and x[1] < 1.0
        with pytest.raises(ValueError):
            ConvexProgram(2, names=['a'])
