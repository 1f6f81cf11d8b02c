import numpy as np
import pytest

import fmf_tcs.utils.testing_utils as tcs_tests
from fmf_tcs.experiments.scenario import load_scenario
from fmf_tcs.experiments.oracle_compare import (
    Comparison, random_requests, oracle_instances, compare_oracle, COMPARE_COLUMNS,
)
from fmf_tcs.src.solvers import solve, feasibility_check
from fmf_tcs.utils.error_utils import ScenarioError


def test_comparison_columns():
    comparison = Comparison('a', 1, 105.0, 100.0, 0.5, 2.0, True, True)
    assert comparison.gap == pytest.approx(0.05)
    assert comparison.speed_ratio == pytest.approx(4.0)
    assert len(comparison.row()) == len(COMPARE_COLUMNS)

    refused = Comparison('b', 1, np.nan, 100.0, 0.5, 2.0, False, True)
    assert np.isnan(refused.gap)
    assert refused.row()[-2:] == [False, True]


def test_random_requests_are_seeded():
    topology = tcs_tests.ring_topology(n_nodes=4)
    first = random_requests(topology, 3, np.random.default_rng(1), 10.0, 200.0)
    second = random_requests(topology, 3, np.random.default_rng(1), 10.0, 200.0)
    assert first == second
    assert [r.id for r in first] == [1, 2, 3]
    assert len({(r.src, r.dst) for r in first}) == 3
    assert all(10e9 <= r.rate_R <= 200e9 for r in first)


def test_oracle_instances(tmp_path):
    scenario = load_scenario(tcs_tests.write_scenario(tmp_path, oracle={'random_instances': 2}))
    names = [name for name, _ in oracle_instances(scenario)]
    assert names == ['small', 'random1', 'random2']

    big = load_scenario(tcs_tests.write_scenario(
        tmp_path, name='big', traffic={'total_tbps': 0.4, 'pairs': 'ordered'}))
    with pytest.raises(ScenarioError):
        oracle_instances(big)

    wrong = load_scenario(tcs_tests.write_scenario(tmp_path, name='wrong', oracle={'random_instances': 1, 'requests': 4}))
    with pytest.raises(ScenarioError) as error:
        oracle_instances(wrong)
    assert error.value.field == 'oracle.requests'


@pytest.mark.slow
def test_solver_matches_oracle_on_random_instances(tmp_path):
    scenario = load_scenario(tcs_tests.write_scenario(
        tmp_path,
        topology=tcs_tests.line_document(n_nodes=3),
        oracle={'random_instances': 20, 'requests': 2, 'min_rate_gbps': 20.0, 'max_rate_gbps': 150.0},
        seed=2,
    ))
    comparisons = compare_oracle(scenario, str(tmp_path / 'out'))
    assert len(comparisons) == 21
    for comparison in comparisons:
        assert comparison.solver_feasible and comparison.oracle_feasible
        assert comparison.gap <= 0.05
    lines = (tmp_path / 'out' / 'oracle_compare.csv').read_text().splitlines()
    assert lines[0] == ','.join(COMPARE_COLUMNS)
    assert len(lines) == 22

    opts = scenario.solver_options()
    for name, inst in oracle_instances(scenario):
        report = solve(inst, opts)
        check = feasibility_check(report.configs, inst)
        assert check.passed, (name, check.violated)
