import pytest


def test_load_defaults(tmp_path):
    import fmf_tcs.utils.testing_utils as tcs_tests
    from fmf_tcs.experiments.scenario import load_scenario

    scenario = load_scenario(tcs_tests.write_scenario(tmp_path))
    assert scenario.name == 'small'
    assert scenario.coupling == 'strong'
    assert scenario.power_mode == 'adaptive'
    assert scenario.sweep_axis is None
    assert scenario.sweep_values == ()
    assert scenario.series() == ('adaptive',)
    assert scenario.topology.modes_M == 3
    assert [r.id for r in scenario.requests()] == [1]
    assert len(scenario.digest) == 64

    inst, mode = scenario.instance()
    assert mode == 'adaptive'
    assert inst.n == 1


def test_digest_tracks_inputs(tmp_path):
    import fmf_tcs.utils.testing_utils as tcs_tests
    from fmf_tcs.experiments.scenario import load_scenario

    first = load_scenario(tcs_tests.write_scenario(tmp_path, name='a'))
    same = load_scenario(tcs_tests.write_scenario(tmp_path, name='b'))
    other = load_scenario(tcs_tests.write_scenario(tmp_path, name='c', seed=5))
    assert first.digest == same.digest
    assert first.digest != other.digest


def test_uniform_traffic_sweep(tmp_path):
    import fmf_tcs.utils.testing_utils as tcs_tests
    from fmf_tcs.experiments.scenario import load_scenario

    path = tcs_tests.write_scenario(
        tmp_path,
        power_mode='both',
        traffic={'pairs': 'unordered'},
        sweep={'axis': 'traffic_tbps', 'values': [0.1, 0.2]},
    )
    scenario = load_scenario(path)
    assert scenario.sweep_values == (0.1, 0.2)
    assert scenario.series() == ('fixed', 'adaptive')
    requests = scenario.requests(total_tbps=0.3)
    assert len(requests) == 3
    assert sum(r.rate_R for r in requests) == pytest.approx(0.3e12)

    inst, mode = scenario.instance(0.2, 'fixed')
    assert mode == 'fixed'
    assert sum(inst.rates) == pytest.approx(0.2e12)


def test_power_mode_axis(tmp_path):
    import fmf_tcs.utils.testing_utils as tcs_tests
    from fmf_tcs.experiments.scenario import load_scenario

    path = tcs_tests.write_scenario(tmp_path, power_mode='both', sweep={'axis': 'power_mode', 'values': ['adaptive', 'fixed']})
    scenario = load_scenario(path)
    assert scenario.power_mode == 'adaptive'
    assert scenario.series() == ('sweep',)
    assert scenario.point_settings('fixed', 'sweep')['power_mode'] == 'fixed'


def test_overrides(tmp_path):
    import fmf_tcs.utils.testing_utils as tcs_tests
    from fmf_tcs.experiments.scenario import load_scenario, scenario_digest
    from fmf_tcs.utils.error_utils import ScenarioError

    scenario = load_scenario(tcs_tests.write_scenario(tmp_path))
    changed = scenario.override(seed=4, power_mode='fixed', coupling='weak', modes=5)
    assert (changed.seed, changed.power_mode, changed.coupling, changed.topology.modes_M) == (4, 'fixed', 'weak', 5)
    assert scenario.override() is scenario

    assert changed.digest == scenario_digest(changed)
    assert changed.digest != scenario.digest
    for change in ({'seed': 9}, {'power_mode': 'both'}, {'coupling': 'weak'}, {'modes': 4}):
        assert scenario.override(**change).digest not in (scenario.digest, changed.digest)

    with pytest.raises(ScenarioError) as error:
        scenario.override(modes=0)
    assert error.value.field == 'modes'


@pytest.mark.parametrize('fields, field', [
    ({'colour': 'blue'}, 'colour'),
    ({'power_mode': 'sometimes'}, 'power_mode'),
    ({'seed': -1}, 'seed'),
    ({'workers': 0}, 'workers'),
    ({'sweep': {'axis': 'length', 'values': [1]}}, 'sweep.axis'),
    ({'sweep': {'axis': 'modes', 'values': []}}, 'sweep.values'),
    ({'sweep': {'axis': 'modes', 'values': [2, 2]}}, 'sweep.values'),
    ({'sweep': {'axis': 'traffic_tbps', 'values': [1.0]}}, 'traffic'),
    ({'traffic': {'total_tbps': 1.0, 'pairs': 'some'}}, 'traffic.pairs'),
    ({'traffic': {'total_tbps': 1.0, 'jitter': 1.5}}, 'traffic.jitter'),
    ({'traffic': {'pairs': 'ordered'}}, 'traffic.total_tbps'),
    ({'power_bounds_mw': [10.0, 1.0]}, 'power_bounds_mw'),
    ({'oracle': {'budget': 3}}, 'oracle'),
    ({'topology': None}, 'topology'),
])
def test_invalid_fields(tmp_path, fields, field):
    import fmf_tcs.utils.testing_utils as tcs_tests
    from fmf_tcs.experiments.scenario import load_scenario
    from fmf_tcs.utils.error_utils import ScenarioError

    with pytest.raises(ScenarioError) as error:
        load_scenario(tcs_tests.write_scenario(tmp_path, **fields))
    assert error.value.field == field


def test_invalid_inputs(tmp_path):
    import fmf_tcs.utils.testing_utils as tcs_tests
    from fmf_tcs.experiments.scenario import load_scenario
    from fmf_tcs.utils.error_utils import ScenarioError

    with pytest.raises(ScenarioError, match='does not exist'):
        load_scenario(str(tmp_path / 'missing.yaml'))
    with pytest.raises(ScenarioError, match='does not exist'):
        load_scenario(tcs_tests.write_scenario(tmp_path, traffic='traffic.yaml'))
    with pytest.raises(ScenarioError, match='unknown node'):
        load_scenario(tcs_tests.write_scenario(
            tmp_path, traffic={'requests': [{'id': 1, 'src': 1, 'dst': 9, 'rate_gbps': 10.0}]}))
    with pytest.raises(ScenarioError):
        load_scenario(tcs_tests.write_scenario(tmp_path, solver={'tolerance': -1.0}))


def test_bundled_topology(tmp_path):
    import fmf_tcs.utils.testing_utils as tcs_tests
    from fmf_tcs.experiments.scenario import load_scenario

    scenario = load_scenario(tcs_tests.write_scenario(
        tmp_path, topology='ring6', modes=4, traffic={'total_tbps': 1.0, 'pairs': 'unordered'}))
    assert len(scenario.topology.nodes) == 6
    assert scenario.topology.modes_M == 4
    assert len(scenario.requests()) == 15
