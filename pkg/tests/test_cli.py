import fmf_tcs.utils.testing_utils as tcs_tests
from fmf_tcs.experiments.cli import main, EXIT_OK, EXIT_INFEASIBLE, EXIT_INVALID


def _crowded(tmp_path):
    return tcs_tests.write_scenario(
        tmp_path,
        name='crowded',
        topology=tcs_tests.line_document(bandwidth_ghz=20.0),
        traffic={'requests': [
            {'id': 1, 'src': 1, 'dst': 3, 'rate_gbps': 50.0},
            {'id': 2, 'src': 1, 'dst': 2, 'rate_gbps': 50.0},
        ]},
    )


def test_validate(tmp_path):
    path = tcs_tests.write_scenario(tmp_path, power_mode='both')
    assert main(['validate', '--scenario', path, '--out', str(tmp_path / 'out')]) == EXIT_OK
    assert main(['validate', '--scenario', _crowded(tmp_path)]) == EXIT_INFEASIBLE


def test_invalid_input(tmp_path):
    assert main(['validate', '--scenario', str(tmp_path / 'missing.yaml')]) == EXIT_INVALID
    path = tcs_tests.write_scenario(tmp_path, colour='blue')
    assert main(['solve', '--scenario', path, '--out', str(tmp_path / 'out')]) == EXIT_INVALID
    path = tcs_tests.write_scenario(tmp_path, name='fine')
    assert main(['solve', '--scenario', path, '--modes', '0', '--out', str(tmp_path / 'out')]) == EXIT_INVALID


def test_solve_writes_reports(tmp_path):
    from fmf_tcs.src.data import import_report
    from fmf_tcs.src.solvers import SolveReport

    out = tmp_path / 'out'
    path = tcs_tests.write_scenario(tmp_path)
    assert main(['solve', '--scenario', path, '--out', str(out), '--hdf5']) == EXIT_OK
    report = SolveReport.read_yaml(str(out / 'report.yaml'))
    assert report.feasible
    assert report.power_mode == 'adaptive'
    assert import_report(str(out / 'report.hdf5')).to_document() == report.to_document()
    assert (out / 'configs.csv').exists()
    manifest = (out / 'manifest.txt').read_text().splitlines()
    assert manifest[0] == 'command: solve'
    assert 'output: report.yaml' in manifest


def test_solve_both_power_modes(tmp_path):
    from fmf_tcs.src.solvers import SolveReport

    out = tmp_path / 'out'
    path = tcs_tests.write_scenario(tmp_path)
    assert main(['solve', '--scenario', path, '--out', str(out), '--power-mode', 'both', '--coupling', 'weak']) == EXIT_OK
    fixed = SolveReport.read_yaml(str(out / 'report_fixed.yaml'))
    adaptive = SolveReport.read_yaml(str(out / 'report_adaptive.yaml'))
    assert fixed.power_mode == 'fixed'
    assert adaptive.coupling == 'weak'
    assert adaptive.objective_power_W <= fixed.objective_power_W*(1.0 + 1e-9)


def test_solve_infeasible(tmp_path):
    out = tmp_path / 'out'
    assert main(['solve', '--scenario', _crowded(tmp_path), '--out', str(out)]) == EXIT_INFEASIBLE
    assert not (out / 'report.yaml').exists()
    assert (out / 'manifest.txt').exists()


def test_sweep(tmp_path):
    out = tmp_path / 'out'
    path = tcs_tests.write_scenario(tmp_path, sweep={'axis': 'modes', 'values': [2, 3]})
    assert main(['sweep', '--scenario', path, '--out', str(out), '--workers', '1']) == EXIT_OK
    for name in ('sweep.csv', 'timing.csv', 'plotdata.csv', 'manifest.txt'):
        assert (out / name).exists()
    assert len((out / 'sweep.csv').read_text().splitlines()) == 3
    assert len((out / 'plotdata.csv').read_text().splitlines()) == 9


def test_sweep_infeasible(tmp_path):
    assert main(['sweep', '--scenario', _crowded(tmp_path), '--out', str(tmp_path / 'out')]) == EXIT_INFEASIBLE


def test_oracle(tmp_path):
    out = tmp_path / 'out'
    path = tcs_tests.write_scenario(
        tmp_path, topology=tcs_tests.line_document(n_nodes=2),
        traffic={'requests': [{'id': 1, 'src': 1, 'dst': 2, 'rate_gbps': 100.0}]},
        oracle={'points_per_decade': 5, 'decades': 2})
    assert main(['oracle', '--scenario', path, '--out', str(out)]) == EXIT_OK
    lines = (out / 'oracle_compare.csv').read_text().splitlines()
    assert lines[0].startswith('instance,requests,solver_W,oracle_W,gap')
    assert lines[1].startswith('small,1,')
    assert (out / 'oracle_small.csv').exists()


def test_oracle_cap(tmp_path):
    path = tcs_tests.write_scenario(tmp_path, oracle={'cap': 10})
    assert main(['oracle', '--scenario', path, '--out', str(tmp_path / 'out')]) == EXIT_INVALID
