def _report():
    import fmf_tcs.utils.testing_utils as tcs_tests
    from fmf_tcs.src.solvers import solve
    inst = tcs_tests.make_instance(requests=((1, 3, 100.0), (1, 2, 50.0)), n_nodes=3)
    return solve(inst)


def test_hdf5_round_trip(tmp_path):
    import os
    import numpy as np
    os.chdir(tmp_path)

    from fmf_tcs.src.data import export_report, import_report
    report = _report()
    filename = export_report(report, 'test_data')
    assert filename == 'test_data.hdf5'

    loaded = import_report(filename)
    assert loaded.request_ids == (1, 2)
    assert loaded.configs == report.configs
    assert loaded.objective_power_W == report.objective_power_W
    assert loaded.breakdown == report.breakdown
    assert loaded.residuals == report.residuals
    assert np.allclose(loaded.osnr, report.osnr, rtol=0.0, atol=0.0)
    assert len(loaded.rounding_trace) == len(report.rounding_trace)
    assert loaded.to_document() == report.to_document()


def test_string_request_ids(tmp_path):
    import os
    os.chdir(tmp_path)

    from dataclasses import replace
    from fmf_tcs.src.data import export_report, import_report
    report = replace(_report(), request_ids=('a', 'b'))
    loaded = import_report(export_report(report, 'named.hdf5'))
    assert loaded.request_ids == ('a', 'b')


def test_yaml_and_csv(tmp_path):
    import os
    os.chdir(tmp_path)

    from fmf_tcs.src.solvers import SolveReport
    from fmf_tcs.src.solvers.report import CONFIG_COLUMNS
    report = _report()
    report.write_yaml('report.yaml')
    assert SolveReport.read_yaml('report.yaml').to_document() == report.to_document()

    report.write_configs_csv('configs.csv')
    with open('configs.csv') as f:
        lines = f.read().splitlines()
    assert lines[0] == ','.join(CONFIG_COLUMNS)
    assert len(lines) == 3
