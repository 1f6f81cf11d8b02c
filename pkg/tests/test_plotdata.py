import numpy as np
import pytest

from fmf_tcs.experiments.sweep import SweepPoint, SweepResult, SWEEP_COLUMNS
from fmf_tcs.experiments.plotdata import to_tidy, to_wide, wide_rows, emit_plotdata, PLOT_COLUMNS


def _point(value, series, scale, feasible = True):
    breakdown = {'bias': 36.0*scale, 'codec': 10.0*scale, 'fft': 1.0*scale, 'dsp': 2.0*scale}
    return SweepPoint(
        sweep_value=value, series=series, total_W=sum(breakdown.values()), breakdown=breakdown,
        penalty=1.0, epochs=2, feasible=feasible, incumbent_used=False, requests=3, wall_time=0.5)


def _result(points):
    return SweepResult('plots', 'traffic_tbps', points)


def test_tidy_rows():
    result = _result([_point(1.0, 'adaptive', 1.0), _point(2.0, 'adaptive', 2.0), _point(4.0, 'adaptive', 3.0)])
    tidy = to_tidy(wide_rows(result))
    assert len(tidy) == 12
    assert tidy[0] == (1.0, 'adaptive:bias', 36.0)
    assert [name for _, name, _ in tidy[:4]] == ['adaptive:bias', 'adaptive:codec', 'adaptive:fft', 'adaptive:dsp']
    assert tidy[-1] == (4.0, 'adaptive:dsp', 6.0)


def test_wide_round_trip():
    result = _result([_point(1.0, 'fixed', 1.0), _point(1.0, 'adaptive', 0.5)])
    wide = wide_rows(result)
    assert to_wide(to_tidy(wide)) == wide


def test_to_wide_validation():
    with pytest.raises(ValueError, match='unknown power element'):
        to_wide([(1.0, 'adaptive:laser', 1.0)])
    with pytest.raises(ValueError, match='lacks'):
        to_wide([(1.0, 'adaptive:bias', 1.0)])


def test_emit_plotdata(tmp_path):
    filename = tmp_path / 'plotdata.csv'
    emit_plotdata(_result([_point(1.0, 'adaptive', 1.0)]), str(filename))
    lines = filename.read_text().splitlines()
    assert lines[0] == ','.join(PLOT_COLUMNS)
    assert lines[1] == '1.0,adaptive:bias,36.0'
    assert len(lines) == 5

    empty = tmp_path / 'empty.csv'
    emit_plotdata(_result([]), str(empty))
    assert empty.read_text() == 'sweep_value,series,watts\n'


def test_sweep_rows_normalized():
    result = _result([
        _point(1.0, 'fixed', 1.0), _point(1.0, 'adaptive', 0.5),
        _point(2.0, 'fixed', 2.0), _point(2.0, 'adaptive', 1.0, feasible=False),
    ])
    rows = result.rows()
    assert len(rows[0]) == len(SWEEP_COLUMNS)
    normalized = [row[SWEEP_COLUMNS.index('normalized')] for row in rows]
    assert normalized[:3] == [1.0, 1.0, 2.0]
    assert np.isnan(normalized[3])
    assert result.any_infeasible


def test_sweep_files(tmp_path):
    result = SweepResult('plots', None, [_point(None, 'adaptive', 1.0)])
    paths = result.write(str(tmp_path))
    assert [p.split('/')[-1] for p in paths] == ['sweep.csv', 'timing.csv', 'plotdata.csv']
    sweep = (tmp_path / 'sweep.csv').read_text().splitlines()
    assert sweep[0] == ','.join(SWEEP_COLUMNS)
    assert sweep[1].startswith(',adaptive,49.0,1.0,36.0')
    assert sweep[1].endswith(',true,false,3')
    assert (tmp_path / 'timing.csv').read_text().splitlines()[1] == ',adaptive,0.5'
