import pytest
from fmf_tcs.utils.parameters import check_parameter, Options


def test_check_parameter():
    check_parameter(1.0, 'x', types=(int, float), lower=0.0)
    check_parameter('strong', 'coupling', values=('strong', 'weak'))
    check_parameter(None, 'k', types=int, allow_none=True)
    with pytest.raises(TypeError):
        check_parameter('1', 'x', types=(int, float))
    with pytest.raises(TypeError):
        check_parameter(True, 'x', types=(int, float))
    with pytest.raises(ValueError):
        check_parameter(-1, 'x', types=int, lower=0)
    with pytest.raises(ValueError):
        check_parameter('medium', 'coupling', values=('strong', 'weak'))


def test_options():
    opts = Options('solver')
    opts.declare('tolerance', 1e-8, types=float, lower=0.0)
    opts.declare('print_status', False, types=bool)
    opts.declare('max_epochs', None, types=int, lower=1)
    assert opts['tolerance'] == 1e-8
    assert opts['max_epochs'] is None
    opts.update({'max_epochs': 3})
    assert opts['max_epochs'] == 3
    other = opts.copy(tolerance=1e-6)
    assert other['tolerance'] == 1e-6 and opts['tolerance'] == 1e-8
    with pytest.raises(KeyError):
        opts['unknown'] = 1
    with pytest.raises(ValueError):
        opts['tolerance'] = -1.0
    with pytest.raises(ValueError):
        opts['print_status'] = 'yes'
