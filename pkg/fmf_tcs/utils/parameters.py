from typing import Dict, Any

"""
Parameter checking function and options dictionary.
Adapted from the OpenMDAO OptionsDictionary class.
"""

def check_parameter(
        value,
        name,
        values=None,
        types=None,
        upper=None,
        lower=None,
        check_valid=None,
        allow_none=False,
    ):
    r"""
    Check value and type of value.

    The value of the parameter must satisfy the following:
    1. If values only was given, value must be in values.
    2. If types only was given, value must satisfy isinstance(value, types).
    3. It is an error if both values and types are given.

    Parameters
    ----------
    value : object
        value of the parameter to be checked
    name : str
        Name of the parameter (shown in errors).
    values : set or list or tuple or None
        Optional list of acceptable parameter values.
    types : type or tuple of types or None
        Optional type or list of acceptable parameter types.
    upper : float or None
        Maximum allowable value.
    lower : float or None
        Minimum allowable value.
    check_valid : function or None
        User-supplied function with arguments (name, value) that raises an exception
        if the value is not valid.
    allow_none : bool
        If True, allow None as a value regardless of values or types.
    """
    if values is not None and not isinstance(values, (set, list, tuple)):
        _raise(
            "In check of parameter '%s', the 'values' arg must be of type None,"
            " list, or tuple - not %s." % (name, values),
            exc_type=TypeError)

    if types is not None and not isinstance(types, (type, set, list, tuple)):
        _raise(
            "In check of parameter '%s', the 'types' arg must be None, a type "
            "or a tuple - not %s." % (name, types),
            exc_type=TypeError)

    if types is not None and values is not None:
        _raise("'types' and 'values' were both specified for parameter '%s'." % name)

    meta = {
        'values': values,
        'types': types,
        'upper': upper,
        'lower': lower,
        'check_valid': check_valid,
        'allow_none': allow_none,
    }
    _assert_valid(value, name, meta, 'parameter')


def _assert_valid(value, name, meta, kind, prefix=None):
    """
    Check a value against declared metadata (values, types, lower, upper, check_valid).
    """
    values = meta['values']
    types = meta['types']
    lower = meta['lower']
    upper = meta['upper']

    if not (value is None and meta['allow_none']):
        if values is not None:
            if value not in values:
                if isinstance(value, str):
                    value = "'{}'".format(value)
                _raise(
                    "Value ({}) of {} '{}' is not one of {}.".format(value, kind, name, values),
                    ValueError, prefix)
        elif types is not None:
            # bool is an int subclass, never accept it where numbers are expected
            if not isinstance(value, types) or (isinstance(value, bool) and not _accepts_bool(types)):
                vtype = type(value).__name__
                if isinstance(value, str):
                    value = "'{}'".format(value)
                if isinstance(types, (set, tuple, list)):
                    typs = tuple([type_.__name__ for type_ in types])
                    _raise(
                        "Value ({}) of {} '{}' has type '{}', but one of "
                        "types {} was expected.".format(value, kind, name, vtype, typs),
                        TypeError, prefix)
                else:
                    _raise(
                        "Value ({}) of {} '{}' has type '{}', but type '{}' "
                        "was expected.".format(value, kind, name, vtype, types.__name__),
                        TypeError, prefix)

        if upper is not None and value > upper:
            _raise(
                "Value ({}) of {} '{}' exceeds maximum allowed value of {}.".format(
                    value, kind, name, upper),
                ValueError, prefix)
        if lower is not None and value < lower:
            _raise(
                "Value ({}) of {} '{}' is less than minimum allowed value of {}.".format(
                    value, kind, name, lower),
                ValueError, prefix)

    if meta['check_valid'] is not None:
        meta['check_valid'](name, value)


def _accepts_bool(types):
    if isinstance(types, (set, tuple, list)):
        return bool in types
    return types is bool


def _raise(msg, exc_type=RuntimeError, prefix=None):
    if prefix is not None:
        msg = '{}: {}'.format(prefix, msg)
    raise exc_type(msg)


_UNDEFINED = object()


class Options(object):
    """
    Dictionary with pre-declaration of keys for value-checking and default values.

    Base of SolverOptions (barrier solver and rounding loop).

    Attributes
    ----------
    _dict : dict of dict
        Dictionary of entries. Each entry is a dictionary consisting of value, values,
        types, desc, lower, and upper.
    _parent_name : str or None
        If defined, prepend this name to beginning of all exceptions.
    """
    def __init__(self, parent_name=None):
        self._dict = {}
        self._parent_name = parent_name

    def __repr__(self):
        return repr(self.to_dict())

    def declare(
        self,
        name,
        default=_UNDEFINED,
        values=None,
        types=None,
        desc='',
        upper=None,
        lower=None,
        check_valid=None,
        allow_none=False,
    ):
        """
        Declare an option.

        **Parameters**

        name : str
            Name of the option.
        default : object
            Optional default value, checked against the other arguments.
        values : set or list or tuple or None
            Optional list of acceptable option values.
        types : type or tuple of types or None
            Optional type or list of acceptable option types.
        desc : str
            Optional description of the option.
        upper, lower : float or None
            Allowed range.
        check_valid : function or None
            Function with arguments (name, value) that raises if value is not valid.
        allow_none : bool
            If True, allow None as a value regardless of values or types.
        """
        if types is not None and values is not None:
            _raise("'types' and 'values' were both specified for option '%s'." % name,
                   prefix=self._parent_name)

        if types is bool:
            values = (True, False)
            types = None

        default_provided = default is not _UNDEFINED
        if default_provided and default is None:
            allow_none = True

        self._dict[name] = {
            'val': default,
            'values': values,
            'types': types,
            'desc': desc,
            'upper': upper,
            'lower': lower,
            'check_valid': check_valid,
            'has_been_set': default_provided,
            'allow_none': allow_none,
        }
        if default_provided:
            _assert_valid(default, name, self._dict[name], 'option', self._parent_name)

    def update(self, in_dict: Dict[str, Any]):
        """
        Set every (name, value) in the incoming dictionary. Names must be declared.
        """
        if in_dict is None:
            return
        for name in in_dict:
            self[name] = in_dict[name]

    def to_dict(self) -> Dict[str, Any]:
        return {key: meta['val'] for key, meta in self._dict.items()}

    def copy(self, **changes) -> 'Options':
        new = object.__new__(type(self))
        new._parent_name = self._parent_name
        new._dict = {key: dict(meta) for key, meta in self._dict.items()}
        new.update(changes)
        return new

    def __setitem__(self, name, value):
        try:
            meta = self._dict[name]
        except KeyError:
            _raise("Option '{}' cannot be set because it has not been declared.".format(name),
                   KeyError, self._parent_name)
        _assert_valid(value, name, meta, 'option', self._parent_name)
        meta['val'] = value
        meta['has_been_set'] = True

    def __getitem__(self, name):
        try:
            meta = self._dict[name]
        except KeyError:
            _raise("Option '{}' cannot be found".format(name), KeyError, self._parent_name)
        if not meta['has_been_set']:
            _raise("Option '{}' is required but has not been set.".format(name),
                   prefix=self._parent_name)
        return meta['val']
