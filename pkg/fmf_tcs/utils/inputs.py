import os
import numpy as np
import yaml

LOG10_E = np.log10(np.e)

def get_type_string(obj)-> str:
    return f'\'{type(obj).__name__}\''

def load_document(source, name:str = 'document') -> dict:
    """
    Returns the mapping behind a structured-text input.

    ``source`` may be a dict (used as is), a path to a YAML file, or YAML text.
    """
    if isinstance(source, dict):
        return source
    if isinstance(source, os.PathLike):
        source = os.fspath(source)
    if not isinstance(source, str):
        raise TypeError(f"{name} must be a dict, a path or YAML text. Type {get_type_string(source)} given")
    if '\n' not in source and os.path.isfile(source):
        with open(source, 'r') as f:
            document = yaml.safe_load(f)
    else:
        document = yaml.safe_load(source)
    if not isinstance(document, dict):
        raise ValueError(f"{name} must hold a mapping at the top level, got {get_type_string(document)}")
    return document

def save_document(document:dict, filename:str):
    with open(filename, 'w') as f:
        yaml.safe_dump(document, f, sort_keys=False)

def id_key(identifier):
    """
    Sort key that orders integer ids numerically before string ids.
    """
    if isinstance(identifier, (int, np.integer)) and not isinstance(identifier, bool):
        return (0, int(identifier), '')
    return (1, 0, str(identifier))

def scalarize(value) -> float:
    if isinstance(value, np.ndarray):
        if value.size == 1:
            return float(value.reshape(-1)[0])
        raise ValueError(f"Value must be a scalar. {value.shape} given")
    if not isinstance(value, (float, int, np.integer, np.floating)) or isinstance(value, bool):
        raise ValueError(f"Value must be a scalar. {value} given")
    return float(value)

# unit conversions at the file boundary
def km_to_m(value): return value*1e3
def m_to_km(value): return value*1e-3
def gbps_to_bps(value): return value*1e9
def bps_to_gbps(value): return value*1e-9
def ghz_to_hz(value): return value*1e9
def hz_to_ghz(value): return value*1e-9
def thz_to_hz(value): return value*1e12
def mw_to_w(value): return value*1e-3
def w_to_mw(value): return value*1e3

def db_per_km_to_per_m(value):
    """
    Attenuation in dB/km to a power attenuation coefficient in 1/m.
    """
    return value/(10.0*LOG10_E)/1000.0

def linear_to_db(value):
    return 10.0*np.log10(value)

def db_to_linear(value):
    return 10.0**(np.asarray(value)/10.0)
