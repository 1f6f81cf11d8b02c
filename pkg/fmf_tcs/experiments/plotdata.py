from fmf_tcs.src.solvers.report import ELEMENTS
from fmf_tcs.utils.printing import write_csv

PLOT_COLUMNS = ['sweep_value', 'series', 'watts']
WIDE_KEYS = ['sweep_value', 'series'] + [f'{key}_W' for key in ELEMENTS]


def to_tidy(wide_rows:list[dict]) -> list[tuple]:
    """
    Long format of per-element power rows: one (sweep_value, 'series:element', watts)
    per element, elements in the order bias, codec, fft, dsp.
    """
    tidy = []
    for row in wide_rows:
        for key in ELEMENTS:
            tidy.append((row['sweep_value'], f"{row['series']}:{key}", row[f'{key}_W']))
    return tidy


def to_wide(tidy_rows:list[tuple]) -> list[dict]:
    """Inverse of to_tidy; groups keep their first appearance order."""
    wide = {}
    for sweep_value, name, watts in tidy_rows:
        series, key = name.rsplit(':', 1)
        if key not in ELEMENTS:
            raise ValueError(f"unknown power element '{key}' in series '{name}'")
        row = wide.setdefault((sweep_value, series), {'sweep_value': sweep_value, 'series': series})
        row[f'{key}_W'] = watts
    for row in wide.values():
        missing = [key for key in WIDE_KEYS if key not in row]
        if missing:
            raise ValueError(f"series '{row['series']}' at {row['sweep_value']!r} lacks {', '.join(missing)}")
    return list(wide.values())


def wide_rows(result) -> list[dict]:
    """Per-element power rows of a SweepResult."""
    rows = []
    for row in result.rows():
        entry = dict(zip(['sweep_value', 'series', 'total_W', 'normalized'], row[:4]))
        entry.update({f'{key}_W': value for key, value in zip(ELEMENTS, row[4:4 + len(ELEMENTS)])})
        rows.append({key: entry[key] for key in WIDE_KEYS})
    return rows


def emit_plotdata(result, filename:str):
    """Tidy sweep_value,series,watts CSV of a SweepResult; header only for an empty sweep."""
    write_csv(filename, PLOT_COLUMNS, [list(row) for row in to_tidy(wide_rows(result))])
