import numpy as np

CONFIG_FIELDS = ('c', 'b', 'r', 'p', 'm', 'omega')
LIST_FIELDS = ('per_request_power', 'osnr', 'threshold')
SCALAR_FIELDS = ('objective_power_W', 'penalty_value', 'kkt_residual', 'wall_time')


def export_report(report, filename:str) -> str:
    """Save a SolveReport to an HDF5 file.

    Parameters
    ----------
    report : SolveReport
    filename : str
        The name of the HDF5 file; '.hdf5' is appended when missing.

    Returns
    -------
    str
        The name of the file written.
    """
    import h5py

    if not filename.endswith('.hdf5'):
        filename = f'{filename}.hdf5'
    strings = h5py.string_dtype()
    with h5py.File(filename, 'w') as f:
        f.attrs['power_mode'] = report.power_mode
        f.attrs['coupling'] = report.coupling
        f.attrs['status'] = report.status
        f.attrs['feasible'] = bool(report.feasible)
        f.attrs['incumbent_used'] = bool(report.incumbent_used)
        f.attrs['epochs'] = int(report.epochs)
        for key in SCALAR_FIELDS:
            f.attrs[key] = float(getattr(report, key))
        if report.relaxed_objective is not None:
            f.attrs['relaxed_objective'] = float(report.relaxed_objective)

        ids = list(report.request_ids)
        int_ids = all(isinstance(rid, (int, np.integer)) and not isinstance(rid, bool) for rid in ids)
        configs = f.create_group('configs')
        dset = configs.create_dataset('request_id', data=np.array([str(rid) for rid in ids], dtype=object), dtype=strings)
        dset.attrs['integer'] = int_ids
        for key in CONFIG_FIELDS:
            configs.create_dataset(key, data=np.array([getattr(cfg, key) for cfg in report.configs], dtype=float))
        for key in LIST_FIELDS:
            configs.create_dataset(key, data=np.asarray(getattr(report, key), dtype=float))

        breakdown = f.create_group('breakdown')
        for key, value in report.breakdown.items():
            breakdown.attrs[key] = float(value)

        residuals = f.create_group('residuals')
        names = sorted(report.residuals)
        residuals.create_dataset('name', data=np.array(names, dtype=object), dtype=strings)
        residuals.create_dataset('value', data=np.array([report.residuals[name] for name in names], dtype=float))

        trace = f.create_group('rounding_trace')
        steps = report.rounding_trace
        trace.create_dataset('variable', data=np.array([s.variable for s in steps], dtype=object), dtype=strings)
        trace.create_dataset('reason', data=np.array([s.reason for s in steps], dtype=object), dtype=strings)
        trace.create_dataset('relaxed', data=np.array([s.relaxed for s in steps], dtype=float))
        trace.create_dataset('fixed', data=np.array([s.fixed for s in steps], dtype=float))
        trace.create_dataset('epoch', data=np.array([s.epoch for s in steps], dtype=int))
    return filename


def _strings(dataset) -> list[str]:
    return [value.decode() if isinstance(value, bytes) else str(value) for value in dataset[...]]


def import_report(filename:str):
    """
    Load a SolveReport written by export_report.

    Raises
    ------
    FileNotFoundError
        If the specified file does not exist.
    KeyError
        If a group is missing from the file.
    """
    import h5py
    from fmf_tcs.src.phy.transponder import TransponderConfig
    from fmf_tcs.src.solvers.report import SolveReport, RoundingStep

    with h5py.File(filename, 'r') as f:
        configs = f['configs']
        ids = _strings(configs['request_id'])
        if configs['request_id'].attrs['integer']:
            ids = [int(rid) for rid in ids]
        fields = {key: configs[key][...] for key in CONFIG_FIELDS}
        config_list = [
            TransponderConfig(
                c=float(fields['c'][q]), b=int(fields['b'][q]), r=float(fields['r'][q]),
                p=float(fields['p'][q]), m=int(fields['m'][q]), omega=float(fields['omega'][q]))
            for q in range(len(ids))
        ]
        trace = f['rounding_trace']
        steps = [
            RoundingStep(variable, float(relaxed), float(fixed), int(epoch), reason)
            for variable, reason, relaxed, fixed, epoch in zip(
                _strings(trace['variable']), _strings(trace['reason']),
                trace['relaxed'][...], trace['fixed'][...], trace['epoch'][...])
        ]
        residuals = dict(zip(_strings(f['residuals']['name']), (float(v) for v in f['residuals']['value'][...])))
        attrs = f.attrs
        return SolveReport(
            configs=config_list,
            request_ids=tuple(ids),
            power_mode=str(attrs['power_mode']),
            coupling=str(attrs['coupling']),
            objective_power_W=float(attrs['objective_power_W']),
            penalty_value=float(attrs['penalty_value']),
            breakdown={key: float(value) for key, value in f['breakdown'].attrs.items()},
            per_request_power=[float(v) for v in configs['per_request_power'][...]],
            osnr=[float(v) for v in configs['osnr'][...]],
            threshold=[float(v) for v in configs['threshold'][...]],
            residuals=residuals,
            feasible=bool(attrs['feasible']),
            kkt_residual=float(attrs['kkt_residual']),
            relaxed_objective=float(attrs['relaxed_objective']) if 'relaxed_objective' in attrs else None,
            rounding_trace=steps,
            epochs=int(attrs['epochs']),
            wall_time=float(attrs['wall_time']),
            incumbent_used=bool(attrs['incumbent_used']),
            status=str(attrs['status']),
        )
