import argparse
import logging
import os
import sys

from fmf_tcs.experiments.scenario import load_scenario, POWER_MODES
from fmf_tcs.experiments.sweep import run_sweep, write_manifest
from fmf_tcs.experiments.oracle_compare import compare_oracle, print_comparisons
from fmf_tcs.src.program.builder import build_program
from fmf_tcs.src.solvers import solve, fixed_power_baseline, fixed_power_levels
from fmf_tcs.utils.error_utils import (
    ScenarioError, TopologyError, RoutingError, InfeasibleProgramError, RoundingError, EnumerationCapError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INVALID = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='fmf-tcs',
        description='Transponder configuration selection for few-mode fiber elastic optical networks.')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--scenario', required=True, help='scenario YAML file')
    common.add_argument('--out', default='out', help='output directory (default: out)')
    common.add_argument('--seed', type=int, default=None, help='overrides the scenario seed')
    common.add_argument('--power-mode', choices=POWER_MODES, default=None)
    common.add_argument('--coupling', choices=('strong', 'weak'), default=None)
    common.add_argument('--modes', type=int, default=None, help='mode budget of every fiber')
    common.add_argument('--verbose', action='store_true', help='debug logging')

    commands = parser.add_subparsers(dest='command', required=True)
    solve_cmd = commands.add_parser('solve', parents=[common], help='solve the scenario instance once')
    solve_cmd.add_argument('--hdf5', action='store_true', help='also write report.hdf5')
    solve_cmd.add_argument('--print', dest='print_table', action='store_true', help='print the configurations')
    sweep_cmd = commands.add_parser('sweep', parents=[common], help='run the scenario sweep')
    sweep_cmd.add_argument('--workers', type=int, default=None, help='worker processes (default: scenario workers)')
    commands.add_parser('oracle', parents=[common], help='compare the solver with the brute-force oracle')
    commands.add_parser('validate', parents=[common], help='load the scenario and build its programs')
    return parser


def _configure_logging(verbose:bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )


def _solve(scenario, args) -> int:
    value = scenario.base_value() if scenario.sweep_axis != 'power_mode' else None
    series = scenario.series()
    if scenario.sweep_axis == 'power_mode':
        series = sorted(scenario.sweep_values, key=lambda v: v != 'fixed')
    opts = scenario.solver_options()
    os.makedirs(args.out, exist_ok=True)

    outputs = []
    code = EXIT_OK
    incumbent = None
    for mode in series:
        inst, _ = scenario.instance(value, mode)
        try:
            report = fixed_power_baseline(inst, opts) if mode == 'fixed' else solve(inst, opts, incumbent)
        except (InfeasibleProgramError, RoundingError) as error:
            logger.error('%s power: %s', mode, error)
            code = EXIT_INFEASIBLE
            continue
        if mode == 'fixed':
            incumbent = report.configs
        suffix = '' if len(series) == 1 else f'_{mode}'
        paths = [os.path.join(args.out, f'report{suffix}.yaml'), os.path.join(args.out, f'configs{suffix}.csv')]
        report.write_yaml(paths[0])
        report.write_configs_csv(paths[1])
        if args.hdf5:
            from fmf_tcs.src.data import export_report
            paths.append(export_report(report, os.path.join(args.out, f'report{suffix}.hdf5')))
        outputs += paths
        logger.info('%s power: %.6g W (%s)', mode, report.objective_power_W, report.status)
        if args.print_table:
            report.print_summary()
        if not report.feasible:
            code = EXIT_INFEASIBLE
    write_manifest(scenario, args.out, outputs, 'solve')
    return code


def _sweep(scenario, args) -> int:
    result = run_sweep(scenario, workers=args.workers)
    outputs = result.write(args.out)
    write_manifest(scenario, args.out, outputs, 'sweep')
    if args.verbose:
        result.print_summary()
    if result.any_infeasible:
        logger.warning('%d of %d sweep points infeasible', sum(not p.feasible for p in result.points), len(result.points))
        return EXIT_INFEASIBLE
    return EXIT_OK


def _oracle(scenario, args) -> int:
    comparisons = compare_oracle(scenario, args.out)
    outputs = [os.path.join(args.out, 'oracle_compare.csv')]
    write_manifest(scenario, args.out, outputs, 'oracle')
    if args.verbose:
        print_comparisons(comparisons)
    if any(not (c.solver_feasible and c.oracle_feasible) for c in comparisons):
        return EXIT_INFEASIBLE
    return EXIT_OK


def _validate(scenario, args) -> int:
    values = scenario.sweep_values or (None,)
    code = EXIT_OK
    for value in values:
        for series in scenario.series():
            inst, mode = scenario.instance(value, series)
            if mode == 'fixed':
                inst = inst.with_fixed_power(fixed_power_levels(inst))
            try:
                prog = build_program(inst)
            except InfeasibleProgramError as error:
                logger.error('%s=%s (%s): %s', scenario.sweep_axis, value, mode, error)
                code = EXIT_INFEASIBLE
                continue
            logger.info('%s=%s (%s): %d requests, %d variables, %d constraints',
                        scenario.sweep_axis, value, mode, inst.n, prog.n, prog.m)
    return code


COMMANDS = {'solve': _solve, 'sweep': _sweep, 'oracle': _oracle, 'validate': _validate}


def main(argv:list[str] = None) -> int:
    """
    Entry point of the fmf-tcs command.

    Returns
    -------
    int
        0 on success, 2 when some instance is infeasible, 3 for invalid input
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        scenario = load_scenario(args.scenario).override(
            seed=args.seed, power_mode=args.power_mode, coupling=args.coupling, modes=args.modes)
        return COMMANDS[args.command](scenario, args)
    except (ScenarioError, TopologyError, RoutingError, EnumerationCapError) as error:
        logger.error('%s', error)
        return EXIT_INVALID


if __name__ == '__main__':
    sys.exit(main())
