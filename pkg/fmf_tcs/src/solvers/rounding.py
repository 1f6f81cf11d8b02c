from dataclasses import dataclass
import time
import numpy as np

from fmf_tcs.src.program.program import ConvexProgram
from fmf_tcs.src.program.builder import IntegerVariable, decode_point
from fmf_tcs.src.phy.transponder import capacity_values, power_breakdown, transponder_power
from fmf_tcs.src.solvers.options import SolverOptions
from fmf_tcs.src.solvers.continuous import ContinuousSolution, solve_continuous, is_feasible
from fmf_tcs.src.solvers.feasibility import feasibility_check
from fmf_tcs.src.solvers.report import RoundingStep, SolveReport, make_report
from fmf_tcs.utils.error_utils import InfeasibleProgramError, RoundingError


@dataclass(frozen=True)
class _Candidate:
    var: IntegerVariable
    relaxed: float
    pos: int
    distance: float
    score: float

    @property
    def value(self):
        return self.var.values[self.pos]

    @property
    def reason(self) -> str:
        return 'accepted' if self.score <= 1.0 else 'forced'

    def key(self):
        return (self.score, self.distance, self.var.index)


class IterativeRounding(object):
    def __init__(self, prog:ConvexProgram, inst, opts:SolverOptions = None):
        """
        Relax, round the integer decisions that are close enough, fix them and
        solve again until every integer decision is fixed.

        Parameters
        ----------
        prog : ConvexProgram
            program from build_program(inst)
        inst : ProblemInstance
        opts : SolverOptions, optional
        """
        self.prog = prog
        self.inst = inst
        self.opts = opts if opts is not None else SolverOptions()
        self.integer = prog.metadata['integer']
        self.by_request = {(v.q, v.kind): v for v in self.integer}
        self.max_epochs = self.opts['max_epochs'] or len(self.integer)

        self.current = prog
        self.fixed = {}
        self.trace = []
        self.epoch = 0
        self.solution = None

    # ------------------------------------------------------------------ helpers
    def _precision(self, var:IntegerVariable) -> float:
        return self.opts['int_precision'] if var.kind in ('b', 'm') else self.opts['grid_precision']

    def _candidate(self, var:IntegerVariable, x:np.ndarray) -> _Candidate:
        relaxed = var.natural(x[var.index])
        pos, distance = var.nearest(relaxed)
        precision = self._precision(var)
        if precision > 0.0:
            score = distance/precision
        else:
            score = 0.0 if distance <= 1e-12 else np.inf
        return _Candidate(var, relaxed, pos, distance, score)

    def _with(self, assignments:dict) -> ConvexProgram:
        """Current program with {IntegerVariable: natural value} fixed as well."""
        return self.current.fix({var.index: var.encode(value) for var, value in assignments.items()})

    def _solve(self, prog:ConvexProgram) -> ContinuousSolution:
        return solve_continuous(prog, self.opts, x0=self.solution.x_interior)

    def _commit(self, prog:ConvexProgram, solution, steps:list[tuple]):
        for var, relaxed, value, reason in steps:
            self.fixed[var.index] = value
            self.trace.append(RoundingStep(var.name, float(relaxed), float(value), self.epoch, reason))
        self.current = prog
        if solution is not None:
            self.solution = solution

    def _status(self, message:str):
        if self.opts['print_status']:
            print(message)

    # ------------------------------------------------------------------ epochs
    def _fix_epoch(self, chosen:list[_Candidate]):
        if len(chosen) > 1:
            trial = self._with({cand.var: cand.value for cand in chosen})
            try:
                solution = self._solve(trial)
            except InfeasibleProgramError:
                closest = min(chosen, key=_Candidate.key)
                self._status(f'    epoch {self.epoch}: fixing {len(chosen)} variables failed, fixing {closest.var.name} alone')
                chosen = [closest]
            else:
                self._commit(trial, solution, [(c.var, c.relaxed, c.value, c.reason) for c in chosen])
                return

        cand = chosen[0]
        trial = self._with({cand.var: cand.value})
        try:
            solution = self._solve(trial)
        except InfeasibleProgramError as error:
            self._fallback(cand, error)
        else:
            self._commit(trial, solution, [(cand.var, cand.relaxed, cand.value, cand.reason)])

    def _fallback(self, cand:_Candidate, error:InfeasibleProgramError):
        """
        Conservative neighbours of the rounded value: b and m up, c and r down,
        then a single step the other way.
        """
        var = cand.var
        direction = 1 if var.kind in ('b', 'm') else -1
        positions = [cand.pos + direction*step for step in range(1, self.opts['max_fallback_steps'] + 1)]
        positions.append(cand.pos - direction)
        for pos in positions:
            if not 0 <= pos < len(var.values):
                continue
            trial = self._with({var: var.values[pos]})
            try:
                solution = self._solve(trial)
            except InfeasibleProgramError as next_error:
                error = next_error
                continue
            self._status(f'    epoch {self.epoch}: {var.name} = {cand.value} infeasible, fixed to {var.values[pos]}')
            self._commit(trial, solution, [(var, cand.relaxed, var.values[pos], 'fallback')])
            return
        binding = error.violated[0][0] if error.violated else None
        raise RoundingError(
            f'every value tried for {var.name} leaves the program infeasible (binding constraint: {binding})',
            binding=binding, variable=var.name)

    def _epochs(self):
        while len(self.fixed) < len(self.integer):
            self.epoch += 1
            x = self.solution.x
            candidates = [self._candidate(var, x) for var in self.integer if var.index not in self.fixed]
            within = [cand for cand in candidates if cand.score <= 1.0]
            if self.epoch >= self.max_epochs:
                chosen = candidates
            elif within:
                chosen = within
            else:
                chosen = [min(candidates, key=_Candidate.key)]
            self._status(f'    epoch {self.epoch}: rounding {", ".join(c.var.name for c in chosen)}')
            self._fix_epoch(chosen)

    # ------------------------------------------------------------------ after rounding
    def _carrying_pairs(self, q:int, b:int, m:int, r_min:float = 0.0):
        """
        (c, r) pairs carrying the rate of request q at (b, m): coding rates
        from the highest down to r_min, each with its smallest modulation level.
        """
        inst = self.inst
        vc = self.by_request[(q, 'c')]
        vr = self.by_request[(q, 'r')]
        c_grid = np.asarray(vc.values, dtype=float)
        for r in sorted(vr.values, reverse=True):
            if r < r_min:
                break
            capacity = capacity_values(c_grid, b, r, m, inst.routing.span_N[q], inst.coupling, inst.constants)
            carrying = np.flatnonzero(capacity >= inst.rates[q]*(1.0 + 1e-9))
            if carrying.size:
                yield vc.values[carrying[0]], r

    def _try(self, assignments:dict, warm:np.ndarray, reason:str):
        """Fixes {IntegerVariable: value} if the program stays feasible; returns the new warm start or None."""
        trial = self._with(assignments)
        x = is_feasible(trial, warm, self.opts)
        if x is None:
            return None
        steps = [(var, self.fixed[var.index], value, reason)
                 for var, value in assignments.items() if value != self.fixed[var.index]]
        self._commit(trial, None, steps)
        return x

    def _power(self, b:int, m:int, r:float) -> float:
        return float(sum(power_breakdown(m, b, r, self.inst.constants).values()))

    def _polish(self, warm:np.ndarray) -> np.ndarray:
        """
        Lowers b, then m, of every request while the program stays feasible and
        the power drops, choosing (c, r) anew for the smaller configuration.
        """
        changed = True
        while changed:
            changed = False
            for q in range(self.inst.n):
                vb = self.by_request[(q, 'b')]
                vm = self.by_request[(q, 'm')]
                vr = self.by_request[(q, 'r')]
                for var in (vb, vm):
                    pos = var.values.index(self.fixed[var.index])
                    if pos == 0:
                        continue
                    lower = var.values[pos - 1]
                    b = lower if var is vb else self.fixed[vb.index]
                    m = lower if var is vm else self.fixed[vm.index]
                    now = self._power(self.fixed[vb.index], self.fixed[vm.index], self.fixed[vr.index])
                    for c, r in self._carrying_pairs(q, b, m):
                        if self._power(b, m, r) >= now:
                            break
                        x = self._try({var: lower, self.by_request[(q, 'c')]: c, vr: r}, warm, 'polish')
                        if x is not None:
                            warm = x
                            changed = True
                            break
        return warm

    def _snap_pairs(self, warm:np.ndarray) -> np.ndarray:
        """
        Jointly moves (c, r) of every request to the highest coding rate, with
        the smallest modulation level still carrying the demanded rate.
        """
        for q in range(self.inst.n):
            vc = self.by_request[(q, 'c')]
            vr = self.by_request[(q, 'r')]
            c_now = self.fixed[vc.index]
            r_now = self.fixed[vr.index]
            b = self.fixed[self.by_request[(q, 'b')].index]
            m = self.fixed[self.by_request[(q, 'm')].index]
            for c, r in self._carrying_pairs(q, b, m, r_min=r_now):
                if c == c_now and r == r_now:
                    break
                x = self._try({vc: c, vr: r}, warm, 'snap')
                if x is not None:
                    warm = x
                    break
        return warm

    # ------------------------------------------------------------------ driver
    def run(self, relaxed:ContinuousSolution = None, incumbent:list = None) -> SolveReport:
        start = time.perf_counter()
        if relaxed is None:
            relaxed = solve_continuous(self.prog, self.opts, inst=self.inst)
        self.solution = relaxed

        self._epochs()
        warm = self._snap_pairs(self.solution.x_interior)
        if self.opts['polish']:
            warm = self._snap_pairs(self._polish(warm))

        final = solve_continuous(self.current, self.opts, x0=warm)
        configs = decode_point(self.current, self.inst, final.x, snap=True)
        layout = self.current.metadata['layout']
        distances = {(q, i): float(np.exp(final.x[layout.d(q, i)])) for q, i in layout.pairs}
        check = feasibility_check(configs, self.inst, distances)

        if not check.passed:
            binding = check.worst[0]
            self._status(f'rounding: final configuration violates {", ".join(check.violated)}')
            raise RoundingError(
                f'the rounded configuration violates {", ".join(check.violated)} (binding constraint: {binding})',
                binding=binding)

        status = f'rounding: {len(self.integer)} integer variables fixed in {self.epoch} epochs.'
        self._status(status)
        report = make_report(
            configs, self.inst, check,
            kkt_residual=final.kkt_residual,
            relaxed_objective=relaxed.objective,
            rounding_trace=list(self.trace),
            epochs=self.epoch,
            wall_time=time.perf_counter() - start,
            status=status,
        )
        return adopt_incumbent(report, incumbent, self.inst)


def round_and_fix(
        prog:ConvexProgram,
        inst,
        opts:SolverOptions = None,
        relaxed:ContinuousSolution = None,
        incumbent:list = None,
    ) -> SolveReport:
    """
    Integer transponder configurations by iterative rounding of the continuous relaxation.

    Each epoch accepts every relaxed integer within int_precision (b, m) or
    relative grid_precision (c, r) of an admissible value; if none qualifies
    the closest one is fixed. Every epoch fixes at least one variable, so the
    loop ends within the number of integer variables.

    Parameters
    ----------
    prog : ConvexProgram
    inst : ProblemInstance
    opts : SolverOptions, optional
    relaxed : ContinuousSolution, optional
        solution of the relaxation if already computed
    incumbent : list[TransponderConfig], optional
        returned instead when feasible and cheaper

    Raises
    ------
    RoundingError
        when every fallback value of a variable is infeasible, or the final
        integer configuration fails feasibility_check
    InfeasibleProgramError
        when the relaxation itself is infeasible
    """
    return IterativeRounding(prog, inst, opts).run(relaxed=relaxed, incumbent=incumbent)


def adopt_incumbent(report:SolveReport, incumbent:list, inst) -> SolveReport:
    """
    The incumbent configurations as a report if they are feasible on inst and
    use less power than report (or report is None); report otherwise.
    """
    if incumbent is None or len(incumbent) != inst.n:
        return report
    incumbent = list(incumbent)
    check = feasibility_check(incumbent, inst)
    if not check.passed:
        return report
    power = sum(transponder_power(cfg, inst.constants) for cfg in incumbent)
    if report is not None and power >= report.objective_power_W:
        return report
    info = {}
    if report is not None:
        info = {
            'kkt_residual': report.kkt_residual,
            'relaxed_objective': report.relaxed_objective,
            'rounding_trace': report.rounding_trace,
            'epochs': report.epochs,
            'wall_time': report.wall_time,
        }
    return make_report(incumbent, inst, check, incumbent_used=True,
                       status='incumbent configuration kept', **info)
