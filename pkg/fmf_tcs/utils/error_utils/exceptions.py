
class TopologyError(ValueError):
    def __init__(
            self,
            message: str,
            diagnostics: list[str] = None):
        '''Invalid topology, traffic or routing document'''
        self.message = message
        self.diagnostics = list(diagnostics) if diagnostics else []
        if self.diagnostics:
            message = message + '\n' + '\n'.join(f'    - {d}' for d in self.diagnostics)
        super().__init__(message)


class RoutingError(ValueError):
    def __init__(
            self,
            message: str,
            request_id=None):
        '''No route can be found for a request'''
        self.message = message
        self.request_id = request_id
        super().__init__(self.message)


class InfeasibleProgramError(ValueError):
    def __init__(
            self,
            message: str,
            violated: list[tuple[str, float]] = None):
        '''No strictly feasible point exists (or none was found)'''
        from .error_utils import get_violation_string
        self.message = message
        self.violated = list(violated) if violated else []
        if self.violated:
            message = message + '\n' + get_violation_string(self.violated)
        super().__init__(message)


class RoundingError(ValueError):
    def __init__(
            self,
            message: str,
            binding: str = None,
            variable: str = None):
        '''Every rounding fallback left the program infeasible'''
        self.message = message
        self.binding = binding
        self.variable = variable
        super().__init__(self.message)


class EnumerationCapError(ValueError):
    def __init__(
            self,
            message: str,
            estimate: float = None):
        '''Brute-force enumeration is larger than the configured cap'''
        self.message = message
        self.estimate = estimate
        super().__init__(self.message)


class ScenarioError(ValueError):
    def __init__(
            self,
            message: str,
            field: str = None):
        '''Invalid experiment scenario document'''
        self.message = message
        self.field = field
        super().__init__(self.message)
