from .error_utils import get_violation_string, check_keys
from .exceptions import (
    TopologyError,
    RoutingError,
    InfeasibleProgramError,
    RoundingError,
    EnumerationCapError,
    ScenarioError,
)
