from .objective import add_power_objective, add_distance_penalty
from .qos import add_qos_constraints
from .nonoverlap import add_nonoverlap_constraints
from .spectrum import add_spectrum_constraints
from .rate import add_rate_constraints
from .threshold_aux import add_threshold_aux_constraints
from .distance import add_distance_constraints
