from .program import ConvexProgram
from .layout import VariableLayout, BLOCKS, LN2
from .instance import DiscreteSets, ProblemInstance, build_instance, default_penalty_K
