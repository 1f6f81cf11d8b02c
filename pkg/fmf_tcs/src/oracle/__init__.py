from .grid import GridSpec
from .brute_force import brute_force_tcs, BruteForceTCS, OracleResult, write_ranked_csv
from .numerics import finite_diff_check, convexity_sample, sample_points
