from .paths import k_shortest_paths, build_graph
from .ros import RosConfig, route, order, solve_ros, save_ros, load_ros
