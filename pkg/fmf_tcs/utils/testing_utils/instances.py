"""
Small instances for unit tests.
"""

def _bidirectional(a, b, length_km):
    return [
        {'id': f'{a}-{b}', 'src': a, 'dst': b, 'length_km': length_km},
        {'id': f'{b}-{a}', 'src': b, 'dst': a, 'length_km': length_km},
    ]


def line_topology(n_nodes:int = 3, length_km:float = 400.0, modes:int = 3, bandwidth_ghz:float = 2000.0, constants = None):
    """Nodes 1..n_nodes on a line, both directions per hop."""
    from fmf_tcs.src.network.topology import load_topology
    links = []
    for a in range(1, n_nodes):
        links += _bidirectional(a, a + 1, length_km)
    return load_topology({
        'nodes': list(range(1, n_nodes + 1)),
        'links': links,
        'modes': modes,
        'bandwidth_ghz': bandwidth_ghz,
    }, constants)


def ring_topology(n_nodes:int = 4, length_km:float = 400.0, modes:int = 3, bandwidth_ghz:float = 2000.0, constants = None):
    from fmf_tcs.src.network.topology import load_topology
    links = []
    for a in range(1, n_nodes + 1):
        links += _bidirectional(a, a % n_nodes + 1, length_km)
    return load_topology({
        'nodes': list(range(1, n_nodes + 1)),
        'links': links,
        'modes': modes,
        'bandwidth_ghz': bandwidth_ghz,
    }, constants)


def make_instance(
        requests = ((1, 3, 100.0),),
        topology = None,
        global_order = None,
        constants = None,
        coupling = 'strong',
        discrete = None,
        penalty_K:float = None,
        power_bounds:tuple = (1e-6, 1.0),
        **topology_kwargs,
    ):
    """
    Builds a ProblemInstance from (src, dst, rate_gbps) triples; request ids are 1..n.

    The topology defaults to line_topology(**topology_kwargs). Routes come from
    the ROS heuristic; global_order overrides its spectral order.
    """
    from fmf_tcs.src.network.topology import Request
    from fmf_tcs.src.network.routing import build_routing
    from fmf_tcs.src.ros.ros import solve_ros
    from fmf_tcs.src.program.instance import build_instance

    if topology is None:
        topology = line_topology(constants=constants, **topology_kwargs)
    reqs = [Request(i + 1, src, dst, rate*1e9) for i, (src, dst, rate) in enumerate(requests)]
    routing = solve_ros(topology, reqs)
    if global_order is not None:
        routing = build_routing(topology, reqs, routing.route, global_order=global_order)
    return build_instance(
        topology, reqs, routing,
        constants=constants,
        coupling=coupling,
        discrete=discrete,
        penalty_K=penalty_K,
        power_bounds=power_bounds,
    )


def make_program(*args, **kwargs):
    """make_instance followed by build_program; returns (instance, program)."""
    from fmf_tcs.src.program.builder import build_program
    inst = make_instance(*args, **kwargs)
    return inst, build_program(inst)


def line_document(n_nodes:int = 3, length_km:float = 400.0, modes:int = 3, bandwidth_ghz:float = 2000.0) -> dict:
    """Topology document of line_topology, for inline use in scenarios."""
    links = []
    for a in range(1, n_nodes):
        links += _bidirectional(a, a + 1, length_km)
    return {'nodes': list(range(1, n_nodes + 1)), 'links': links, 'modes': modes, 'bandwidth_ghz': bandwidth_ghz}


def write_scenario(directory, name:str = 'small', **fields) -> str:
    """
    Writes a scenario file on a three-node line with one 100 Gb/s request;
    keyword fields replace the defaults (None removes a field).
    """
    import os
    from fmf_tcs.utils.inputs import save_document
    document = {
        'name': name,
        'topology': line_document(),
        'coupling': 'strong',
        'power_mode': 'adaptive',
        'traffic': {'requests': [{'id': 1, 'src': 1, 'dst': 3, 'rate_gbps': 100.0}]},
        'seed': 0,
    }
    document.update(fields)
    document = {key: value for key, value in document.items() if value is not None}
    path = os.path.join(str(directory), f'{name}.yaml')
    save_document(document, path)
    return path
