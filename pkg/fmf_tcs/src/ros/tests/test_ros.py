from fmf_tcs.src.network import load_topology, bundled_topology, Request
from fmf_tcs.src.ros import RosConfig, route, order, solve_ros, save_ros, load_ros, k_shortest_paths
from fmf_tcs.utils.error_utils import RoutingError
import pytest


def _square():
    links = []
    for a, b in [('A', 'B'), ('B', 'C'), ('A', 'D'), ('D', 'C')]:
        links.append({'id': f'{a}{b}', 'src': a, 'dst': b, 'length_km': 100})
    return load_topology({'nodes': ['A', 'B', 'C', 'D'], 'links': links, 'modes': 3, 'bandwidth_ghz': 2000})


def test_single_request_two_nodes():
    topo = load_topology({'nodes': [1, 2], 'links': [{'id': 'a', 'src': 1, 'dst': 2, 'length_km': 80}],
                          'modes': 1, 'bandwidth_ghz': 100})
    routes = route(topo, [Request(1, 1, 2, 1e11)], RosConfig(k_paths=3))
    assert routes == {1: ('a',)}


def test_load_balancing():
    topo = _square()
    requests = [Request(1, 'A', 'C', 1e11), Request(2, 'A', 'C', 1e11)]
    routes = route(topo, requests, RosConfig(k_paths=2))
    assert {routes[1], routes[2]} == {('AB', 'BC'), ('AD', 'DC')}

    shortest_only = route(topo, requests, RosConfig(k_paths=1))
    assert shortest_only[1] == shortest_only[2]


def test_k_shortest_paths_ring():
    ring = bundled_topology('ring6')
    paths = k_shortest_paths(ring, 1, 4, 3)
    assert len(paths) == 2
    lengths = [sum(ring.link(link_id).length for link_id in path) for path in paths]
    assert lengths == sorted(lengths)
    assert set(paths) == {('1-2', '2-3', '3-4'), ('1-6', '6-5', '5-4')}
    assert k_shortest_paths(ring, 1, 2, 1) == [('1-2',)]


def test_k_shortest_paths_parallel_links():
    links = [
        {'id': 'long', 'src': 1, 'dst': 2, 'length_km': 120},
        {'id': 'short', 'src': 1, 'dst': 2, 'length_km': 80},
        {'id': 'twin', 'src': 1, 'dst': 2, 'length_km': 80},
        {'id': 'b', 'src': 2, 'dst': 3, 'length_km': 50},
    ]
    topo = load_topology({'nodes': [1, 2, 3], 'links': links, 'modes': 1, 'bandwidth_ghz': 100})
    assert k_shortest_paths(topo, 1, 2, 5) == [('short',), ('twin',), ('long',)]
    assert k_shortest_paths(topo, 1, 2, 1) == [('short',)]
    assert k_shortest_paths(topo, 1, 3, 2) == [('short', 'b'), ('twin', 'b')]
    assert k_shortest_paths(topo, 3, 1, 2) == []
    with pytest.raises(ValueError):
        k_shortest_paths(topo, 1, 2, 0)


def test_unreachable():
    topo = load_topology({'nodes': [1, 2, 3], 'links': [{'id': 'a', 'src': 1, 'dst': 2, 'length_km': 80}],
                          'modes': 1, 'bandwidth_ghz': 100})
    with pytest.raises(RoutingError):
        route(topo, [Request(1, 2, 3, 1e11)])


def test_ordering_rules():
    topo = _square()
    requests = [Request(1, 'A', 'B', 100e9), Request(2, 'A', 'B', 400e9), Request(3, 'A', 'B', 200e9)]
    routes = route(topo, requests, RosConfig(k_paths=1))
    link_order, global_order = order(topo, routes, requests, RosConfig(ordering_rule='by-demand-desc'))
    assert global_order == (2, 3, 1)
    assert link_order['AB'] == (2, 3, 1)
    _, global_order = order(topo, routes, requests, RosConfig(ordering_rule='by-id'))
    assert global_order == (1, 2, 3)

    requests = [Request(1, 'A', 'B', 1e11), Request(2, 'A', 'C', 1e11), Request(3, 'B', 'C', 1e11)]
    routes = route(topo, requests, RosConfig(k_paths=1))
    link_order, global_order = order(topo, routes, requests, RosConfig(ordering_rule='by-path-length'))
    assert global_order[0] == 2
    for link_id, ids in link_order.items():
        assert all(link_id in routes[rid] for rid in ids)
        positions = [global_order.index(rid) for rid in ids]
        assert positions == sorted(positions)


def test_solve_ros_deterministic_and_serializable(tmp_path):
    ring = bundled_topology('ring6')
    from fmf_tcs.src.network import uniform_traffic
    requests = uniform_traffic(ring, 2.0)
    first = solve_ros(ring, requests)
    second = solve_ros(ring, requests)
    assert first.route == second.route and first.global_order == second.global_order

    filename = str(tmp_path / 'ros.yaml')
    save_ros(first, filename)
    loaded = load_ros(filename, ring, requests)
    assert loaded.route == first.route
    assert loaded.global_order == first.global_order
    assert (loaded.shared_spans == first.shared_spans).all()


def test_config_validation():
    with pytest.raises(ValueError):
        RosConfig(k_paths=0)
    with pytest.raises(ValueError):
        RosConfig(ordering_rule='random')
