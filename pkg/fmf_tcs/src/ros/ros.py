from dataclasses import dataclass

from fmf_tcs.src.network.topology import Topology, Request
from fmf_tcs.src.network.routing import RoutingSolution, build_routing, route_length
from fmf_tcs.src.ros.paths import build_graph, k_shortest_paths
from fmf_tcs.utils.error_utils import RoutingError, TopologyError
from fmf_tcs.utils.inputs import id_key, load_document, save_document
from fmf_tcs.utils.parameters import check_parameter

ORDERING_RULES = ('by-demand-desc', 'by-id', 'by-path-length')

@dataclass(frozen=True)
class RosConfig:
    """
    Routing and ordering heuristic settings.

    Attributes
    ----------
    k_paths : int
        candidate shortest paths per request
    ordering_rule : str
        'by-demand-desc', 'by-id' or 'by-path-length'
    """
    k_paths: int = 3
    ordering_rule: str = 'by-demand-desc'

    def __post_init__(self):
        check_parameter(self.k_paths, 'k_paths', types=int, lower=1)
        check_parameter(self.ordering_rule, 'ordering_rule', values=ORDERING_RULES)


def route(topology:Topology, requests:list[Request], cfg:RosConfig = None) -> dict:
    """
    Assigns each request one of its k shortest paths.

    Requests are processed by decreasing rate (ties by id); each takes the
    candidate minimizing the resulting maximum per-link request count, then
    the path length, then the candidate rank.

    Returns
    -------
    dict
        request id -> tuple of link ids

    Raises
    ------
    RoutingError
        if a destination is unreachable
    """
    if cfg is None:
        cfg = RosConfig()
    graph = build_graph(topology)
    load = {link.id: 0 for link in topology.links}
    routes = {}
    for req in sorted(requests, key=lambda req: (-req.rate_R, id_key(req.id))):
        candidates = k_shortest_paths(topology, req.src, req.dst, cfg.k_paths, graph)
        if not candidates:
            raise RoutingError(f'request {req.id!r}: node {req.dst!r} is unreachable from node {req.src!r}', req.id)
        best = min(
            range(len(candidates)),
            key=lambda rank: (
                max(load[link_id] + 1 for link_id in candidates[rank]),
                route_length(topology, candidates[rank]),
                rank,
            ))
        routes[req.id] = candidates[best]
        for link_id in candidates[best]:
            load[link_id] += 1
    return {req.id: routes[req.id] for req in requests}


def order(topology:Topology, routes:dict, requests:list[Request], cfg:RosConfig = None) -> tuple[dict, tuple]:
    """
    Spectral order: one global left-to-right sequence and its restriction to every link.

    Returns
    -------
    link_order : dict
        link id -> tuple of request ids
    global_order : tuple
    """
    if cfg is None:
        cfg = RosConfig()
    if cfg.ordering_rule == 'by-demand-desc':
        key = lambda req: (-req.rate_R, id_key(req.id))
    elif cfg.ordering_rule == 'by-id':
        key = lambda req: id_key(req.id)
    else:
        key = lambda req: (-route_length(topology, routes[req.id]), id_key(req.id))
    global_order = tuple(req.id for req in sorted(requests, key=key))

    link_order = {}
    for rid in global_order:
        for link_id in routes[rid]:
            link_order.setdefault(link_id, []).append(rid)
    link_order = {link_id: tuple(link_order[link_id]) for link_id in sorted(link_order, key=id_key)}
    return link_order, global_order


def solve_ros(topology:Topology, requests:list[Request], cfg:RosConfig = None) -> RoutingSolution:
    """
    Routes and orders the requests and assembles the RoutingSolution.
    """
    routes = route(topology, requests, cfg)
    _, global_order = order(topology, routes, requests, cfg)
    return build_routing(topology, requests, routes, global_order=global_order)


def save_ros(routing:RoutingSolution, filename:str):
    """Writes ``{routes: {id: [link ids]}, global_order: [ids]}``."""
    save_document(routing.to_document(), filename)


def load_ros(source, topology:Topology, requests:list[Request]) -> RoutingSolution:
    """
    Builds a RoutingSolution from an externally supplied ROS document.

    The document holds ``routes`` and either ``global_order`` or ``link_order``.
    """
    document = load_document(source, 'ROS document')
    if 'routes' not in document:
        raise TopologyError('invalid ROS document', ["missing field 'routes'"])
    routes = {rid: tuple(links) for rid, links in document['routes'].items()}
    link_order = document.get('link_order')
    global_order = document.get('global_order')
    if link_order is not None:
        link_order = {link_id: tuple(ids) for link_id, ids in link_order.items()}
    return build_routing(topology, requests, routes, link_order=link_order, global_order=global_order)
