from dataclasses import dataclass, field
from functools import cached_property
import numpy as np
import rustworkx as rx

from fmf_tcs.src.network.topology import Topology, Request
from fmf_tcs.utils.error_utils import TopologyError
from fmf_tcs.utils.inputs import id_key

@dataclass(frozen=True, eq=False)
class RoutingSolution:
    """
    Routes, span structure and spectral order of a set of requests.

    Request-indexed arrays follow the order of request_ids.

    Attributes
    ----------
    request_ids : tuple
    route : dict
        request id -> tuple of link ids from source to destination
    span_N : np.ndarray
        total span count per request
    shared_spans : np.ndarray
        symmetric matrix of spans common to two requests, zero diagonal
    link_order : dict
        link id -> tuple of request ids, left to right in frequency
    global_order : tuple
        request ids left to right; every link_order entry is a subsequence
    """
    request_ids: tuple
    route: dict
    span_N: np.ndarray
    shared_spans: np.ndarray
    link_order: dict
    global_order: tuple

    @cached_property
    def index(self) -> dict:
        return {rid: i for i, rid in enumerate(self.request_ids)}

    @cached_property
    def rank(self) -> np.ndarray:
        """Position of each request (by index) in the global order."""
        rank = np.empty(len(self.request_ids), dtype=int)
        for pos, rid in enumerate(self.global_order):
            rank[self.index[rid]] = pos
        return rank

    @cached_property
    def consecutive_pairs(self) -> list[tuple[int, int]]:
        """
        Distinct (left, right) request index pairs that are neighbours on at least one link.
        """
        pairs = set()
        for order in self.link_order.values():
            for a, b in zip(order[:-1], order[1:]):
                pairs.add((self.index[a], self.index[b]))
        return sorted(pairs, key=lambda pair: (self.rank[pair[0]], self.rank[pair[1]]))

    @cached_property
    def sharing_pairs(self) -> list[tuple[int, int]]:
        """
        Unordered request index pairs (q < i) with at least one common span.
        """
        n = len(self.request_ids)
        return [(q, i) for q in range(n) for i in range(q + 1, n) if self.shared_spans[q, i] > 0]

    def left_right(self, q:int, i:int) -> tuple[int, int]:
        """(left, right) of two request indices in the global order."""
        return (q, i) if self.rank[q] < self.rank[i] else (i, q)

    def to_document(self) -> dict:
        return {
            'routes': {rid: list(self.route[rid]) for rid in self.request_ids},
            'global_order': list(self.global_order),
        }


def _check_route(topology:Topology, route, where:str, src=None, dst=None) -> tuple:
    """
    Validates that a route is a connected path of known links, returns it as a tuple.
    """
    if route is None or len(route) == 0:
        raise TopologyError(f'{where}: empty route')
    links = [topology.link(link_id) for link_id in route]
    for prev, nxt in zip(links[:-1], links[1:]):
        if prev.dst != nxt.src:
            raise TopologyError(
                f"{where}: route is disconnected between link '{prev.id}' ({prev.src}->{prev.dst}) "
                f"and link '{nxt.id}' ({nxt.src}->{nxt.dst})")
    if len(set(route)) != len(route):
        raise TopologyError(f'{where}: route uses a link twice')
    if src is not None and links[0].src != src:
        raise TopologyError(f"{where}: route starts at node {links[0].src!r} instead of {src!r}")
    if dst is not None and links[-1].dst != dst:
        raise TopologyError(f"{where}: route ends at node {links[-1].dst!r} instead of {dst!r}")
    return tuple(route)


def route_length(topology:Topology, route) -> float:
    return float(sum(topology.link(link_id).length for link_id in route))


def compute_shared_spans(topology:Topology, routes) -> np.ndarray:
    """
    Spans common to every pair of routes.

    Parameters
    ----------
    topology : Topology
    routes : sequence of link id lists, or dict of them (values taken in key order)

    Returns
    -------
    np.ndarray
        N_qi = sum of span_count over links in both routes; symmetric with zero diagonal

    Raises
    ------
    TopologyError
        for unknown links or disconnected routes
    """
    if isinstance(routes, dict):
        routes = list(routes.values())
    link_sets = []
    for q, route in enumerate(routes):
        _check_route(topology, route, f'route[{q}]')
        link_sets.append(set(route))

    n = len(link_sets)
    shared = np.zeros((n, n))
    for q in range(n):
        for i in range(q + 1, n):
            common = link_sets[q] & link_sets[i]
            value = sum(topology.link(link_id).span_count for link_id in common)
            shared[q, i] = shared[i, q] = value
    return shared


def build_routing(
        topology:Topology,
        requests:list[Request],
        routes:dict,
        link_order:dict = None,
        global_order = None,
    ) -> RoutingSolution:
    """
    Assembles a RoutingSolution from routes and a spectral order.

    Exactly one of link_order and global_order may be given. With a link
    order the global order is the lexicographic topological sort of the
    left-of relation (ties by request id); a cyclic relation is rejected.
    With neither, requests are ordered by id.
    """
    if link_order is not None and global_order is not None:
        raise ValueError('give either link_order or global_order, not both')

    request_ids = tuple(req.id for req in requests)
    if len(set(request_ids)) != len(request_ids):
        raise TopologyError('duplicate request ids')
    checked = {}
    for req in requests:
        if req.id not in routes:
            raise TopologyError(f'request {req.id!r} has no route')
        checked[req.id] = _check_route(topology, routes[req.id], f'route of request {req.id!r}', req.src, req.dst)
    extra = [rid for rid in routes if rid not in checked]
    if extra:
        raise TopologyError(f'routes given for unknown requests {extra}')

    span_N = np.array([
        sum(topology.link(link_id).span_count for link_id in checked[rid]) for rid in request_ids
    ], dtype=float)
    shared = compute_shared_spans(topology, [checked[rid] for rid in request_ids])

    on_link = {}
    for rid in request_ids:
        for link_id in checked[rid]:
            on_link.setdefault(link_id, set()).add(rid)

    if global_order is None:
        if link_order is None:
            global_order = tuple(sorted(request_ids, key=id_key))
        else:
            global_order = _global_order_from_links(request_ids, link_order, on_link)
    else:
        global_order = tuple(global_order)
        if sorted(global_order, key=id_key) != sorted(request_ids, key=id_key):
            raise TopologyError('global order must be a permutation of the request ids')

    position = {rid: pos for pos, rid in enumerate(global_order)}
    restricted = {
        link_id: tuple(sorted(members, key=lambda rid: position[rid]))
        for link_id, members in sorted(on_link.items(), key=lambda item: id_key(item[0]))
    }
    return RoutingSolution(
        request_ids=request_ids,
        route=checked,
        span_N=span_N,
        shared_spans=shared,
        link_order=restricted,
        global_order=global_order,
    )


def _global_order_from_links(request_ids, link_order, on_link) -> tuple:
    diagnostics = []
    for link_id, order in link_order.items():
        expected = on_link.get(link_id, set())
        if set(order) != expected or len(order) != len(expected):
            diagnostics.append(
                f"link_order[{link_id!r}]: expected exactly the requests {sorted(expected, key=id_key)}, got {list(order)}")
    for link_id in on_link:
        if link_id not in link_order and len(on_link[link_id]) > 1:
            diagnostics.append(f"link_order: missing order for link {link_id!r}")
    if diagnostics:
        raise TopologyError('inconsistent link order', diagnostics)

    sorted_ids = sorted(request_ids, key=id_key)
    graph = rx.PyDiGraph()
    node_of = {rid: graph.add_node(rid) for rid in sorted_ids}
    rank_key = {rid: f'{pos:09d}' for pos, rid in enumerate(sorted_ids)}
    for order in link_order.values():
        for a, b in zip(order[:-1], order[1:]):
            if not graph.has_edge(node_of[a], node_of[b]):
                graph.add_edge(node_of[a], node_of[b], None)

    if not rx.is_directed_acyclic_graph(graph):
        cycle = rx.digraph_find_cycle(graph)
        members = [graph[u] for u, _ in cycle]
        raise TopologyError(
            'per-link spectral orders are not consistent with a single frequency assignment',
            [f'left-of cycle through requests {members}'])
    return tuple(rx.lexicographical_topological_sort(graph, key=lambda rid: rank_key[rid]))
