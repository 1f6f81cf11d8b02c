import networkx as nx

from fmf_tcs.src.network.topology import Topology
from fmf_tcs.utils.inputs import id_key


def _midpoint(link_id):
    return ('link', link_id)


def build_graph(topology:Topology) -> nx.DiGraph:
    """
    Directed networkx graph of the topology in which every link is split by
    a midpoint node, so parallel links stay distinct simple paths.

    A link src -> dst becomes src -> ('link', id) -> dst; the first half
    carries the link length as 'length', the second half zero.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(topology.nodes)
    for link in topology.links:
        mid = _midpoint(link.id)
        graph.add_edge(link.src, mid, length=link.length)
        graph.add_edge(mid, link.dst, length=0.0)
    return graph


def path_key(topology:Topology, path:tuple):
    """Candidate ranking: total length, hop count, then link ids."""
    return (
        sum(topology.link(link_id).length for link_id in path),
        len(path),
        tuple(id_key(link_id) for link_id in path),
    )


def _links_of(node_path:list) -> tuple:
    return tuple(node[1] for node in node_path if isinstance(node, tuple))


def k_shortest_paths(topology:Topology, src, dst, k:int, graph:nx.DiGraph = None) -> list[tuple]:
    """
    Up to k loopless paths from src to dst by increasing length.

    Paths tied in length with the k-th one are all drawn before ranking by
    path_key, so the choice among equal-length paths does not depend on the
    enumeration order.

    Parameters
    ----------
    topology : Topology
    src, dst : node ids
    k : int
    graph : nx.DiGraph, optional
        output of build_graph, reused across calls

    Returns
    -------
    list[tuple]
        link id tuples; empty if dst is unreachable
    """
    if k < 1:
        raise ValueError(f"k must be at least 1. {k} given")
    if graph is None:
        graph = build_graph(topology)

    paths = []
    cutoff = None
    try:
        for node_path in nx.shortest_simple_paths(graph, src, dst, weight='length'):
            links = _links_of(node_path)
            length = path_key(topology, links)[0]
            if cutoff is not None and length > cutoff*(1.0 + 1e-12):
                break
            paths.append(links)
            if len(paths) == k:
                cutoff = length
    except nx.NetworkXNoPath:
        return []
    paths.sort(key=lambda path: path_key(topology, path))
    return paths[:k]
