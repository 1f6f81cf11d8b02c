from dataclasses import dataclass, replace
from functools import cached_property
import math
import numpy as np

from fmf_tcs.utils.error_utils import TopologyError, check_keys
from fmf_tcs.utils.inputs import load_document, id_key, km_to_m, ghz_to_hz, gbps_to_bps
from fmf_tcs.utils.typing import Identifier

@dataclass(frozen=True)
class Link:
    """
    Directional fiber link.

    Attributes
    ----------
    id : Identifier
    src, dst : Identifier
        node ids
    length : float
        [m]
    span_count : int
        ceil(length / L_spn)
    """
    id: Identifier
    src: Identifier
    dst: Identifier
    length: float
    span_count: int


@dataclass(frozen=True)
class Request:
    """
    Connection request with its demanded information rate rate_R [bit/s].
    """
    id: Identifier
    src: Identifier
    dst: Identifier
    rate_R: float


@dataclass(frozen=True)
class Topology:
    """
    Directed topology graph of few-mode fiber links.

    Links are kept sorted by id so that the topology does not depend on the
    order of the input document.

    Attributes
    ----------
    nodes : tuple
    links : tuple[Link]
    modes_M : int
        spatial modes per fiber
    bandwidth_B : float
        usable gridless spectrum per link [Hz]
    """
    nodes: tuple
    links: tuple
    modes_M: int
    bandwidth_B: float

    @cached_property
    def link_map(self) -> dict:
        return {link.id: link for link in self.links}

    def link(self, link_id) -> Link:
        try:
            return self.link_map[link_id]
        except KeyError:
            raise TopologyError(f"unknown link '{link_id}'") from None

    def with_modes(self, modes_M:int) -> 'Topology':
        if not isinstance(modes_M, (int, np.integer)) or modes_M < 1:
            raise TopologyError(f"modes must be an integer >= 1, got {modes_M}")
        return replace(self, modes_M=int(modes_M))

    def to_document(self) -> dict:
        return {
            'nodes': list(self.nodes),
            'links': [
                {'id': link.id, 'src': link.src, 'dst': link.dst, 'length_km': link.length/1e3}
                for link in self.links
            ],
            'modes': self.modes_M,
            'bandwidth_ghz': self.bandwidth_B/1e9,
        }


def span_count(length:float, L_spn:float) -> int:
    return max(1, int(math.ceil(length/L_spn - 1e-12)))


def _is_number(value) -> bool:
    return isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool)


def load_topology(source, constants = None) -> Topology:
    """
    Loads and validates a topology document.

    Parameters
    ----------
    source : dict, path or YAML text
        ``nodes: [id...]``, ``links: [{id, src, dst, length_km}]``, ``modes``, ``bandwidth_ghz``
    constants : PhysicalConstants, optional
        provides the span length L_spn (default constants otherwise)

    Returns
    -------
    Topology

    Raises
    ------
    TopologyError
        with one diagnostic per offending field
    """
    if constants is None:
        from fmf_tcs.src.phy.constants import PhysicalConstants
        constants = PhysicalConstants()
    document = load_document(source, 'topology')

    diagnostics = []
    if not check_keys(document, ('nodes', 'links', 'modes', 'bandwidth_ghz'), 'topology', diagnostics):
        raise TopologyError('invalid topology document', diagnostics)

    nodes = document['nodes']
    if not isinstance(nodes, list) or len(nodes) == 0:
        diagnostics.append('nodes: expected a non-empty list')
        nodes = []
    node_set = set()
    for i, node in enumerate(nodes):
        if not isinstance(node, (int, str)) or isinstance(node, bool):
            diagnostics.append(f'nodes[{i}]: node ids must be integers or strings, got {node!r}')
        elif node in node_set:
            diagnostics.append(f'nodes[{i}]: duplicate node id {node!r}')
        node_set.add(node)

    modes = document['modes']
    if not isinstance(modes, int) or isinstance(modes, bool) or modes < 1:
        diagnostics.append(f'modes: expected an integer >= 1, got {modes!r}')
    bandwidth = document['bandwidth_ghz']
    if not _is_number(bandwidth) or bandwidth <= 0:
        diagnostics.append(f'bandwidth_ghz: expected a positive number, got {bandwidth!r}')

    links = []
    link_ids = set()
    raw_links = document['links']
    if not isinstance(raw_links, list):
        diagnostics.append('links: expected a list')
        raw_links = []
    for i, entry in enumerate(raw_links):
        where = f'links[{i}]'
        if not check_keys(entry, ('id', 'src', 'dst', 'length_km'), where, diagnostics):
            continue
        ok = True
        if entry['id'] in link_ids:
            diagnostics.append(f'{where}.id: duplicate link id {entry["id"]!r}')
            ok = False
        for end in ('src', 'dst'):
            if entry[end] not in node_set:
                diagnostics.append(f'{where}.{end}: unknown node {entry[end]!r}')
                ok = False
        if ok and entry['src'] == entry['dst']:
            diagnostics.append(f'{where}: link starts and ends at node {entry["src"]!r}')
            ok = False
        length = entry['length_km']
        if not _is_number(length) or length <= 0:
            diagnostics.append(f'{where}.length_km: expected a positive number, got {length!r}')
            ok = False
        link_ids.add(entry['id'])
        if ok:
            length_m = km_to_m(float(length))
            links.append(Link(entry['id'], entry['src'], entry['dst'], length_m, span_count(length_m, constants.L_spn)))

    if diagnostics:
        raise TopologyError('invalid topology document', diagnostics)

    links.sort(key=lambda link: id_key(link.id))
    return Topology(
        nodes=tuple(nodes),
        links=tuple(links),
        modes_M=int(modes),
        bandwidth_B=ghz_to_hz(float(bandwidth)),
    )


def bundled_topology(name:str, constants = None) -> Topology:
    """
    Loads one of the topologies shipped with the package ('ring6' or 'cost239').
    """
    from pathlib import Path
    path = Path(__file__).resolve().parents[2] / 'data' / f'{name}.yaml'
    if not path.is_file():
        raise TopologyError(f"no bundled topology named '{name}'")
    return load_topology(str(path), constants)


def load_traffic(source, topology:Topology, constants = None) -> list[Request]:
    """
    Loads and validates a traffic document ``requests: [{id, src, dst, rate_gbps}]``.

    When the constants carry a maximum transponder bit rate, every rate must not exceed it.
    """
    document = load_document(source, 'traffic')
    diagnostics = []
    if not check_keys(document, ('requests',), 'traffic', diagnostics):
        raise TopologyError('invalid traffic document', diagnostics)
    raw = document['requests']
    if not isinstance(raw, list) or len(raw) == 0:
        raise TopologyError('invalid traffic document', ['requests: expected a non-empty list'])

    node_set = set(topology.nodes)
    max_rate = None if constants is None else constants.max_bit_rate_C
    requests = []
    ids = set()
    for i, entry in enumerate(raw):
        where = f'requests[{i}]'
        if not check_keys(entry, ('id', 'src', 'dst', 'rate_gbps'), where, diagnostics):
            continue
        ok = True
        if entry['id'] in ids:
            diagnostics.append(f'{where}.id: duplicate request id {entry["id"]!r}')
            ok = False
        ids.add(entry['id'])
        for end in ('src', 'dst'):
            if entry[end] not in node_set:
                diagnostics.append(f'{where}.{end}: unknown node {entry[end]!r}')
                ok = False
        if entry['src'] == entry['dst']:
            diagnostics.append(f'{where}: source and destination are both {entry["src"]!r}')
            ok = False
        rate = entry['rate_gbps']
        if not _is_number(rate) or rate <= 0:
            diagnostics.append(f'{where}.rate_gbps: expected a positive number, got {rate!r}')
            ok = False
        elif max_rate is not None and gbps_to_bps(float(rate)) > max_rate:
            diagnostics.append(f'{where}.rate_gbps: {rate} exceeds the transponder maximum of {max_rate/1e9} Gb/s')
            ok = False
        if ok:
            requests.append(Request(entry['id'], entry['src'], entry['dst'], gbps_to_bps(float(rate))))

    if diagnostics:
        raise TopologyError('invalid traffic document', diagnostics)
    return requests


def uniform_traffic(
        topology:Topology,
        total_tbps:float,
        pairs:str = 'unordered',
        jitter:float = 0.0,
        seed:int = 0,
    ) -> list[Request]:
    """
    Splits a total traffic evenly over node pairs.

    Parameters
    ----------
    topology : Topology
    total_tbps : float
        aggregate traffic [Tb/s]
    pairs : str
        'unordered' (one request per node pair, from the lower to the higher node id)
        or 'ordered' (one request per direction)
    jitter : float
        relative spread of a seeded multiplicative perturbation of each rate in [0, 1);
        rates are renormalized to the total
    seed : int

    Returns
    -------
    list[Request]
        ids 1..n in pair order
    """
    from fmf_tcs.utils.parameters import check_parameter
    check_parameter(pairs, 'pairs', values=('unordered', 'ordered'))
    check_parameter(total_tbps, 'total_tbps', types=(int, float), lower=0.0)
    check_parameter(jitter, 'jitter', types=(int, float), lower=0.0, upper=0.99)
    if total_tbps <= 0:
        raise ValueError(f"total_tbps must be strictly positive. {total_tbps} given")

    nodes = sorted(topology.nodes, key=id_key)
    node_pairs = []
    for a_ind, a in enumerate(nodes):
        for b_ind, b in enumerate(nodes):
            if a_ind == b_ind:
                continue
            if pairs == 'unordered' and b_ind < a_ind:
                continue
            node_pairs.append((a, b))

    total = total_tbps*1e12
    rates = np.full(len(node_pairs), total/len(node_pairs))
    if jitter > 0.0:
        rng = np.random.default_rng(seed)
        rates = rates*(1.0 + jitter*rng.uniform(-1.0, 1.0, size=len(node_pairs)))
        rates = rates*total/np.sum(rates)
    return [Request(i + 1, a, b, float(rate)) for i, ((a, b), rate) in enumerate(zip(node_pairs, rates))]


def traffic_to_document(requests:list[Request]) -> dict:
    return {'requests': [
        {'id': req.id, 'src': req.src, 'dst': req.dst, 'rate_gbps': req.rate_R/1e9} for req in requests
    ]}
