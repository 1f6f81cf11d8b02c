from .topology import (
    Link,
    Request,
    Topology,
    load_topology,
    bundled_topology,
    load_traffic,
    uniform_traffic,
    traffic_to_document,
    span_count,
)
from .routing import RoutingSolution, compute_shared_spans, build_routing, route_length
