from .tcs_test import TCSTest, TestingPair
from .instances import line_topology, ring_topology, make_instance, make_program, line_document, write_scenario
