# -*- coding: utf-8 -*-
import networkx as nx
import pytest

import compactft as cft
from compactft.errors import RoutingFault, UnsupportedOperation
from compactft.hft import LEAF, NONLEAF, TreeRef
from compactft.protocols import NodeVars, PipelineConfig, run_preprocessing_pipeline
from compactft.routing import (
	Deliver,
	Forward,
	Packet,
	RoutingLabel,
	VirtualId,
	VirtualNode,
	route_step,
	rt_route_step,
)

TREE_SIZES = [64, 128, pytest.param(256, marks=pytest.mark.slow)]

HEAL_DEGREES = [1, 2, 8, 13, 64]

ROUTE_STEP_EXPECTED = [
	# target, parent port, decision
	(RoutingLabel(10), None, Deliver(10)),
	(RoutingLabel(3), None, Forward(2)),
	(RoutingLabel(5), None, Forward(2)),
	(RoutingLabel(7, (4,)), None, Forward(4)),
	(RoutingLabel(12), 0, Forward(0)),
]


def labeled_network(edges, **config):
	network = cft.build_network(edges)
	run_preprocessing_pipeline(network, PipelineConfig(**config))
	return network


def tree_graph(network):
	g = nx.Graph()
	g.add_nodes_from(network.nodes)
	for nid, node in network.nodes.items():
		if node.vars.parent is not None:
			g.add_edge(nid, node.vars.parent)
	return g


def heal_graph(delta):
	"""Node 0 with `delta` children, every other child has a child

	The root 2 delta + 3 also holds the leaf 2 delta + 2.
	"""
	extra, root = 2 + 2 * delta, 3 + 2 * delta
	edges = [(root, 0), (root, extra)]
	edges += [(0, 1 + i) for i in range(delta)]
	edges += [(1 + i, 1 + delta + i) for i in range(0, delta, 2)]
	return edges


def ceil_log2(n):
	return (n - 1).bit_length()


@pytest.mark.parametrize("n", TREE_SIZES)
def test_route_all_pairs(n):
	edges = cft.generate_graph("random_tree", {"n": n}, seed=n)
	network = labeled_network(edges)
	dist = dict(nx.all_pairs_shortest_path_length(nx.Graph(edges)))
	for s in network.nodes:
		for t in network.nodes:
			packet = cft.simulate_route(network, s, t)
			assert packet.delivered
			assert packet.hop_count == dist[s][t], (s, t)
	return


@pytest.mark.parametrize("b", [2, 3])
def test_route_general_graph(b):
	edges = cft.generate_graph("gnp_connected", {"n": 60, "p": 0.08}, seed=6)
	network = labeled_network(edges, b=b, label_variant="small")
	dist = dict(nx.all_pairs_shortest_path_length(tree_graph(network)))
	for s in network.nodes:
		for t in network.nodes:
			packet = cft.simulate_route(network, s, t)
			assert packet.delivered
			assert packet.hop_count == dist[s][t]
			assert len(packet.trace) == packet.hop_count
	return


def test_route_trace():
	network = labeled_network([(5, 4), (4, 3), (3, 2)])
	packet = cft.simulate_route(network, 2, 5)
	assert [at for at, _ in packet.trace] == [2, 3, 4]
	assert packet.target == cft.routing_label(network, 5)
	packet = cft.simulate_route(network, 3, 3)
	assert packet.delivered and packet.hop_count == 0 and packet.trace == []
	return


def test_route_hop_budget():
	network = labeled_network(cft.generate_graph("path", {"n": 8}))
	packet = cft.simulate_route(network, 0, 7, max_hops=3)
	assert not packet.delivered
	assert packet.hop_count == 3
	with pytest.raises(ValueError):
		cft.simulate_route(network, 0, 99)
	return


def _vars(parent_port):
	return NodeVars(
		new_id=10, d=1, c=6, light_level=0, parent_port=parent_port,
		heavy_ports=[2], heavy_intervals=[(1, 5)],
	)


@pytest.mark.parametrize("target, parent_port, expected", ROUTE_STEP_EXPECTED)
def test_route_step(target, parent_port, expected):
	assert route_step(_vars(parent_port), Packet(None, target)) == expected
	return


@pytest.mark.parametrize("target", [RoutingLabel(12), RoutingLabel(7)])
def test_route_step_faults(target):
	with pytest.raises(RoutingFault):
		route_step(_vars(None), Packet(None, target))
	return


def test_rt_route_step():
	vn = VirtualNode(1, 3, parent_link=9, left_link=VirtualId(2, 1), right_link=5, span=(0, 4))
	for t, expected in [(None, 9), (2, VirtualId(2, 1)), (3, VirtualId(2, 1)), (4, 5), (6, 9)]:
		packet = Packet(None, RoutingLabel(1), rt_target_index=t)
		assert rt_route_step(vn, packet) == Forward(expected)
	vn.left_link = None
	with pytest.raises(RoutingFault):
		rt_route_step(vn, Packet(None, RoutingLabel(1), rt_target_index=0))
	return


def _ref(link, report, index_of):
	if link == report.parent:
		return "parent"
	if isinstance(link, VirtualId):
		return TreeRef(NONLEAF, link.index)
	return TreeRef(LEAF, index_of[link])


@pytest.mark.parametrize("delta", HEAL_DEGREES)
def test_heal_structure(delta):
	network = labeled_network(heal_graph(delta))
	report = cft.execute_will(network, 0)
	healing = network.healing
	assert sorted(healing.children) == list(range(1, delta + 1))
	assert report.parent == 3 + 2 * delta
	assert report.virtual_count == delta - 1
	index_of = {c: k for k, c in enumerate(healing.children)}
	edges = {
		(_ref(b, report, index_of), _ref(a, report, index_of))
		for a, b in report.rt_edges
	}
	oracle = cft.build_ht_oracle(0, delta - 1)
	assert edges == set(oracle.edges()) | {("parent", oracle.root)}
	assert all(d <= 3 for d in report.degree_delta.values())
	assert 0 not in network.nodes
	return


@pytest.mark.parametrize("delta", HEAL_DEGREES)
def test_heal_routes(delta):
	edges = heal_graph(delta)
	network = labeled_network(edges)
	g = nx.Graph(edges)
	dist = dict(nx.all_pairs_shortest_path_length(g))
	cft.execute_will(network, 0)
	slack = 2 * ceil_log2(delta) + 2
	for s in network.nodes:
		for t in network.nodes:
			packet = cft.simulate_route(network, s, t)
			assert packet.delivered, (s, t)
			assert packet.hop_count <= dist[s][t] + slack, (s, t)
	return


@pytest.mark.parametrize("delta", [8, 13])
def test_heal_stamp(delta):
	network = labeled_network(heal_graph(delta))
	cft.execute_will(network, 0)
	healing = network.healing
	for k, c in enumerate(healing.children):
		lo, hi = network.nodes[c].vars.interval()
		assert healing.stamp(lo) == k
		assert healing.stamp(hi) == k
	assert healing.stamp(healing.lower - 1) is None
	assert healing.stamp(int(healing.uppers[-1]) + 1) is None
	return


def test_heal_random_tree():
	edges = cft.generate_graph("random_tree", {"n": 150}, seed=2)
	network = labeled_network(edges)
	x = max(
		(nid for nid, node in network.nodes.items() if node.vars.parent is not None),
		key=lambda nid: network.nodes[nid].vars.n_child,
	)
	delta = network.nodes[x].vars.n_child
	dist = dict(nx.all_pairs_shortest_path_length(nx.Graph(edges)))
	cft.execute_will(network, x)
	for s in network.nodes:
		for t in network.nodes:
			packet = cft.simulate_route(network, s, t)
			assert packet.delivered
			assert packet.hop_count <= dist[s][t] + 2 * ceil_log2(delta) + 2
	return


def test_heal_adversarial_wills():
	edges = heal_graph(13)
	network = cft.build_network(edges)
	run_preprocessing_pipeline(
		network, PipelineConfig(policy="rand:5", will_variant="adversarial"),
	)
	cft.execute_will(network, 0)
	for t in network.nodes:
		assert cft.simulate_route(network, 29, t).delivered
	return


def test_heal_unsupported():
	network = labeled_network(heal_graph(4))
	with pytest.raises(UnsupportedOperation):
		cft.execute_will(network, 11)  # root
	with pytest.raises(UnsupportedOperation):
		cft.execute_will(network, 10)  # leaf
	with pytest.raises(ValueError):
		cft.execute_will(network, 99)
	cft.execute_will(network, 0)
	with pytest.raises(UnsupportedOperation):
		cft.execute_will(network, 1)
	with pytest.raises(ValueError):
		cft.simulate_route(network, 1, 0)
	return


def test_heal_without_wills():
	network = cft.build_network(heal_graph(3))
	d = cft.graph_stats(network.edges())["D"]
	cft.leader_election(network, d)
	cft.bfs_tree(network)
	with pytest.raises(UnsupportedOperation):
		cft.execute_will(network, 0)
	return
