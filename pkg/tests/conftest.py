# -*- coding: utf-8 -*-
import pytest

import compactft as cft
from compactft.protocols import STAGES


def star_edges(delta):
	"""Star with center `delta` (the leader) and leaves 0..delta-1"""
	return [(delta, i) for i in range(delta)]


def run_stages(
	edges, upto, b=2, weight_mode="broadcast", labels="big", nodes=None, **kwargs
):
	"""Build a network and run the preprocessing stages up to `upto`

	Returns the network and the stage statistics by name.
	"""
	network = cft.build_network(edges, nodes=nodes, **kwargs)
	d = cft.graph_stats(edges, nodes)["D"]
	runs = {
		"leader": lambda: cft.leader_election(network, d),
		"bfs": lambda: cft.bfs_tree(network),
		"weights": lambda: cft.convergecast_weights(network, b, mode=weight_mode),
		"dfs": lambda: cft.dfs_rename(network),
		"intervals": lambda: cft.collect_heavy_intervals(network),
		"labels": lambda: (
			cft.light_paths_big if labels == "big" else cft.light_paths_small
		)(network),
		"wills": lambda: cft.distribute_wills_one_round(network),
	}
	stats = {}
	for name in STAGES[:STAGES.index(upto) + 1]:
		stats[name] = runs[name]()
	return network, stats


@pytest.fixture(scope="session")
def prepare():
	return run_stages


@pytest.fixture(scope="session")
def star():
	return star_edges
