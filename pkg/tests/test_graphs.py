# -*- coding: utf-8 -*-
import networkx as nx
import pytest

import compactft as cft
from compactft.errors import GraphError

GENERATOR_SHAPES = [
	("path", {"n": 5}, None, 5, 4),
	("star", {"n": 5}, None, 6, 5),
	("complete", {"n": 8}, None, 8, 28),
	("balanced_tree", {"depth": 4, "arity": 2}, None, 31, 30),
	("random_tree", {"n": 50}, 3, 50, 49),
]

STATS_EXPECTED = [
	("path", {"n": 5}, {"n": 5, "m": 4, "D": 4, "Delta": 2}),
	("star", {"n": 5}, {"n": 6, "m": 5, "D": 2, "Delta": 5}),
	("complete", {"n": 4}, {"n": 4, "m": 6, "D": 1, "Delta": 3}),
]


def _write(tmp_path, text, name="g.txt"):
	f = tmp_path / name
	f.write_text(text)
	return str(f)


def test_load_path(tmp_path):
	f = _write(tmp_path, "1 2\n2 3\n")
	assert cft.load_graph(f) == [(1, 2), (2, 3)]
	return


def test_load_comments(tmp_path):
	f = _write(tmp_path, "# a path\n\n10 20  # first\n20 30\n")
	assert cft.load_graph(f) == [(10, 20), (20, 30)]
	return


@pytest.mark.parametrize(
	"text, line",
	[
		("1 1\n", 1),
		("# c\n1 2\n2 1\n", 3),
		("1 2\nfoo bar\n", 2),
		("1 2\n2 -3\n", 2),
		("1 2 3\n", 1),
	],
)
def test_load_errors(tmp_path, text, line):
	f = _write(tmp_path, text)
	with pytest.raises(GraphError) as e:
		cft.load_graph(f)
	assert e.value.line == line
	assert "{0}:{1}".format(f, line) in str(e.value)
	return


def test_load_disconnected(tmp_path):
	f = _write(tmp_path, "1 2\n3 4\n")
	with pytest.raises(GraphError) as e:
		cft.load_graph(f)
	assert e.value.witnesses == (1, 3)
	return


def test_save_load_large(tmp_path):
	edges = cft.generate_graph("complete", {"n": 142})
	assert len(edges) > 10000
	f = str(tmp_path / "k142.txt")
	cft.save_graph(edges, f, comment="complete 142")
	assert cft.load_graph(f) == edges
	return


@pytest.mark.parametrize("name, params, seed, n, m", GENERATOR_SHAPES)
def test_generator_shapes(name, params, seed, n, m):
	edges = cft.generate_graph(name, params, seed=seed)
	g = nx.Graph(edges)
	assert g.number_of_nodes() == n
	assert g.number_of_edges() == m
	assert nx.is_connected(g)
	return


def test_star_center():
	edges = cft.generate_graph("star", {"n": 5})
	stats = cft.graph_stats(edges)
	assert stats["m"] == 5
	assert stats["Delta"] == 5
	return


@pytest.mark.parametrize("name", ["gnp_connected", "random_tree"])
def test_generator_determinism(name):
	params = {"n": 64, "p": 0.1} if name == "gnp_connected" else {"n": 64}
	e1 = cft.generate_graph(name, params, seed=1)
	e2 = cft.generate_graph(name, params, seed=1)
	assert e1 == e2
	assert nx.is_connected(nx.Graph(e1))
	cft.check_simple(e1)
	return


def test_gnp_sparse_is_joined():
	edges = cft.generate_graph("gnp_connected", {"n": 40, "p": 0.01}, seed=2)
	assert nx.is_connected(nx.Graph(edges))
	return


@pytest.mark.parametrize(
	"name, params, seed",
	[
		("nope", {}, None),
		("gnp_connected", {"n": 10, "p": 0.5}, None),
		("gnp_connected", {"n": 10, "p": 1.5}, 1),
		("random_tree", {"n": 10}, None),
		("path", {"n": 0}, None),
		("balanced_tree", {"depth": -1}, None),
	],
)
def test_generator_errors(name, params, seed):
	with pytest.raises(ValueError):
		cft.generate_graph(name, params, seed=seed)
	return


def test_relabel():
	edges = cft.generate_graph("random_tree", {"n": 30}, seed=5, id_space=1000)
	ids = {u for e in edges for u in e}
	assert len(ids) == 30
	assert all(0 <= u < 1000 for u in ids)
	assert nx.is_isomorphic(
		nx.Graph(edges), nx.Graph(cft.generate_graph("random_tree", {"n": 30}, seed=5)),
	)
	with pytest.raises(ValueError):
		cft.relabel(edges, 1, 10)
	return


@pytest.mark.parametrize("name, params, expected", STATS_EXPECTED)
def test_graph_stats(name, params, expected):
	assert cft.graph_stats(cft.generate_graph(name, params)) == expected
	return


def test_eccentricities_match_networkx():
	edges = cft.generate_graph("gnp_connected", {"n": 50, "p": 0.08}, seed=7)
	assert cft.eccentricities(edges) == nx.eccentricity(nx.Graph(edges))
	return


def test_single_node_stats():
	assert cft.graph_stats([], nodes=[42]) == {"n": 1, "m": 0, "D": 0, "Delta": 0}
	return
