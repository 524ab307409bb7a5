# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Graph input, generators and statistics

Edge-list files hold one ``u v`` pair of unsigned decimal node ids per
line, ``#`` starts a comment.  Generators wrap the `networkx` ones and
return sorted edge lists, connectivity and distances are computed with
`scipy.sparse.csgraph`.
"""
from logging import warning as warn

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import GraphError

__all__ = [
	"GENERATORS",
	"adjacency",
	"check_simple",
	"check_connected",
	"load_graph",
	"save_graph",
	"generate_graph",
	"random_tree",
	"relabel",
	"graph_stats",
	"eccentricities",
]


def _node_ids(edges, nodes=None):
	ids = set(nodes or ())
	for u, v in edges:
		ids.add(u)
		ids.add(v)
	return sorted(ids)


def adjacency(edges, nodes=None):
	"""Sparse symmetric adjacency matrix

	Returns
	-------
	ids: list
		Sorted node ids, row `i` of the matrix belongs to ``ids[i]``.
	adj: scipy.sparse.csr_matrix
		The (N, N) 0/1 adjacency matrix.
	"""
	ids = _node_ids(edges, nodes)
	index = {u: i for i, u in enumerate(ids)}
	rows = np.array([index[u] for u, _ in edges] + [index[v] for _, v in edges], dtype=int)
	cols = np.array([index[v] for _, v in edges] + [index[u] for u, _ in edges], dtype=int)
	adj = csr_matrix(
		(np.ones(len(rows), dtype=np.int8), (rows, cols)),
		shape=(len(ids), len(ids)),
	)
	return ids, adj


def check_simple(edges):
	"""Raise :class:`GraphError` for self-loops and duplicate edges"""
	seen = set()
	for i, (u, v) in enumerate(edges):
		if u == v:
			raise GraphError("Self-loop at node {0}.".format(u), line=i + 1)
		key = (min(u, v), max(u, v))
		if key in seen:
			raise GraphError("Duplicate edge {0}-{1}.".format(u, v), line=i + 1)
		seen.add(key)


def check_connected(edges, nodes=None):
	"""Raise :class:`GraphError` naming two components' witnesses"""
	ids, adj = adjacency(edges, nodes)
	if not ids:
		raise GraphError("Empty graph.")
	ncomp, comp = connected_components(adj, directed=False)
	if ncomp > 1:
		w0 = ids[int(np.flatnonzero(comp == comp[0])[0])]
		w1 = ids[int(np.flatnonzero(comp != comp[0])[0])]
		raise GraphError(
			"Graph is disconnected ({0} components), "
			"e.g. nodes {1} and {2}.".format(ncomp, w0, w1),
			witnesses=(w0, w1),
		)


def load_graph(file):
	"""Read and validate an edge-list file

	Parameters
	----------
	file: str
		Path to the edge-list file.

	Returns
	-------
	edges: list of tuple
		The `(u, v)` pairs in file order.
	"""
	edges = []
	lines = {}
	with open(file, "r") as f:
		for lineno, line in enumerate(f, 1):
			line = line.split("#", 1)[0].strip()
			if not line:
				continue
			parts = line.split()
			if len(parts) != 2 or not all(p.isdigit() for p in parts):
				raise GraphError(
					"{0}:{1}: expected two unsigned ids, got {2!r}.".format(
						file, lineno, line,
					),
					line=lineno,
				)
			lines[len(edges)] = lineno
			edges.append((int(parts[0]), int(parts[1])))
	try:
		check_simple(edges)
	except GraphError as e:
		e.line = lines[e.line - 1]
		raise GraphError("{0}:{1}: {2}".format(file, e.line, e), line=e.line)
	check_connected(edges)
	return edges


def save_graph(edges, file, comment=None):
	"""Write an edge-list file readable by :func:`load_graph`"""
	with open(file, "w") as f:
		if comment:
			f.write("# {0}\n".format(comment))
		for u, v in edges:
			f.write("{0} {1}\n".format(u, v))


def _edges(g):
	return sorted((int(min(u, v)), int(max(u, v))) for u, v in g.edges())


def random_tree(n, seed=None):
	"""Uniform random labeled tree on nodes 0..n-1 (Prüfer sequence)"""
	if n < 1:
		raise ValueError("n must be positive, got {0}.".format(n))
	if n == 1:
		return []
	if n == 2:
		return [(0, 1)]
	rng = np.random.default_rng(seed)
	seq = [int(s) for s in rng.integers(0, n, size=n - 2)]
	return _edges(nx.from_prufer_sequence(seq))


def _gnp_connected(n, p, seed=None):
	g = nx.gnp_random_graph(n, p, seed=seed)
	comps = sorted(min(c) for c in nx.connected_components(g))
	if len(comps) > 1:
		warn(
			"gnp_connected: joining %d components of G(%d, %g).",
			len(comps), n, p,
		)
		g.add_edges_from(zip(comps[:-1], comps[1:]))
	return _edges(g)


def _check_positive(**kwargs):
	for k, v in kwargs.items():
		if v is None or v < 1:
			raise ValueError("{0} must be a positive integer, got {1}.".format(k, v))


def _path(n=2, **kwargs):
	_check_positive(n=n)
	return _edges(nx.path_graph(n))


def _star(n=1, **kwargs):
	_check_positive(n=n)
	return _edges(nx.star_graph(n))


def _complete(n=2, **kwargs):
	_check_positive(n=n)
	return _edges(nx.complete_graph(n))


def _balanced_tree(depth=1, arity=2, **kwargs):
	_check_positive(arity=arity)
	if depth < 0:
		raise ValueError("depth must be non-negative, got {0}.".format(depth))
	return _edges(nx.balanced_tree(r=arity, h=depth))


def _gnp(n=2, p=0.1, seed=None, **kwargs):
	_check_positive(n=n)
	if not 0. <= p <= 1.:
		raise ValueError("p must be in [0, 1], got {0}.".format(p))
	if seed is None:
		raise ValueError("gnp_connected needs a seed.")
	return _gnp_connected(n, p, seed=seed)


def _tree(n=2, seed=None, **kwargs):
	_check_positive(n=n)
	if seed is None:
		raise ValueError("random_tree needs a seed.")
	return random_tree(n, seed=seed)


GENERATORS = {
	"path": _path,
	"star": _star,
	"complete": _complete,
	"balanced_tree": _balanced_tree,
	"gnp_connected": _gnp,
	"random_tree": _tree,
}


def relabel(edges, seed, id_space):
	"""Map node ids to distinct random ids drawn from ``range(id_space)``"""
	ids = _node_ids(edges)
	if id_space < len(ids):
		raise ValueError(
			"id_space {0} smaller than the node count {1}.".format(id_space, len(ids))
		)
	rng = np.random.default_rng(seed)
	new = rng.choice(id_space, size=len(ids), replace=False)
	mapping = {u: int(x) for u, x in zip(ids, new)}
	return [(mapping[u], mapping[v]) for u, v in edges]


def generate_graph(name, params=None, seed=None, id_space=None):
	"""Generate a connected simple graph

	Parameters
	----------
	name: str
		One of :data:`GENERATORS`: ``path``, ``star``, ``complete``,
		``balanced_tree``, ``gnp_connected`` or ``random_tree``.
	params: dict, optional
		Generator parameters (`n`, `p`, `depth`, `arity`).
	seed: int, optional
		Random seed, required by the random generators.
	id_space: int, optional
		Relabel nodes with distinct random ids below `id_space`,
		drawn with `seed`.

	Returns
	-------
	edges: list of tuple
		Sorted `(u, v)` pairs, ``u < v`` unless relabeled.
	"""
	try:
		gen = GENERATORS[name]
	except KeyError:
		raise ValueError(
			"Unknown generator {0!r}, choose from {1}.".format(name, sorted(GENERATORS))
		)
	edges = gen(seed=seed, **(params or {}))
	if id_space is not None:
		edges = relabel(edges, seed, id_space)
	return edges


def eccentricities(edges, nodes=None):
	"""Per-node eccentricities from all-pairs BFS

	Returns
	-------
	ecc: dict
		Maps node id to its eccentricity.
	"""
	ids, adj = adjacency(edges, nodes)
	dist = shortest_path(adj, directed=False, unweighted=True)
	if np.isinf(dist).any():
		raise GraphError("Graph is disconnected.")
	return {u: int(e) for u, e in zip(ids, dist.max(axis=1))}


def graph_stats(edges, nodes=None):
	"""Node and edge counts, diameter and maximum degree

	Returns
	-------
	stats: dict
		Keys `n`, `m`, `D` and `Delta`.
	"""
	ids, adj = adjacency(edges, nodes)
	ecc = eccentricities(edges, nodes)
	deg = np.asarray(adj.sum(axis=1)).ravel()
	return {
		"n": len(ids),
		"m": len(edges),
		"D": max(ecc.values()) if ecc else 0,
		"Delta": int(deg.max()) if len(deg) else 0,
	}
