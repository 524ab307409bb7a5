# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Tree routing and single deletion healing

Real nodes route with their DFS interval, heavy intervals and the
target's light path.  When an internal node is deleted its children
execute its Will: they form the reconstruction tree (RT), a half-full
tree whose leaves are the children themselves and whose non-leaf `y`
is simulated by child `y`.  Packets entering the RT are stamped with
the index of the child whose subtree holds the target and then follow
a binary search down the RT.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from logging import debug, warning as warn
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .errors import RoutingFault, UnsupportedOperation

__all__ = [
	"RoutingLabel",
	"VirtualId",
	"Deliver",
	"Forward",
	"Packet",
	"VirtualNode",
	"RTState",
	"HealReport",
	"routing_label",
	"route_step",
	"rt_route_step",
	"execute_will",
	"next_hop",
	"simulate_route",
]


class RoutingLabel(NamedTuple):
	"""The pair `(new_id, light_path)`"""
	new_id: int
	light_path: Tuple[int, ...] = ()


class VirtualId(NamedTuple):
	"""RT non-leaf `index` simulated by the real node `host`"""
	host: int
	index: int


class Deliver(NamedTuple):
	at: object


class Forward(NamedTuple):
	"""Next hop, a port at real nodes and a link at virtual ones"""
	via: object


@dataclass
class Packet:
	source: object
	target: RoutingLabel
	rt_target_index: Optional[int] = None
	hop_count: int = 0
	trace: List = field(default_factory=list)
	delivered: bool = False


@dataclass
class VirtualNode:
	"""RT non-leaf

	Links are :class:`VirtualId` for non-leaves and real node ids for
	RT leaves and the deleted node's parent.  `span` holds the smallest
	and largest leaf index below the node.
	"""
	host: int
	index_label: int
	parent_link: object = None
	left_link: object = None
	right_link: object = None
	span: Optional[Tuple[int, int]] = None


def _host(link):
	return link.host if isinstance(link, VirtualId) else link


def _enc(link):
	return list(link) if isinstance(link, VirtualId) else link


def _dec(link):
	return VirtualId(*link) if isinstance(link, list) else link


@dataclass
class RTState:
	"""The healed overlay after one deletion

	Attributes
	----------
	deleted: int
		The deleted node.
	parent: int
		Its former parent.
	children: list
		Ids of the former children by child index.
	root:
		The RT root, a :class:`VirtualId` or the only child.
	virtual: dict
		Maps the index label to the :class:`VirtualNode`.
	rebound: dict
		Maps `(node, port)` of the former links to the deleted node
		onto their RT replacement.
	lower: int
		First DFS label of the deleted node's subtree.
	uppers: numpy.ndarray
		The children's `new_id`, ascending with the child index.
	"""
	deleted: int
	parent: int
	children: List[int]
	root: object
	virtual: dict
	rebound: dict
	lower: int
	uppers: np.ndarray

	def stamp(self, w):
		"""Index of the child whose subtree holds label `w`, or `None`"""
		if w < self.lower or w > self.uppers[-1]:
			return None
		return int(np.searchsorted(self.uppers, w, side="left"))

	def to_dict(self):
		return {
			"deleted": self.deleted,
			"parent": self.parent,
			"children": list(self.children),
			"root": _enc(self.root),
			"virtual": [
				[
					vn.host, vn.index_label, _enc(vn.parent_link),
					_enc(vn.left_link), _enc(vn.right_link), list(vn.span),
				]
				for _, vn in sorted(self.virtual.items())
			],
			"rebound": [
				[node, port, _enc(link)]
				for (node, port), link in sorted(self.rebound.items())
			],
			"lower": self.lower,
			"uppers": [int(u) for u in self.uppers],
		}

	@classmethod
	def from_dict(cls, d):
		virtual = {}
		for host, index, parent, left, right, span in d["virtual"]:
			virtual[index] = VirtualNode(
				host, index, _dec(parent), _dec(left), _dec(right), tuple(span),
			)
		return cls(
			deleted=d["deleted"],
			parent=d["parent"],
			children=list(d["children"]),
			root=_dec(d["root"]),
			virtual=virtual,
			rebound={(node, port): _dec(link) for node, port, link in d["rebound"]},
			lower=d["lower"],
			uppers=np.asarray(d["uppers"], dtype=np.int64),
		)


@dataclass
class HealReport:
	deleted: int
	parent: int
	root: object
	rt_edges: List = field(default_factory=list)
	degree_delta: dict = field(default_factory=dict)
	virtual_count: int = 0

	def to_dict(self):
		return {
			"deleted": self.deleted,
			"parent": self.parent,
			"root": _enc(self.root),
			"rt_edges": [[_enc(a), _enc(b)] for a, b in self.rt_edges],
			"degree_delta": {str(k): v for k, v in sorted(self.degree_delta.items())},
			"virtual_count": self.virtual_count,
		}


def routing_label(network, nid):
	"""Routing label of node `nid`"""
	v = network.nodes[nid].vars
	return RoutingLabel(v.new_id, tuple(v.light_path or ()))


def route_step(node_vars, packet):
	"""Routing decision at a real node

	Parameters
	----------
	node_vars: NodeVars
		The labels of the current node.
	packet: Packet
		The packet, only its target label is used.

	Returns
	-------
	decision: Deliver or Forward
		`Forward` carries the outgoing port.
	"""
	v = node_vars
	w = packet.target.new_id
	if w == v.new_id:
		return Deliver(v.new_id)
	if not v.d <= w <= v.new_id:
		if v.parent_port is None:
			raise RoutingFault("Label {0} outside the root interval.".format(w))
		return Forward(v.parent_port)
	if w >= v.c:
		path = packet.target.light_path
		if len(path) <= v.light_level:
			raise RoutingFault(
				"Light path {0} of label {1} too short for level {2}.".format(
					list(path), w, v.light_level,
				)
			)
		return Forward(path[v.light_level])
	for port, (lo, hi) in zip(v.heavy_ports, v.heavy_intervals):
		if lo <= w <= hi:
			return Forward(port)
	raise RoutingFault("No heavy interval of node {0} holds {1}.".format(v.new_id, w))


def rt_route_step(virtual, packet):
	"""Binary search step at an RT non-leaf

	Up if the stamped index is unset or outside the node's span, else
	left for indices up to the node's label and right otherwise.
	"""
	t = packet.rt_target_index
	lo, hi = virtual.span
	if t is None or not lo <= t <= hi:
		link = virtual.parent_link
	elif t <= virtual.index_label:
		link = virtual.left_link
	else:
		link = virtual.right_link
	if link is None:
		raise RoutingFault(
			"Dangling link at RT node {0} hosted by {1}.".format(
				virtual.index_label, virtual.host,
			)
		)
	return Forward(link)


def _link(nid, idx, is_leaf):
	if idx is None:
		return None
	return nid if is_leaf else VirtualId(nid, idx)


def _spans(virtual, index_of):
	def span(link):
		if not isinstance(link, VirtualId):
			k = index_of[link]
			return k, k
		vn = virtual[link.index]
		if vn.span is None:
			vn.span = (span(vn.left_link)[0], span(vn.right_link)[1])
		return vn.span

	for index, vn in virtual.items():
		span(VirtualId(vn.host, index))


def execute_will(network, deleted):
	"""Delete an internal non-root node and heal with its Will

	The children build the RT from their subwills, the parent's port to
	the deleted node is rebound to the RT root and every child's parent
	port to its RT leaf parent.

	Parameters
	----------
	network: Network
		A preprocessed network, modified in place.
	deleted: int
		The node to delete.

	Returns
	-------
	report: HealReport
	"""
	if network.healing is not None:
		raise UnsupportedOperation(
			"Only a single deletion is supported, {0} was already deleted.".format(
				network.healing.deleted,
			)
		)
	if deleted not in network.nodes:
		raise ValueError("Unknown node {0}.".format(deleted))
	nodes = network.nodes
	x = nodes[deleted]
	xv = x.vars
	if xv.parent_port is None:
		raise UnsupportedOperation("Cannot delete the root {0}.".format(deleted))
	if not xv.n_child:
		raise UnsupportedOperation("Cannot delete the leaf {0}.".format(deleted))
	children = {}
	for p, (c, q) in x.ports.items():
		cv = nodes[c].vars
		if cv.parent == deleted and cv.parent_port == q:
			if cv.subwill is None:
				raise UnsupportedOperation(
					"Child {0} of {1} holds no will.".format(c, deleted)
				)
			children[cv.child_index] = (c, q)
	delta = xv.n_child
	if sorted(children) != list(range(delta)):
		raise UnsupportedOperation(
			"Children of {0} hold an incomplete will.".format(deleted)
		)
	ids = [children[k][0] for k in range(delta)]
	index_of = {c: k for k, c in enumerate(ids)}
	parent, parent_side = x.ports[xv.parent_port]

	virtual = {}
	for k, c in enumerate(ids):
		sw = nodes[c].vars.subwill
		if not sw.has_nonleaf:
			continue
		up = _link(sw.nonleaf_parent, sw.nonleaf_parent_idx, False)
		virtual[k] = VirtualNode(
			c, k,
			parent_link=parent if up is None else up,
			left_link=_link(sw.nonleaf_left, sw.nonleaf_left_idx, sw.left_is_leaf),
			right_link=_link(sw.nonleaf_right, sw.nonleaf_right_idx, sw.right_is_leaf),
		)
	_spans(virtual, index_of)
	if delta == 1:
		root = ids[0]
	else:
		root = next(
			VirtualId(vn.host, k) for k, vn in virtual.items() if vn.parent_link == parent
		)

	rebound = {(parent, parent_side): root}
	for k, c in enumerate(ids):
		sw = nodes[c].vars.subwill
		if sw.leaf_parent_idx is None:
			rebound[(c, children[k][1])] = parent
		else:
			rebound[(c, children[k][1])] = VirtualId(sw.leaf_parent, sw.leaf_parent_idx)

	degree_delta = defaultdict(int)
	rt_edges = [(root, parent)]
	for k, vn in sorted(virtual.items()):
		me = VirtualId(vn.host, k)
		rt_edges.extend((child, me) for child in (vn.left_link, vn.right_link))
	for a, b in rt_edges:
		if _host(a) != _host(b):
			degree_delta[_host(a)] += 1
			degree_delta[_host(b)] += 1
	for p, (v, q) in x.ports.items():
		degree_delta[v] -= 1
		node = nodes[v]
		node.ports.pop(q, None)
		node.in_buf.pop(q, None)
		node.out_buf.pop(q, None)
	del nodes[deleted]

	network.healing = RTState(
		deleted=deleted,
		parent=parent,
		children=ids,
		root=root,
		virtual=virtual,
		rebound=rebound,
		lower=xv.d,
		uppers=np.array([nodes[c].vars.new_id for c in ids], dtype=np.int64),
	)
	debug(
		"deleted %d: %d children, %d virtual nodes, root %s",
		deleted, delta, len(virtual), root,
	)
	return HealReport(
		deleted=deleted,
		parent=parent,
		root=root,
		rt_edges=rt_edges,
		degree_delta=dict(degree_delta),
		virtual_count=len(virtual),
	)


def next_hop(network, at, via):
	"""Node or RT link reached from `at` through `via`"""
	if isinstance(at, VirtualId):
		return via
	healing = network.healing
	if healing is not None and (at, via) in healing.rebound:
		return healing.rebound[(at, via)]
	try:
		return network.nodes[at].ports[via][0]
	except KeyError:
		raise RoutingFault("Node {0} has no live port {1}.".format(at, via))


def simulate_route(network, source, target, max_hops=None):
	"""Route a packet hop by hop from `source` to `target`

	Parameters
	----------
	network: Network
		A preprocessed, possibly healed network.
	source, target: int
		Real node ids.
	max_hops: int, optional
		Hop budget, default :math:`2 (n + \\#\\text{virtual}) + 2`.

	Returns
	-------
	packet: Packet
		With the full trace; `delivered` is `False` if the hop budget
		ran out.
	"""
	for nid in (source, target):
		if nid not in network.nodes:
			raise ValueError("Node {0} is not in the network.".format(nid))
	healing = network.healing
	if max_hops is None:
		nvirt = len(healing.virtual) if healing is not None else 0
		max_hops = 2 * (network.n + nvirt) + 2
	packet = Packet(source, routing_label(network, target))
	at = source
	while True:
		if isinstance(at, VirtualId):
			decision = rt_route_step(healing.virtual[at.index], packet)
		else:
			decision = route_step(network.nodes[at].vars, packet)
		if isinstance(decision, Deliver):
			packet.delivered = True
			return packet
		if packet.hop_count >= max_hops:
			warn(
				"packet %s -> %s not delivered within %d hops",
				source, target, max_hops,
			)
			return packet
		nxt = next_hop(network, at, decision.via)
		if isinstance(nxt, VirtualId):
			if not isinstance(at, VirtualId):
				packet.rt_target_index = healing.stamp(packet.target.new_id)
		else:
			packet.rt_target_index = None
		packet.trace.append((at, decision.via))
		packet.hop_count += 1
		at = nxt
