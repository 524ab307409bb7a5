# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""BFS spanning tree

The leader floods JOIN.  A node adopts the sender of the first JOIN it
reads as its parent, answers YES and floods JOIN on its other ports.
Every edge carries exactly one message in each direction, so a node
has terminated once `count + n_child` equals its number of live ports.
"""
from ..kernel import Message, run_protocol
from .vars import JOIN, YES

__all__ = ["bfs_tree", "tree_depths"]


def _done(network):
	return all(node.vars.terminated for node in network.nodes.values())


def bfs_tree(network, policy=None):
	"""Build a BFS tree rooted at the leader

	Sets `parent`, `parent_port`, `n_child`, `count`, and the
	instrumentation fields `join_round` and `terminate_round`.

	Returns
	-------
	stats: StageStats
	"""
	def step(ctx):
		v = ctx.vars
		joined = False
		if ctx.round == 1:
			ctx.charge(4)
			if v.is_leader:
				v.join_round = 1
				ctx.broadcast(Message(JOIN, (ctx.id,)))
		for port, msg in ctx.deliveries():
			if msg.kind == JOIN:
				v.count += 1
				if v.join_round is None:
					v.parent = msg.payload[0]
					v.parent_port = port
					v.join_round = ctx.round
					joined = True
			elif msg.kind == YES:
				v.n_child += 1
		if joined:
			ctx.send(v.parent_port, Message(YES))
			ctx.broadcast_except(Message(JOIN, (ctx.id,)), [v.parent_port])
		if (
			not v.terminated
			and v.join_round is not None
			and v.count + v.n_child == ctx.degree
		):
			v.terminated = True
			v.terminate_round = ctx.round

	return run_protocol(network, step, done=_done, name="bfs", policy=policy)


def tree_depths(network):
	"""Depth of every node in the parent-pointer tree"""
	depth = {}
	for nid in network.nodes:
		path = []
		u = nid
		while u not in depth and network.nodes[u].vars.parent is not None:
			path.append(u)
			u = network.nodes[u].vars.parent
		base = depth.get(u, 0)
		depth.setdefault(u, base)
		for i, w in enumerate(reversed(path), 1):
			depth[w] = base + i
	return depth
