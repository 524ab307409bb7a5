# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Heavy-first DFS walk and post-order renaming

A single token walks the BFS tree.  It carries the next unassigned
label; a node takes the token's value on entry as `d` and on exit as
its `new_id`.  Heavy children are visited first (in port order of
`heavy_ports`), then the light ones by ascending port.  Light children
are not known to the parent, so candidate ports are tried and
non-children bounce the token.  When a child returns and an earlier
sibling exists, the parent spends one round telling that sibling the
port of the next one (`nxt_port`).
"""
from ..errors import ProtocolFault
from ..kernel import Message, run_protocol
from .vars import NO_PORT, NXT_PORT, TOKEN

__all__ = ["DOWN", "UP", "BOUNCE", "dfs_rename"]

DOWN = 0
UP = 1
BOUNCE = 2

# persistent: new_id, d, c, fst_port, nxt_port, child_index, parent_delta
DFS_WORDS = 7
# walk: next id, heavy index, light cursor, children seen, previous child, hold
WALK_WORDS = 6


def _enter(ctx, next_id):
	v, s = ctx.vars, ctx.scratch
	ctx.charge(DFS_WORDS)
	ctx.charge_scratch(WALK_WORDS)
	v.d = next_id
	v.delta = v.n_child
	if v.child_index is not None and v.child_index == v.parent_delta - 1:
		v.nxt_port = NO_PORT
	s.update(nid=next_id, heavy_i=0, cursor=-1, children=0, prev=None, hold=False)


def _next_light(ctx):
	v, s = ctx.vars, ctx.scratch
	for port in ctx.live_ports():
		if port <= s["cursor"] or port == v.parent_port or port in v.heavy_ports:
			continue
		return port
	return None


def _send_down(ctx, port):
	v, s = ctx.vars, ctx.scratch
	ctx.send(port, Message(TOKEN, (s["nid"], DOWN, s["children"], v.n_child)))


def _advance(ctx):
	v, s = ctx.vars, ctx.scratch
	if s["children"] < v.n_child:
		if s["heavy_i"] < len(v.heavy_ports):
			port = v.heavy_ports[s["heavy_i"]]
			s["heavy_i"] += 1
			_send_down(ctx, port)
			return
		if v.c is None:
			v.c = s["nid"]
		port = _next_light(ctx)
		if port is None:
			raise ProtocolFault(
				"Node {0} found {1} of {2} children.".format(
					ctx.id, s["children"], v.n_child,
				)
			)
		s["cursor"] = port
		_send_down(ctx, port)
		return
	if v.c is None:
		v.c = s["nid"]
	v.new_id = s["nid"]
	if v.parent_port is not None:
		ctx.send(v.parent_port, Message(TOKEN, (v.new_id + 1, UP, 0, 0)))


def _done(network):
	return all(node.vars.new_id is not None for node in network.nodes.values())


def dfs_rename(network, policy=None):
	"""Assign post-order labels 1..n along a heavy-first DFS

	Sets `new_id`, `d`, `c`, `delta`, `fst_port`, `nxt_port`,
	`child_index` and `parent_delta`.  Runs lazily, only nodes holding
	input or the token are stepped.

	Returns
	-------
	stats: StageStats
	"""
	def step(ctx):
		v, s = ctx.vars, ctx.scratch
		if ctx.round == 1 and v.is_leader:
			_enter(ctx, 1)
			_advance(ctx)
			return
		if s.get("hold"):
			s["hold"] = False
			_advance(ctx)
		for port, msg in ctx.deliveries():
			if msg.kind == NXT_PORT:
				v.nxt_port = msg.payload[0]
				continue
			next_id, direction, index, delta = msg.payload
			if direction == DOWN:
				if port == v.parent_port and v.d is None:
					v.child_index = index
					v.parent_delta = delta
					_enter(ctx, next_id)
					_advance(ctx)
				else:
					ctx.send(port, Message(TOKEN, (next_id, BOUNCE, 0, 0)))
			elif direction == UP:
				s["nid"] = next_id
				s["children"] += 1
				if s["prev"] is None:
					v.fst_port = port
					_advance(ctx)
				else:
					ctx.send(s["prev"], Message(NXT_PORT, (port,)))
					s["hold"] = True
					ctx.stay_awake()
				s["prev"] = port
			else:
				_advance(ctx)

	leaders = [nid for nid, node in network.nodes.items() if node.vars.is_leader]
	return run_protocol(
		network, step, done=_done, name="dfs", policy=policy,
		lazy=True, wake=leaders,
	)
