# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Subtree weights and heavy children

The weight of a node is the number of leaves in its subtree.  A child
`v` of `p` is heavy iff :math:`b \\cdot wt(v) \\geq wt(p)`, so every node
has at most `b` heavy children.  The heavy children's ids and ports
are kept sorted by port.
"""
from bisect import bisect_left

from ..errors import ConfigurationError, ProtocolFault
from ..kernel import Message, run_protocol
from .vars import HEAVY, INTERVAL, WT, WT_BCAST, WT_QUERY, WT_REPLY

__all__ = [
	"WEIGHT_MODES",
	"convergecast_weights",
	"build_heavy_intervals",
	"collect_heavy_intervals",
]

WEIGHT_MODES = ("broadcast", "poll")


def _add_heavy(ctx, hid, port):
	v = ctx.vars
	if hid in v.heavy_ids:
		return
	i = bisect_left(v.heavy_ports, port)
	v.heavy_ports.insert(i, port)
	v.heavy_ids.insert(i, hid)
	ctx.charge(2)


def _done(network):
	return all(
		node.vars.wt is not None and node.vars.is_heavy is not None
		for node in network.nodes.values()
	)


def convergecast_weights(network, b, mode="broadcast", policy=None):
	"""Compute weights and heavy children bottom-up

	Parameters
	----------
	network: Network
		The network with a BFS tree.
	b: int
		Heaviness parameter, at least 2.
	mode: str, optional
		``broadcast``: a parent announces its weight on its non-parent
		ports once known and heavy children answer.
		``poll``: children repeat their weight query each round until
		the parent answers.
	policy: optional
		Read-order policy.

	Returns
	-------
	stats: StageStats
	"""
	if b < 2:
		raise ConfigurationError("b must be at least 2, got {0}.".format(b))
	if mode not in WEIGHT_MODES:
		raise ConfigurationError("Unknown weight mode {0!r}.".format(mode))

	def step(ctx):
		v, s = ctx.vars, ctx.scratch
		if ctx.round == 1:
			ctx.charge(2)
			ctx.charge_scratch(2)
			s["acc"] = 0
			s["received"] = 0
		for port, msg in ctx.deliveries():
			if msg.kind == WT:
				s["acc"] += msg.payload[0]
				s["received"] += 1
			elif msg.kind == WT_BCAST and port == v.parent_port:
				v.is_heavy = b * v.wt >= msg.payload[0]
				if v.is_heavy:
					ctx.send(v.parent_port, Message(HEAVY, (ctx.id,)))
			elif msg.kind == HEAVY:
				_add_heavy(ctx, msg.payload[0], port)
			elif msg.kind == WT_QUERY and v.wt is not None:
				# queries before the own weight is known are asked again
				cwt, cid = msg.payload
				heavy = b * cwt >= v.wt
				if heavy:
					_add_heavy(ctx, cid, port)
				ctx.send(port, Message(WT_REPLY, (int(heavy),)))
			elif msg.kind == WT_REPLY and port == v.parent_port:
				if v.is_heavy is None:
					v.is_heavy = bool(msg.payload[0])
		if v.wt is None and s["received"] == v.n_child:
			v.wt = s["acc"] if v.n_child else 1
			if v.parent_port is None:
				v.is_heavy = True
			else:
				ctx.send(v.parent_port, Message(WT, (v.wt,)))
			if mode == "broadcast" and v.n_child:
				ctx.broadcast_except(Message(WT_BCAST, (v.wt,)), [v.parent_port])
		elif mode == "poll" and v.wt is not None and v.is_heavy is None:
			ctx.send(v.parent_port, Message(WT_QUERY, (v.wt, ctx.id)))

	return run_protocol(
		network, step, done=_done, name="weights", policy=policy,
	)


def build_heavy_intervals(node_vars, messages):
	"""Interval table aligned with the heavy ports

	Parameters
	----------
	node_vars: NodeVars
		The node's variables with `heavy_ports` set.
	messages: iterable
		`(port, Message)` pairs of INTERVAL reports.

	Returns
	-------
	table: list of tuple
		`(d, new_id)` of the heavy child on ``heavy_ports[i]``.
	"""
	reported = {
		port: tuple(msg.payload) for port, msg in messages if msg.kind == INTERVAL
	}
	missing = [p for p in node_vars.heavy_ports if p not in reported]
	if missing:
		raise ProtocolFault(
			"No interval reported on heavy ports {0}.".format(missing)
		)
	return [reported[p] for p in node_vars.heavy_ports]


def collect_heavy_intervals(network, policy=None):
	"""Heavy children report their DFS interval to the parent

	Returns
	-------
	stats: StageStats
	"""
	def step(ctx):
		v = ctx.vars
		if ctx.round == 1:
			if v.is_heavy and v.parent_port is not None:
				ctx.send(v.parent_port, Message(INTERVAL, (v.d, v.new_id)))
			return
		v.heavy_intervals = build_heavy_intervals(v, ctx.deliveries())
		ctx.charge(2 * len(v.heavy_intervals))

	return run_protocol(
		network, step, name="intervals", policy=policy, rounds=2,
	)
