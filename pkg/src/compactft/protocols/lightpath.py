# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Light paths, the second part of the routing labels

The light path of `v` lists, root to `v`, the parent-side port numbers
of the light nodes on the tree path; `light_level` is its length.
:func:`light_paths_big` sends whole paths in :math:`O(\\log^2 n)`-bit
messages, :func:`light_paths_small` floods one port number per message.
"""
from ..errors import ProtocolFault
from ..kernel import Message, parse_policy, run_protocol
from .vars import CHILD_INFO, NO_PORT, PORT_ANNOUNCE, PORT_NUM, RL, ROOT_DONE

__all__ = ["LABEL_VARIANTS", "light_paths_big", "light_paths_small"]

LABEL_VARIANTS = ("big", "small")


def _set_path(ctx, path):
	v = ctx.vars
	v.light_path = list(path)
	v.light_level = len(v.light_path)
	ctx.charge(1 + v.light_level)


def _send_paths(ctx):
	v = ctx.vars
	path = tuple(v.light_path)
	for port in ctx.live_ports():
		if port != v.parent_port:
			ctx.send(port, Message(RL, (path, port)))


def _send_child_paths(ctx):
	"""Send ``RL`` to the children only, reading their reports along `nxt_port`"""
	v = ctx.vars
	path = tuple(v.light_path)
	port, k = v.fst_port, 0
	while port is not None and port != NO_PORT:
		if k >= v.n_child:
			raise ProtocolFault(
				"Node {0}: nxt_port chain longer than {1}.".format(ctx.id, v.n_child)
			)
		msg = ctx.receive(port)
		if msg is None or msg.kind != CHILD_INFO:
			raise ProtocolFault(
				"Node {0}: no child report on port {1}, child {2}.".format(
					ctx.id, port, k,
				)
			)
		ctx.send(port, Message(RL, (path, port)))
		port = msg.payload[1]
		k += 1
	if k != v.n_child:
		raise ProtocolFault(
			"Node {0}: nxt_port chain ended after {1} of {2} children.".format(
				ctx.id, k, v.n_child,
			)
		)


def _extend(ctx, msg):
	v = ctx.vars
	path, x = msg.payload
	_set_path(ctx, path if v.is_heavy else tuple(path) + (x,))
	v.light_done = True


def _done(network):
	return all(node.vars.light_done for node in network.nodes.values())


def light_paths_big(network, policy=None):
	"""Compute light paths top-down with whole paths per message

	A child extends the received ``RL(path, X)`` by `X` iff it is light.
	With deterministic reads every child first reports its `nxt_port`
	to its parent, which then follows the chain from `fst_port` and
	sends ``RL`` to its children only, :math:`2(n - 1)` messages in all.
	Adversarial reads leave the parent no way to single out its child
	ports in compact memory, so every node sends ``RL`` on each
	non-parent port instead, :math:`2m - n + 1` messages.

	Returns
	-------
	stats: StageStats
	"""
	policy = parse_policy(policy) if policy is not None else None
	if policy is not None and policy.adversarial:
		return _light_paths_broadcast(network, policy)

	def step(ctx):
		v, s = ctx.vars, ctx.scratch
		if ctx.round == 1:
			if v.parent_port is None:
				_set_path(ctx, ())
				v.light_done = True
			else:
				ctx.send(v.parent_port, Message(CHILD_INFO, (ctx.id, v.nxt_port)))
			return
		if not v.light_done:
			msg = ctx.receive(v.parent_port)
			if msg is None:
				return
			if msg.kind != RL:
				raise ProtocolFault(
					"Node {0}: {1} instead of RL from the parent.".format(ctx.id, msg.kind)
				)
			_extend(ctx, msg)
		if not s.get("sent"):
			s["sent"] = True
			_send_child_paths(ctx)

	return run_protocol(
		network, step, done=_done, name="labels", policy=policy, reads="pull",
	)


def _light_paths_broadcast(network, policy):
	def step(ctx):
		v = ctx.vars
		if ctx.round == 1 and v.parent_port is None:
			_set_path(ctx, ())
			v.light_done = True
			_send_paths(ctx)
		for port, msg in ctx.deliveries():
			if msg.kind != RL or port != v.parent_port:
				continue
			_extend(ctx, msg)
			_send_paths(ctx)

	return run_protocol(network, step, done=_done, name="labels", policy=policy)


def light_paths_small(network, policy=None):
	"""Compute light paths with one port number per message

	All nodes first exchange their port numbers, then every light node
	floods its parent-side port number into its subtree.  Entries are
	prepended on arrival, the nearest ancestor's arriving first.  The
	root's termination signal is forwarded by all nodes.

	Returns
	-------
	stats: StageStats
	"""
	def step(ctx):
		v = ctx.vars
		if ctx.round == 1:
			for port in ctx.live_ports():
				ctx.send(port, Message(PORT_NUM, (port,)))
			return
		for port, msg in ctx.deliveries():
			if port != v.parent_port:
				continue
			if msg.kind == PORT_NUM:
				if v.is_heavy:
					_set_path(ctx, ())
				else:
					_set_path(ctx, (msg.payload[0],))
					ctx.broadcast_except(
						Message(PORT_ANNOUNCE, msg.payload), [v.parent_port],
					)
			elif msg.kind == PORT_ANNOUNCE:
				v.light_path.insert(0, msg.payload[0])
				v.light_level += 1
				ctx.charge(1)
				ctx.broadcast_except(msg, [v.parent_port])
			elif msg.kind == ROOT_DONE:
				v.light_done = True
				ctx.broadcast_except(msg, [v.parent_port])
		if ctx.round == 2 and v.parent_port is None:
			_set_path(ctx, ())
			v.light_done = True
			ctx.broadcast(Message(ROOT_DONE))

	return run_protocol(network, step, done=_done, name="labels", policy=policy)
