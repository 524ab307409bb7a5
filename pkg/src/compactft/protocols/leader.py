# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Leader election by flooding

Every node keeps the largest id seen so far (two words) and forwards it
whenever it improves.  With simultaneous wakeup and a known bound on
the diameter, all nodes agree on the maximum id after `D + 1` rounds.
"""
from ..kernel import Message, run_protocol
from .vars import LEADER

__all__ = ["leader_election"]


def leader_election(network, d_known, policy=None):
	"""Elect the node with the largest id

	Parameters
	----------
	network: Network
		The network, node variables are updated in place.
	d_known: int
		Upper bound on the diameter known to all nodes.
	policy: optional
		Read-order policy.

	Returns
	-------
	stats: StageStats
	"""
	if d_known < 0:
		raise ValueError("d_known must be non-negative, got {0}.".format(d_known))

	def step(ctx):
		v = ctx.vars
		improved = False
		if ctx.round == 1:
			ctx.charge(2)
			v.leader_id = ctx.id
			improved = True
		for _, msg in ctx.deliveries():
			if msg.kind == LEADER and msg.payload[0] > v.leader_id:
				v.leader_id = msg.payload[0]
				improved = True
		v.is_leader = v.leader_id == ctx.id
		if improved and ctx.round <= d_known:
			ctx.broadcast(Message(LEADER, (v.leader_id,)))

	return run_protocol(
		network, step, name="leader", policy=policy, rounds=d_known + 1,
	)
