# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Will distribution

The Will of a node `x` with :math:`\\delta` children is the half-full
tree :math:`HT([0, \\delta - 1])` with every label replaced by the id of
the child with that index (children ordered along the DFS visit).
Child `k` receives its subwill: the parent of leaf `k` and the parent
and children of non-leaf `k`.
"""
from dataclasses import dataclass

from ..errors import ProtocolFault
from ..hft import subwill_indices
from ..kernel import Message, run_protocol
from .vars import CHILD_INFO, NO_PORT, SUBWILL, WILL_REQ, SubWill

__all__ = [
	"WILL_VARIANTS",
	"NODE_SLOT_WORDS",
	"WILL_SLOT_WORDS",
	"make_subwill",
	"resolve_subwill",
	"distribute_wills_one_round",
	"distribute_wills_adversarial",
]

WILL_VARIANTS = ("one_round", "adversarial")
# id of the child just read
NODE_SLOT_WORDS = 1
# port, dependency bound, index, own id and up to three pending ids
WILL_SLOT_WORDS = 7


def make_subwill(idx, delta):
	"""Unresolved :class:`SubWill` from :class:`~compactft.hft.SubWillIdx`"""
	return SubWill(
		idx.child_index, delta,
		leaf_parent_idx=idx.leaf_parent_idx,
		nonleaf_parent_idx=idx.nonleaf_parent_idx,
		nonleaf_left_idx=idx.nonleaf_left_idx,
		nonleaf_right_idx=idx.nonleaf_right_idx,
		left_is_leaf=idx.left_is_leaf,
		right_is_leaf=idx.right_is_leaf,
	)


def resolve_subwill(will, index, nid):
	"""Fill in `nid` wherever `will` references child `index`"""
	if will.leaf_parent_idx == index:
		will.leaf_parent = nid
	if will.nonleaf_parent_idx == index:
		will.nonleaf_parent = nid
	if will.nonleaf_left_idx == index:
		will.nonleaf_left = nid
	if will.nonleaf_right_idx == index:
		will.nonleaf_right = nid
	return will


def _store_subwill(ctx, msg):
	v = ctx.vars
	if v.subwill is None:
		v.subwill = SubWill.from_payload(msg.payload, v.parent_delta)
		ctx.charge(msg.words)


@dataclass
class _WillSlot:
	"""Partial subwill of child `index`, which also keeps that child's id

	References are symmetric in the half-full tree, so child `index`
	is needed by later subwills exactly as long as its own subwill
	waits for them.
	"""
	will: SubWill
	port: int
	dependency_max: int
	index: int
	nid: int


def _compute_wills(ctx):
	"""Follow the nxt_port chain and send all subwills in one round

	Ids of children still referenced by later subwills live in the
	pending Will slots, only the id just read is held as a plain id.
	"""
	v = ctx.vars
	delta = v.n_child
	will_slots = {}
	peak = 0
	plain = plain_peak = 0

	def send_will(slot):
		ctx.send(slot.port, Message(SUBWILL, slot.will.payload()))

	port, k = v.fst_port, 0
	while port is not None and port != NO_PORT:
		if k >= delta:
			raise ProtocolFault(
				"Node {0}: nxt_port chain longer than {1}.".format(ctx.id, delta)
			)
		msg = ctx.receive(port)
		if msg is None or msg.kind != CHILD_INFO:
			raise ProtocolFault(
				"Node {0}: broken nxt_port chain at port {1}, child {2}.".format(
					ctx.id, port, k,
				)
			)
		cid, nxt = msg.payload
		ctx.charge_scratch(NODE_SLOT_WORDS)
		plain += 1
		plain_peak = max(plain_peak, plain)
		idx = subwill_indices(k, delta)
		slot = _WillSlot(make_subwill(idx, delta), port, idx.dependency_max, k, cid)
		resolve_subwill(slot.will, k, cid)
		for j in idx.references():
			if j > k:
				continue
			older = will_slots[j]
			resolve_subwill(slot.will, j, older.nid)
			resolve_subwill(older.will, k, cid)
			if older.dependency_max == k:
				send_will(older)
				del will_slots[j]
				ctx.release_scratch(WILL_SLOT_WORDS)
		if idx.dependency_max == k:
			send_will(slot)
		else:
			will_slots[k] = slot
			ctx.charge_scratch(WILL_SLOT_WORDS)
		peak = max(peak, len(will_slots) + plain)
		ctx.release_scratch(NODE_SLOT_WORDS)
		plain -= 1
		port = nxt
		k += 1
	if k != delta or will_slots:
		raise ProtocolFault(
			"Node {0}: nxt_port chain ended after {1} of {2} children.".format(
				ctx.id, k, delta,
			)
		)
	v.will_peak_slots = peak
	v.will_node_slots = plain_peak


def _done(network):
	return all(
		node.vars.subwill is not None or node.vars.parent_port is None
		for node in network.nodes.values()
	)


def distribute_wills_one_round(network):
	"""Distribute the subwills with deterministic reads

	Round 1, parents request their children's info; round 2, children
	answer with their id and `nxt_port`; round 3, every parent reads its
	children along the `nxt_port` chain and sends all subwills; round 4,
	children store them.  Needs the pull interface.

	Returns
	-------
	stats: StageStats
	"""
	def step(ctx):
		v = ctx.vars
		if ctx.round == 1:
			if v.n_child:
				ctx.broadcast_except(
					Message(WILL_REQ, (v.d, v.new_id, v.n_child)), [v.parent_port],
				)
		elif ctx.round == 2:
			if v.parent_port is None:
				return
			msg = ctx.receive(v.parent_port)
			if msg is not None and msg.kind == WILL_REQ:
				ctx.send(v.parent_port, Message(CHILD_INFO, (ctx.id, v.nxt_port)))
		elif ctx.round == 3:
			if v.n_child:
				_compute_wills(ctx)
		elif v.parent_port is not None:
			msg = ctx.receive(v.parent_port)
			if msg is not None and msg.kind == SUBWILL:
				_store_subwill(ctx, msg)

	return run_protocol(network, step, name="wills", reads="pull", rounds=4)


def distribute_wills_adversarial(network, policy=None):
	"""Distribute the subwills one per round under any read order

	Child `k` repeats its id and index from round 1 until the last round
	a subwill needs them, :math:`1 + \\max(k, \\text{referenced indices})`.
	In round `j + 2` the parent keeps only the ids subwill `j` needs and
	sends it.  A parent finishes after :math:`\\delta + 1` rounds.

	Returns
	-------
	stats: StageStats
	"""
	def step(ctx):
		v, s = ctx.vars, ctx.scratch
		if ctx.round == 1 and v.parent_port is not None:
			ctx.charge_scratch(1)
			s["last"] = subwill_indices(v.child_index, v.parent_delta).dependency_max + 1
		j = ctx.round - 2
		wanted = None
		if 0 <= j < v.n_child:
			idx = subwill_indices(j, v.n_child)
			wanted = set(idx.references()) | {j}
			will = make_subwill(idx, v.n_child)
			target = None
			kept = 0
		for port, msg in ctx.deliveries():
			if msg.kind == SUBWILL and port == v.parent_port:
				_store_subwill(ctx, msg)
			elif msg.kind == CHILD_INFO and wanted is not None:
				cid, index = msg.payload
				if index not in wanted:
					continue
				ctx.charge(1)
				kept += 1
				resolve_subwill(will, index, cid)
				if index == j:
					target = port
		if wanted is not None:
			if target is None or kept != len(wanted):
				raise ProtocolFault(
					"Node {0}: ids for subwill {1} missing in round {2}.".format(
						ctx.id, j, ctx.round,
					)
				)
			ctx.send(target, Message(SUBWILL, will.payload()))
			ctx.release(kept)
			v.will_peak_slots = max(v.will_peak_slots, kept)
		if v.parent_port is not None and ctx.round <= s["last"]:
			ctx.send(v.parent_port, Message(CHILD_INFO, (ctx.id, v.child_index)))

	return run_protocol(
		network, step, done=_done, name="wills", policy=policy,
	)
