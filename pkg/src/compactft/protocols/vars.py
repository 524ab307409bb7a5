# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Node variables and message kinds shared by the protocols
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

__all__ = [
	"NO_PORT",
	"LEADER",
	"JOIN",
	"YES",
	"WT",
	"WT_BCAST",
	"HEAVY",
	"WT_QUERY",
	"WT_REPLY",
	"TOKEN",
	"NXT_PORT",
	"INTERVAL",
	"RL",
	"PORT_NUM",
	"PORT_ANNOUNCE",
	"ROOT_DONE",
	"WILL_REQ",
	"CHILD_INFO",
	"SUBWILL",
	"NodeVars",
	"SubWill",
]

# nxt_port of the last child
NO_PORT = -1

LEADER = "LEADER"
JOIN = "JOIN"
YES = "YES"
WT = "WT"
WT_BCAST = "WT_BCAST"
HEAVY = "HEAVY"
WT_QUERY = "WT_QUERY"
WT_REPLY = "WT_REPLY"
TOKEN = "TOKEN"
NXT_PORT = "NXT_PORT"
INTERVAL = "INTERVAL"
RL = "RL"
PORT_NUM = "PORT_NUM"
PORT_ANNOUNCE = "PORT_ANNOUNCE"
ROOT_DONE = "ROOT_DONE"
WILL_REQ = "WILL_REQ"
CHILD_INFO = "CHILD_INFO"
SUBWILL = "SUBWILL"


@dataclass
class SubWill:
	"""Subwill with child ids resolved

	The `*_idx` fields are child indices in :math:`HT([0, \\delta - 1])`,
	the plain fields the ids of the children with these indices.
	"""
	index: int
	delta: int
	leaf_parent: Optional[int] = None
	leaf_parent_idx: Optional[int] = None
	nonleaf_parent: Optional[int] = None
	nonleaf_parent_idx: Optional[int] = None
	nonleaf_left: Optional[int] = None
	nonleaf_left_idx: Optional[int] = None
	nonleaf_right: Optional[int] = None
	nonleaf_right_idx: Optional[int] = None
	left_is_leaf: bool = False
	right_is_leaf: bool = False

	def payload(self):
		flags = int(self.left_is_leaf) | (int(self.right_is_leaf) << 1)
		return (
			self.index,
			self.leaf_parent_idx, self.leaf_parent,
			self.nonleaf_parent_idx, self.nonleaf_parent,
			self.nonleaf_left_idx, self.nonleaf_left,
			self.nonleaf_right_idx, self.nonleaf_right,
			flags,
		)

	@classmethod
	def from_payload(cls, payload, delta):
		(
			index, lp_idx, lp, np_idx, np_, l_idx, l_, r_idx, r_, flags,
		) = payload
		return cls(
			index, delta,
			leaf_parent=lp, leaf_parent_idx=lp_idx,
			nonleaf_parent=np_, nonleaf_parent_idx=np_idx,
			nonleaf_left=l_, nonleaf_left_idx=l_idx,
			nonleaf_right=r_, nonleaf_right_idx=r_idx,
			left_is_leaf=bool(flags & 1),
			right_is_leaf=bool(flags & 2),
		)

	@property
	def has_nonleaf(self):
		return self.nonleaf_left_idx is not None


@dataclass
class NodeVars:
	"""Compact per-node state written by the preprocessing stages"""
	# leader election
	leader_id: Optional[int] = None
	is_leader: bool = False
	# BFS tree
	parent: Optional[int] = None
	parent_port: Optional[int] = None
	n_child: int = 0
	count: int = 0
	join_round: Optional[int] = None
	terminated: bool = False
	terminate_round: Optional[int] = None
	# weights
	wt: Optional[int] = None
	is_heavy: Optional[bool] = None
	heavy_ids: List[int] = field(default_factory=list)
	heavy_ports: List[int] = field(default_factory=list)
	heavy_intervals: List[Tuple[int, int]] = field(default_factory=list)
	# DFS renaming
	new_id: Optional[int] = None
	d: Optional[int] = None
	c: Optional[int] = None
	fst_port: Optional[int] = None
	nxt_port: Optional[int] = None
	delta: int = 0
	child_index: Optional[int] = None
	parent_delta: Optional[int] = None
	# routing label
	light_path: Optional[List[int]] = None
	light_level: int = 0
	light_done: bool = False
	# will
	subwill: Optional[SubWill] = None
	will_peak_slots: int = 0
	will_node_slots: int = 0

	def interval(self):
		"""The DFS label interval of the node's subtree"""
		return self.d, self.new_id
