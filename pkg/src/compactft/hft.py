# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Full binary and half-full tree labelings

Closed-form neighbourhood queries on the labeled full binary trees
:math:`B(2^x, a)` and the half-full trees :math:`HT([a, b])`.
Every value of :math:`[a, b]` labels exactly one leaf, and every value
of :math:`[a, b - 1]` labels exactly one non-leaf.
The queries use a constant number of integers per halving of the
interval, :class:`HTOracle` builds the trees explicitly for checking.
"""
from collections import namedtuple
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

__all__ = [
	"LEAF",
	"NONLEAF",
	"Decomposition",
	"TreeRef",
	"Neighborhood",
	"SubWillIdx",
	"HTOracle",
	"decompose",
	"label_bt",
	"search_bt",
	"ht_root",
	"search_ht",
	"build_ht_oracle",
	"subwill_indices",
]

LEAF = "leaf"
NONLEAF = "nonleaf"

Decomposition = namedtuple("Decomposition", ["i", "z"])


class TreeRef(NamedTuple):
	"""Reference to a tree node by kind and label"""
	kind: str
	label: int

	@property
	def is_leaf(self):
		return self.kind == LEAF


@dataclass(frozen=True)
class Neighborhood:
	"""Parent of the leaf `query` and parent and children of the non-leaf `query`

	The non-leaf fields are `None` if no non-leaf carries the label, and
	`nonleaf_parent` is `None` for the tree root.
	`frames` counts the loop iterations used to answer the query.
	"""
	query: int
	leaf_parent: Optional[TreeRef] = None
	nonleaf_parent: Optional[TreeRef] = None
	nonleaf_left: Optional[TreeRef] = None
	nonleaf_right: Optional[TreeRef] = None
	frames: int = field(default=1, compare=False)

	@property
	def has_nonleaf(self):
		return self.nonleaf_left is not None


def _is_pow2(size):
	return size > 0 and size & (size - 1) == 0


def _log2(size):
	return size.bit_length() - 1


def decompose(y):
	"""Unique factorization :math:`y + 1 = 2^i (2z + 1)`

	Parameters
	----------
	y: int
		Non-negative integer.

	Returns
	-------
	dec: Decomposition
		The named tuple `(i, z)`.
	"""
	if y < 0:
		raise ValueError("y must be non-negative, got {0}.".format(y))
	y1 = y + 1
	i = (y1 & -y1).bit_length() - 1
	return Decomposition(i, (y1 >> i) >> 1)


def label_bt(h, v_tilde, x):
	"""Label of a node in :math:`B(2^x)`

	Parameters
	----------
	h: int
		Height of the node, leaves have height 0.
	v_tilde: int
		Left-to-right position of the node among the nodes of height `h`.
	x: int
		The tree has :math:`2^x` leaves.

	Returns
	-------
	label: int
		`v_tilde` for leaves, :math:`2^{h-1} - 1 + \\tilde{v} 2^h` otherwise.
	"""
	if not 0 <= h <= x:
		raise ValueError("Height {0} outside [0, {1}].".format(h, x))
	if not 0 <= v_tilde < (1 << (x - h)):
		raise ValueError(
			"Position {0} outside [0, {1}).".format(v_tilde, 1 << (x - h))
		)
	if h == 0:
		return v_tilde
	return (1 << (h - 1)) - 1 + v_tilde * (1 << h)


def _bt_nonleaf(yr, x, a, enclosing):
	"""Parent and children of the non-leaf `a + yr` in B(2^x, a)

	`enclosing` is returned as the parent of the local root.
	"""
	i, z = decompose(yr)
	if i <= x - 2:
		parent = TreeRef(NONLEAF, a + (1 << (i + 1)) - 1 + (z >> 1) * (1 << (i + 2)))
	else:
		parent = enclosing
	if i >= 1:
		base = a + (1 << (i - 1)) - 1
		left = TreeRef(NONLEAF, base + 2 * z * (1 << i))
		right = TreeRef(NONLEAF, base + (2 * z + 1) * (1 << i))
	else:
		left = TreeRef(LEAF, a + yr)
		right = TreeRef(LEAF, a + yr + 1)
	return parent, left, right


def search_bt(y, x, a=0):
	"""Neighbourhood of the label `y` in :math:`B(2^x, a)`

	Parameters
	----------
	y: int
		The queried label, in :math:`[a, a + 2^x - 1]`.
	x: int
		The tree has :math:`2^x` leaves.
	a: int, optional
		Label offset, default 0.

	Returns
	-------
	nb: Neighborhood
	"""
	if x < 0:
		raise ValueError("x must be non-negative, got {0}.".format(x))
	yr = y - a
	if not 0 <= yr < (1 << x):
		raise ValueError(
			"y={0} outside [{1}, {2}].".format(y, a, a + (1 << x) - 1)
		)
	leaf_parent = TreeRef(NONLEAF, a + 2 * (yr // 2)) if x > 0 else None
	if yr > (1 << x) - 2:
		return Neighborhood(y, leaf_parent)
	parent, left, right = _bt_nonleaf(yr, x, a, None)
	return Neighborhood(y, leaf_parent, parent, left, right)


def ht_root(a, b):
	"""Label of the root of :math:`HT([a, b])`

	A leaf for singleton intervals, a non-leaf otherwise.
	"""
	size = b - a + 1
	if size < 1:
		raise ValueError("Empty interval [{0}, {1}].".format(a, b))
	if _is_pow2(size):
		return a if size == 1 else size // 2 - 1 + a
	return (1 << _log2(size)) - 1 + a


def search_ht(y, a, b):
	"""Neighbourhood of the label `y` in :math:`HT([a, b])`

	Walks down the right spine of the half-full tree, keeping only the
	current sub-interval and the label of the enclosing root.

	Parameters
	----------
	y: int
		The queried label, in :math:`[a, b]`.
	a: int
		Lower interval bound.
	b: int
		Upper interval bound.

	Returns
	-------
	nb: Neighborhood
		Non-leaf fields are `None` for ``y == b``.
	"""
	if not a <= y <= b:
		raise ValueError("y={0} outside [{1}, {2}].".format(y, a, b))
	# parent of the leaf y
	lo, enclosing, frames = a, None, 0
	while True:
		frames += 1
		size = b - lo + 1
		if size == 1:
			leaf_parent = enclosing
			break
		if _is_pow2(size):
			leaf_parent = TreeRef(NONLEAF, lo + 2 * ((y - lo) // 2))
			break
		half = 1 << _log2(size)
		if y < lo + half:
			leaf_parent = TreeRef(NONLEAF, lo + 2 * ((y - lo) // 2))
			break
		enclosing = TreeRef(NONLEAF, lo + half - 1)
		lo += half
	if y == b:
		return Neighborhood(y, leaf_parent, frames=frames)
	leaf_frames = frames
	# parent and children of the non-leaf y
	lo, enclosing, frames = a, None, 0
	while True:
		frames += 1
		size = b - lo + 1
		if _is_pow2(size):
			parent, left, right = _bt_nonleaf(y - lo, _log2(size), lo, enclosing)
			break
		half = 1 << _log2(size)
		root = lo + half - 1
		if y < root:
			parent, left, right = _bt_nonleaf(
				y - lo, _log2(half), lo, TreeRef(NONLEAF, root)
			)
			break
		if y == root:
			parent = enclosing
			left = TreeRef(NONLEAF, lo + half // 2 - 1)
			if b == lo + half:
				right = TreeRef(LEAF, b)
			else:
				right = TreeRef(NONLEAF, ht_root(lo + half, b))
			break
		enclosing = TreeRef(NONLEAF, root)
		lo += half
	return Neighborhood(
		y, leaf_parent, parent, left, right, frames=max(leaf_frames, frames),
	)


class HTOracle(object):
	"""Explicitly built half-full tree

	Built literally from the recursive definition: the full binary tree
	:math:`B(2^{x+1}, a)` whose right root subtree is replaced by
	:math:`HT([a + 2^x, b])`.

	Attributes
	----------
	a, b: int
		The interval bounds.
	root: TreeRef
		The root node.
	parent: dict
		Maps each node to its parent (`None` for the root).
	children: dict
		Maps each non-leaf to its `(left, right)` children.
	"""
	def __init__(self, a, b):
		if b < a:
			raise ValueError("Empty interval [{0}, {1}].".format(a, b))
		self.a = a
		self.b = b
		self.parent = {}
		self.children = {}
		self.root = self._build(a, b, None)

	def _build_bt(self, lo, size, parent):
		if size == 1:
			node = TreeRef(LEAF, lo)
			self.parent[node] = parent
			return node
		node = TreeRef(NONLEAF, lo + size // 2 - 1)
		self.parent[node] = parent
		self.children[node] = (
			self._build_bt(lo, size // 2, node),
			self._build_bt(lo + size // 2, size // 2, node),
		)
		return node

	def _build(self, lo, hi, parent):
		size = hi - lo + 1
		if _is_pow2(size):
			return self._build_bt(lo, size, parent)
		half = 1 << _log2(size)
		node = TreeRef(NONLEAF, lo + half - 1)
		self.parent[node] = parent
		self.children[node] = (
			self._build_bt(lo, half, node),
			self._build(lo + half, hi, node),
		)
		return node

	def leaves(self):
		return sorted(n.label for n in self.parent if n.is_leaf)

	def nonleaves(self):
		return sorted(n.label for n in self.children)

	def edges(self):
		"""List of `(parent, child)` node pairs"""
		return [(p, c) for c, p in self.parent.items() if p is not None]

	def node_depth(self, node):
		depth = 0
		while self.parent[node] is not None:
			node = self.parent[node]
			depth += 1
		return depth

	def leaf_depth(self, y):
		return self.node_depth(TreeRef(LEAF, y))

	def depth(self):
		"""Height of the tree, 0 for a single leaf"""
		return max(self.node_depth(n) for n in self.parent)

	def neighborhood(self, y):
		"""Neighbourhood of `y` read off the explicit tree"""
		leaf_parent = self.parent[TreeRef(LEAF, y)]
		node = TreeRef(NONLEAF, y)
		if node not in self.children:
			return Neighborhood(y, leaf_parent)
		left, right = self.children[node]
		return Neighborhood(y, leaf_parent, self.parent[node], left, right)


def build_ht_oracle(a, b):
	"""Explicit :math:`HT([a, b])`, see :class:`HTOracle`"""
	return HTOracle(a, b)


@dataclass(frozen=True)
class SubWillIdx:
	"""Child indices referenced by the subwill of child `child_index`

	The leaf references carry the index of the child itself, the
	non-leaf references the index of the child hosting that non-leaf.
	"""
	child_index: int
	leaf_parent_idx: Optional[int]
	nonleaf_parent_idx: Optional[int] = None
	nonleaf_left_idx: Optional[int] = None
	nonleaf_right_idx: Optional[int] = None
	left_is_leaf: bool = False
	right_is_leaf: bool = False
	dependency_max: int = 0

	def references(self):
		"""Sorted distinct indices other than `child_index`"""
		refs = {
			r for r in (
				self.leaf_parent_idx,
				self.nonleaf_parent_idx,
				self.nonleaf_left_idx,
				self.nonleaf_right_idx,
			)
			if r is not None
		}
		refs.discard(self.child_index)
		return sorted(refs)


def _label(ref):
	return None if ref is None else ref.label


def subwill_indices(k, delta):
	"""Project :func:`search_ht` on :math:`HT([0, \\delta - 1])` to indices

	Parameters
	----------
	k: int
		The child index, in :math:`[0, \\delta - 1]`.
	delta: int
		The number of children.

	Returns
	-------
	idx: SubWillIdx
	"""
	if not 0 <= k < delta:
		raise ValueError("Child index {0} outside [0, {1}).".format(k, delta))
	nb = search_ht(k, 0, delta - 1)
	refs = [
		_label(nb.leaf_parent), _label(nb.nonleaf_parent),
		_label(nb.nonleaf_left), _label(nb.nonleaf_right),
	]
	return SubWillIdx(
		child_index=k,
		leaf_parent_idx=refs[0],
		nonleaf_parent_idx=refs[1],
		nonleaf_left_idx=refs[2],
		nonleaf_right_idx=refs[3],
		left_is_leaf=nb.nonleaf_left is not None and nb.nonleaf_left.is_leaf,
		right_is_leaf=nb.nonleaf_right is not None and nb.nonleaf_right.is_leaf,
		dependency_max=max([k] + [r for r in refs if r is not None]),
	)
