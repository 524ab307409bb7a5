# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Compact message passing kernel

Synchronous rounds over a port-numbered network.  Every port has one
in-buffer and one out-buffer.  At the start of a round the out-buffers
are moved into the paired in-buffers (overwriting unread content), then
each node's handler runs and may read and write each of its ports at
most once.  Reads clear the buffer.

Handlers either pull ports in their own order (deterministic reads) or
consume the stream produced by a read-order policy (adversarial reads).
Node memory is metered in words of :math:`w = \\lceil \\log_2 n \\rceil`
bits.
"""
from dataclasses import dataclass, field
from logging import debug, warning as warn
from typing import List, Optional

import numpy as np

from .errors import (
	AccountingFault,
	BudgetFault,
	CompactFTError,
	ConfigurationError,
	ProtocolFault,
	SimulationFault,
)
from .graphs import check_connected, check_simple

__all__ = [
	"KIND_BITS",
	"SMALL_MESSAGE_WORDS",
	"DEFAULT_BUDGET_MULT",
	"Message",
	"MemoryMeter",
	"Node",
	"Network",
	"NodeContext",
	"RoundReport",
	"StageStats",
	"NodeChosen",
	"RandomAdversary",
	"StrongAdversary",
	"parent_last",
	"parse_policy",
	"word_size",
	"build_network",
	"run_round",
	"run_protocol",
	"next_delivery",
	"send",
	"broadcast",
	"broadcast_except",
	"receive",
	"charge",
	"release",
	"checkpoint",
	"drain",
	"set_memory_budget",
	"port_audit",
]

# bits of the message kind tag
KIND_BITS = 8
# payload words of an O(log n) message
SMALL_MESSAGE_WORDS = 12
# memory budget in units of w^2 bits
DEFAULT_BUDGET_MULT = 64


def word_size(n, max_id=0):
	"""Bits per word, :math:`\\max(\\lceil\\log_2 n\\rceil, \\lceil\\log_2(id_{max} + 1)\\rceil, 1)`"""
	return max(1, (n - 1).bit_length(), int(max_id).bit_length())


def _payload_words(item):
	if item is None:
		return 0
	if isinstance(item, (tuple, list)):
		return sum(1 for x in item if x is not None)
	return 1


@dataclass(frozen=True)
class Message:
	"""A tagged message

	Each id, port or counter in the payload costs one word, a sequence
	one word per entry, `None` nothing.
	"""
	kind: str
	payload: tuple = ()

	@property
	def words(self):
		return sum(_payload_words(p) for p in self.payload)

	def bit_size(self, word_bits):
		return KIND_BITS + self.words * word_bits


@dataclass
class MemoryMeter:
	"""Per-node memory account in words"""
	node: int
	word_bits: int
	budget_words: int
	current_words: int = 0
	peak_words: int = 0
	phase: Optional[str] = None


def checkpoint(meter):
	"""Raise :class:`BudgetFault` if the meter exceeds its budget"""
	if meter.current_words > meter.budget_words:
		raise BudgetFault(
			"Node {0} uses {1} words, budget {2} words, phase {3}.".format(
				meter.node, meter.current_words, meter.budget_words, meter.phase,
			),
			node=meter.node,
			phase=meter.phase,
			used=meter.current_words,
			budget=meter.budget_words,
		)


def charge(meter, words):
	"""Account `words` more words, then :func:`checkpoint`"""
	if words < 0:
		raise ValueError("Cannot charge {0} words.".format(words))
	meter.current_words += words
	meter.peak_words = max(meter.peak_words, meter.current_words)
	checkpoint(meter)


def release(meter, words):
	if words < 0:
		raise ValueError("Cannot release {0} words.".format(words))
	if words > meter.current_words:
		raise AccountingFault(
			"Node {0} releases {1} words but holds {2}.".format(
				meter.node, words, meter.current_words,
			)
		)
	meter.current_words -= words


class Node(object):
	"""Simulated node

	Attributes
	----------
	id: int
		The unique node id.
	ports: dict
		Live ports, maps port to `(neighbour id, neighbour port)`.
	in_buf, out_buf: dict
		Non-empty buffers by port.
	read_ports, written_ports: set
		Ports used in the current round.
	meter: MemoryMeter
		The node's memory account.
	vars:
		The protocol variables.
	scratch: dict
		Stage-local working variables, dropped after each stage.
	"""
	def __init__(self, nid, meter, node_vars=None):
		self.id = nid
		self.ports = {}
		self.in_buf = {}
		self.out_buf = {}
		self.read_ports = set()
		self.written_ports = set()
		self.meter = meter
		self.vars = node_vars
		self.scratch = {}
		self.scratch_words = 0
		self.awake = False

	@property
	def degree(self):
		return len(self.ports)

	def live_ports(self):
		return sorted(self.ports)

	def __repr__(self):
		return "Node({0}, ports={1})".format(self.id, self.live_ports())


class Network(object):
	"""Port-mapped network plus round and message counters

	Attributes
	----------
	nodes: dict
		Maps node id to :class:`Node`.
	word_bits: int
		Bits per word.
	strict: bool
		Raise on double reads or writes and dead ports if `True`,
		otherwise count them in `violations`.
	max_message_bits: int
		Largest message that may be sent.
	transcript: list or None
		`(round, node, port, kind, payload)` for every write if recording.
	healing:
		The healed overlay after a deletion, `None` before.
	"""
	def __init__(
		self, nodes, word_bits, strict=True, record=False, max_message_bits=None,
	):
		self.nodes = nodes
		self.word_bits = word_bits
		self.strict = strict
		self.max_message_bits = (
			max_message_bits if max_message_bits is not None
			else KIND_BITS + (SMALL_MESSAGE_WORDS + word_bits) * word_bits
		)
		self.transcript = [] if record else None
		self.round_counter = 0
		self.message_counter = 0
		self.violations = 0
		self.stage_origin = 0
		self.phase = None
		self.healing = None

	@property
	def n(self):
		return len(self.nodes)

	@property
	def m(self):
		return sum(node.degree for node in self.nodes.values()) // 2

	@property
	def max_degree(self):
		return max((node.degree for node in self.nodes.values()), default=0)

	def edges(self):
		"""Sorted `(u, v)` pairs with ``u < v``"""
		return sorted({
			(min(u, v), max(u, v))
			for u, node in self.nodes.items()
			for v, _ in node.ports.values()
		})

	def neighbor(self, nid, port):
		return self.nodes[nid].ports[port][0]

	def quiescent(self):
		"""No message waits to be delivered"""
		return not any(node.out_buf for node in self.nodes.values())

	def __repr__(self):
		return "Network(n={0}, m={1}, round={2})".format(
			self.n, self.m, self.round_counter,
		)


def _port_numbers(ids, edges, port_assignment, seed):
	degree = dict.fromkeys(ids, 0)
	for u, v in edges:
		degree[u] += 1
		degree[v] += 1
	if port_assignment == "contiguous":
		return {u: list(range(d)) for u, d in degree.items()}
	if port_assignment == "gapped":
		rng = np.random.default_rng(seed)
		return {
			u: sorted(int(p) for p in rng.choice(2 * d, d, replace=False)) if d else []
			for u, d in sorted(degree.items())
		}
	raise ConfigurationError(
		"Unknown port assignment {0!r}.".format(port_assignment)
	)


def build_network(
	edges,
	port_assignment="contiguous",
	seed=None,
	nodes=None,
	strict=True,
	budget_mult=DEFAULT_BUDGET_MULT,
	record=False,
	max_message_bits=None,
	vars_factory=None,
):
	"""Build a network from an edge list

	Parameters
	----------
	edges: list of tuple
		`(u, v)` pairs of a connected simple graph.
	port_assignment: str, optional
		``contiguous`` numbers each node's ports 0..deg-1 in edge order,
		``gapped`` draws them from 0..2 deg-1 with `seed`, leaving dead
		ports in between.
	seed: int, optional
		Seed for the gapped assignment.
	nodes: iterable, optional
		Additional node ids, e.g. for the single node network.
	strict: bool, optional
		Fault on contract violations (default) or count them.
	budget_mult: float, optional
		Memory budget per node in units of :math:`w^2` bits.
	record: bool, optional
		Record a transcript of all writes.
	max_message_bits: int, optional
		Message size budget, defaults to
		:math:`8 + (12 + w) w` bits.
	vars_factory: callable, optional
		Creates the per-node variables,
		defaults to :class:`compactft.protocols.NodeVars`.

	Returns
	-------
	network: Network
	"""
	if vars_factory is None:
		from .protocols.vars import NodeVars as vars_factory
	edges = [(int(u), int(v)) for u, v in edges]
	check_simple(edges)
	check_connected(edges, nodes)
	ids = sorted(set(nodes or ()) | {u for e in edges for u in e})
	if port_assignment == "gapped" and seed is None:
		raise ConfigurationError("Gapped port assignment needs a seed.")
	w = word_size(len(ids), max(ids))
	budget_words = int(budget_mult * w * w) // w
	net_nodes = {
		u: Node(u, MemoryMeter(u, w, budget_words), vars_factory())
		for u in ids
	}
	numbers = _port_numbers(ids, edges, port_assignment, seed)
	used = dict.fromkeys(ids, 0)
	for u, v in edges:
		pu = numbers[u][used[u]]
		pv = numbers[v][used[v]]
		used[u] += 1
		used[v] += 1
		net_nodes[u].ports[pu] = (v, pv)
		net_nodes[v].ports[pv] = (u, pu)
	network = Network(
		net_nodes, w, strict=strict, record=record,
		max_message_bits=max_message_bits,
	)
	debug(
		"built network n=%d m=%d w=%d budget=%d words",
		network.n, network.m, w, budget_words,
	)
	return network


def port_audit(network):
	"""List `(node, port)` entries violating the port involution"""
	bad = []
	for u, node in sorted(network.nodes.items()):
		for p, (v, q) in sorted(node.ports.items()):
			other = network.nodes.get(v)
			if other is None or other.ports.get(q) != (u, p):
				bad.append((u, p))
	return bad


def set_memory_budget(network, bits):
	"""Set every node's memory budget to `bits` bits"""
	for node in network.nodes.values():
		node.meter.budget_words = int(bits) // node.meter.word_bits


def drain(network):
	"""Discard all buffered messages, returns their number"""
	count = 0
	for node in network.nodes.values():
		count += len(node.in_buf) + len(node.out_buf)
		node.in_buf.clear()
		node.out_buf.clear()
	return count


# read-order policies

class NodeChosen(object):
	"""Deterministic reads, ascending ports when streamed"""
	adversarial = False

	def order(self, network, node, pending):
		return list(pending)

	def __repr__(self):
		return "node"


class RandomAdversary(object):
	"""Uniform random permutation per node and round

	The permutation only depends on `(seed, round, node id)`.
	"""
	adversarial = True

	def __init__(self, seed):
		self.seed = int(seed)

	def order(self, network, node, pending):
		rng = np.random.default_rng((self.seed, network.round_counter, node.id))
		return [pending[i] for i in rng.permutation(len(pending))]

	def __repr__(self):
		return "rand:{0}".format(self.seed)


class StrongAdversary(object):
	"""Adversary with full knowledge of the node state

	Parameters
	----------
	strategy: callable
		Called as ``strategy(vars, pending)`` with `pending` a dict
		port -> message, returns the delivery order of the ports.
	"""
	adversarial = True

	def __init__(self, strategy):
		self.strategy = strategy

	def order(self, network, node, pending):
		msgs = {p: node.in_buf[p] for p in pending}
		ports = [int(p) for p in self.strategy(node.vars, msgs)]
		if sorted(ports) != list(pending):
			raise SimulationFault(
				"Adversary order {0} is not a permutation of {1}.".format(
					ports, list(pending),
				)
			)
		return ports

	def __repr__(self):
		return "strong"


def parent_last(node_vars, pending):
	"""Descending ports, the parent port last"""
	parent_port = getattr(node_vars, "parent_port", None)
	ports = sorted(pending, reverse=True)
	if parent_port in pending:
		ports.remove(parent_port)
		ports.append(parent_port)
	return ports


def parse_policy(name):
	"""Read-order policy from ``node``, ``rand:SEED`` or ``strong``"""
	if not isinstance(name, str):
		return name
	if name == "node":
		return NodeChosen()
	if name == "strong":
		return StrongAdversary(parent_last)
	if name.startswith("rand:"):
		try:
			return RandomAdversary(int(name[5:]))
		except ValueError:
			pass
	raise ConfigurationError(
		"Unknown read policy {0!r}, use node, rand:SEED or strong.".format(name)
	)


# primitives

def _violation(ctx, text):
	network = ctx.network
	if network.strict:
		raise SimulationFault(
			"Round {0}, node {1}: {2}.".format(network.round_counter, ctx.id, text)
		)
	network.violations += 1
	warn("round %d, node %d: %s", network.round_counter, ctx.id, text)


def receive(ctx, port):
	"""Read and clear the in-buffer of `port`

	Returns
	-------
	msg: Message or None
		`None` for an empty buffer.
	"""
	node = ctx.node
	if port not in node.ports:
		_violation(ctx, "read on dead port {0}".format(port))
		return None
	if port in node.read_ports:
		_violation(ctx, "second read on port {0}".format(port))
		return None
	node.read_ports.add(port)
	ctx.reads += 1
	return node.in_buf.pop(port, None)


def send(ctx, port, msg):
	"""Write `msg` to the out-buffer of `port`

	Returns `True` if the message was written.
	"""
	network, node = ctx.network, ctx.node
	if port not in node.ports:
		_violation(ctx, "write on dead port {0}".format(port))
		return False
	if port in node.written_ports:
		_violation(ctx, "second write on port {0}".format(port))
		return False
	bits = msg.bit_size(network.word_bits)
	if bits > network.max_message_bits:
		raise BudgetFault(
			"Node {0}: {1} message of {2} bits exceeds {3} bits.".format(
				node.id, msg.kind, bits, network.max_message_bits,
			),
			node=node.id, phase=network.phase,
			used=bits, budget=network.max_message_bits,
		)
	node.written_ports.add(port)
	node.out_buf[port] = msg
	network.message_counter += 1
	ctx.writes += 1
	ctx.max_bits = max(ctx.max_bits, bits)
	if network.transcript is not None:
		network.transcript.append(
			(network.round_counter, node.id, port, msg.kind, msg.payload)
		)
	return True


def broadcast(ctx, msg):
	"""Send `msg` on every live port"""
	for port in ctx.node.live_ports():
		send(ctx, port, msg)


def broadcast_except(ctx, msg, excluded):
	"""Send `msg` on every live port not in `excluded`

	`excluded` is either a small list of ports, held in node memory
	while broadcasting, or a predicate on ports.
	"""
	if callable(excluded):
		skip = excluded
		held = 0
	else:
		excluded = list(excluded)
		held = len(excluded)
		charge(ctx.node.meter, held)
		skip = excluded.__contains__
	for port in ctx.node.live_ports():
		if not skip(port):
			send(ctx, port, msg)
	release(ctx.node.meter, held)


def next_delivery(policy, ctx):
	"""Next `(port, message)` of the node's read stream

	Every in-buffer that is non-empty at the start of the handler is
	delivered at most once per round in the order chosen by `policy`;
	ports already read by the handler are skipped.

	Returns
	-------
	item: tuple or None
		`None` at the end of the stream.
	"""
	node = ctx.node
	if ctx._stream is None:
		pending = sorted(p for p in node.in_buf if p not in node.read_ports)
		if len(pending) > 1:
			pending = policy.order(ctx.network, node, pending)
		ctx._stream = iter(pending)
	for port in ctx._stream:
		if port in node.in_buf and port not in node.read_ports:
			return port, receive(ctx, port)
	return None


class NodeContext(object):
	"""Handler view of one node during one round"""
	def __init__(self, network, node, policy, reads="stream"):
		self.network = network
		self.node = node
		self.policy = policy
		self.read_mode = reads
		self.reads = 0
		self.writes = 0
		self.max_bits = 0
		self._stream = None

	@property
	def id(self):
		return self.node.id

	@property
	def vars(self):
		return self.node.vars

	@property
	def scratch(self):
		return self.node.scratch

	@property
	def meter(self):
		return self.node.meter

	@property
	def round(self):
		"""Round number relative to the start of the running stage"""
		return self.network.round_counter - self.network.stage_origin

	@property
	def degree(self):
		return self.node.degree

	def live_ports(self):
		return self.node.live_ports()

	def receive(self, port):
		return receive(self, port)

	def send(self, port, msg):
		return send(self, port, msg)

	def broadcast(self, msg):
		broadcast(self, msg)

	def broadcast_except(self, msg, excluded):
		broadcast_except(self, msg, excluded)

	def deliveries(self):
		"""Iterate the read stream, see :func:`next_delivery`"""
		if self.read_mode == "pull":
			raise ConfigurationError("Pull protocols cannot use the read stream.")
		while True:
			item = next_delivery(self.policy, self)
			if item is None:
				return
			yield item

	def charge(self, words):
		charge(self.node.meter, words)

	def release(self, words):
		release(self.node.meter, words)

	def charge_scratch(self, words):
		"""Charge stage-local memory, released when the stage ends"""
		charge(self.node.meter, words)
		self.node.scratch_words += words

	def release_scratch(self, words):
		release(self.node.meter, words)
		self.node.scratch_words -= words

	def stay_awake(self):
		"""Step the node in the next round even without input (lazy rounds)"""
		self.node.awake = True


@dataclass
class RoundReport:
	round: int
	messages_delivered: int = 0
	reads: int = 0
	writes: int = 0
	max_message_bits: int = 0


def run_round(network, step, policy=None, reads="stream", lazy=False):
	"""Run one synchronous round

	Parameters
	----------
	network: Network
		The network, modified in place.
	step: callable
		The node handler, called as ``step(ctx)`` with a
		:class:`NodeContext` for each node in ascending id order.
	policy: optional
		Read-order policy, default :class:`NodeChosen`.
	reads: str, optional
		``stream`` if the handler consumes :meth:`NodeContext.deliveries`,
		``pull`` if it reads ports itself.
	lazy: bool, optional
		Only step nodes with input or that asked to stay awake.

	Returns
	-------
	report: RoundReport
	"""
	if policy is None:
		policy = NodeChosen()
	if reads not in ("stream", "pull"):
		raise ConfigurationError("Unknown read mode {0!r}.".format(reads))
	if reads == "pull" and policy.adversarial:
		raise ConfigurationError(
			"Policy {0!r} needs a streaming protocol.".format(policy)
		)
	network.round_counter += 1
	report = RoundReport(network.round_counter)
	nodes = network.nodes
	for node in nodes.values():
		for port, msg in node.out_buf.items():
			v, q = node.ports[port]
			nodes[v].in_buf[q] = msg
			report.messages_delivered += 1
		node.out_buf.clear()
	for nid in sorted(nodes):
		node = nodes[nid]
		if lazy and not node.in_buf and not node.awake:
			continue
		node.awake = False
		node.read_ports.clear()
		node.written_ports.clear()
		ctx = NodeContext(network, node, policy, reads)
		step(ctx)
		checkpoint(node.meter)
		report.reads += ctx.reads
		report.writes += ctx.writes
		report.max_message_bits = max(report.max_message_bits, ctx.max_bits)
	return report


@dataclass
class StageStats:
	"""Totals of one protocol stage

	`rounds` is the last stage round with a write, `rounds_run` the
	number of rounds simulated.
	"""
	name: str
	rounds: int = 0
	rounds_run: int = 0
	messages: int = 0
	max_message_bits: int = 0
	peak_memory_words: int = 0
	faults: int = 0
	reports: List[RoundReport] = field(default_factory=list, repr=False)

	def to_dict(self):
		return {
			"rounds": self.rounds,
			"rounds_run": self.rounds_run,
			"messages": self.messages,
			"max_message_bits": self.max_message_bits,
			"peak_memory_words": self.peak_memory_words,
			"faults": self.faults,
		}


def run_protocol(
	network,
	step,
	done=None,
	name=None,
	policy=None,
	reads="stream",
	rounds=None,
	lazy=False,
	wake=(),
	max_rounds=None,
):
	"""Run a protocol stage to completion

	Runs rounds until ``done(network)`` holds and no message is pending,
	or exactly `rounds` rounds if given.  Peak memory is counted from the
	words held when the stage starts.  Stage-local scratch memory is
	released and left-over buffers are discarded afterwards.

	Parameters
	----------
	network: Network
	step: callable
		The node handler.
	done: callable, optional
		Termination predicate on the network.
	name: str, optional
		Stage name, used as the memory phase.
	policy: optional
		Read-order policy.
	reads: str, optional
		``stream`` or ``pull``.
	rounds: int, optional
		Fixed number of rounds.
	lazy: bool, optional
		Lazy scheduling, see :func:`run_round`.
	wake: iterable, optional
		Node ids stepped in the first round of a lazy stage.
	max_rounds: int, optional
		Round limit, defaults to :math:`10 (n + m) + 10`.

	Returns
	-------
	stats: StageStats
	"""
	if done is None and rounds is None:
		raise ConfigurationError("Either a termination predicate or rounds needed.")
	limit = max_rounds or 10 * (network.n + network.m) + 10
	network.stage_origin = network.round_counter
	network.phase = name
	violations = network.violations
	for node in network.nodes.values():
		node.meter.phase = name
		node.meter.peak_words = node.meter.current_words
		node.scratch = {}
		node.awake = False
	for nid in wake:
		network.nodes[nid].awake = True
	stats = StageStats(name)
	while True:
		if rounds is not None:
			if stats.rounds_run >= rounds:
				break
		elif stats.rounds_run and done(network) and network.quiescent():
			break
		if stats.rounds_run >= limit:
			raise ProtocolFault(
				"Stage {0} did not finish within {1} rounds.".format(name, limit),
				stage=name, round=stats.rounds_run,
			)
		try:
			report = run_round(network, step, policy=policy, reads=reads, lazy=lazy)
		except CompactFTError as e:
			if getattr(e, "stage", None) is None:
				e.stage = name
				e.round = stats.rounds_run + 1
			raise
		stats.rounds_run += 1
		stats.reports.append(report)
		stats.messages += report.writes
		stats.max_message_bits = max(stats.max_message_bits, report.max_message_bits)
		if report.writes:
			stats.rounds = stats.rounds_run
	dropped = drain(network)
	for node in network.nodes.values():
		release(node.meter, node.scratch_words)
		node.scratch_words = 0
		node.scratch = {}
		node.awake = False
	stats.peak_memory_words = max(
		(node.meter.peak_words for node in network.nodes.values()), default=0,
	)
	stats.faults = network.violations - violations
	debug(
		"stage %s: %d rounds (%d run), %d messages, %d dropped",
		name, stats.rounds, stats.rounds_run, stats.messages, dropped,
	)
	return stats
