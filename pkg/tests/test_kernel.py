# -*- coding: utf-8 -*-
import pytest

import compactft as cft
from compactft.errors import (
	AccountingFault,
	BudgetFault,
	ConfigurationError,
	ProtocolFault,
	SimulationFault,
)
from compactft.kernel import Message, run_round

WORD_SIZES = [
	((1, 0), 1),
	((2, 1), 1),
	((64, 63), 6),
	((65, 64), 7),
	((1025, 1024), 11),
	((4, 1000), 10),
]


def pair(strict=True, **kwargs):
	return cft.build_network([(0, 1)], strict=strict, **kwargs)


def on(nid, action):
	"""Handler running `action(ctx)` at node `nid` only"""
	def step(ctx):
		if ctx.id == nid:
			action(ctx)
	return step


def idle(ctx):
	return


@pytest.mark.parametrize("args, expected", WORD_SIZES)
def test_word_size(args, expected):
	assert cft.word_size(*args) == expected
	return


def test_message_size():
	msg = Message("X", (3, (1, 2, 3), None))
	assert msg.words == 4
	assert msg.bit_size(10) == cft.KIND_BITS + 40
	return


def test_contiguous_ports():
	net = cft.build_network([(0, 1), (0, 2), (1, 2), (2, 3)])
	assert net.nodes[0].live_ports() == [0, 1]
	assert net.nodes[2].live_ports() == [0, 1, 2]
	assert net.nodes[2].ports[2] == (3, 0)
	assert cft.port_audit(net) == []
	assert (net.n, net.m, net.max_degree) == (4, 4, 3)
	assert net.edges() == [(0, 1), (0, 2), (1, 2), (2, 3)]
	return


def test_gapped_ports():
	edges = cft.generate_graph("gnp_connected", {"n": 30, "p": 0.2}, seed=4)
	net = cft.build_network(edges, port_assignment="gapped", seed=9)
	assert cft.port_audit(net) == []
	for node in net.nodes.values():
		assert all(0 <= p < 2 * node.degree for p in node.ports)
	assert net.edges() == sorted(edges)
	with pytest.raises(ConfigurationError):
		cft.build_network(edges, port_assignment="gapped")
	with pytest.raises(ConfigurationError):
		cft.build_network(edges, port_assignment="shuffled", seed=1)
	return


def test_single_node_network():
	net = cft.build_network([], nodes=[42])
	assert net.n == 1
	assert net.m == 0
	assert net.nodes[42].live_ports() == []
	return


def test_invalid_graph():
	with pytest.raises(cft.GraphError):
		cft.build_network([(0, 1), (2, 3)])
	with pytest.raises(cft.GraphError):
		cft.build_network([(0, 1), (1, 0)])
	return


def test_clear_on_read():
	net = pair()
	msg = Message("X", (5,))
	got = []
	run_round(net, on(0, lambda ctx: ctx.send(0, msg)), reads="pull")
	# written messages wait in the out-buffer until the next round
	assert net.nodes[0].out_buf == {0: msg}
	run_round(net, on(1, lambda ctx: got.append(ctx.receive(0))), reads="pull")
	run_round(net, on(1, lambda ctx: got.append(ctx.receive(0))), reads="pull")
	assert got == [msg, None]
	assert net.message_counter == 1
	return


def test_overwrite_at_round_boundary():
	net = pair()
	got = []
	run_round(net, on(0, lambda ctx: ctx.send(0, Message("A"))), reads="pull")
	run_round(net, on(0, lambda ctx: ctx.send(0, Message("B"))), reads="pull")
	run_round(net, on(1, lambda ctx: got.append(ctx.receive(0))), reads="pull")
	assert got == [Message("B")]
	return


def test_unread_message_stays():
	net = pair()
	got = []
	run_round(net, on(0, lambda ctx: ctx.send(0, Message("A"))), reads="pull")
	run_round(net, idle, reads="pull")
	run_round(net, on(1, lambda ctx: got.append(ctx.receive(0))), reads="pull")
	assert got == [Message("A")]
	return


def _read_twice(ctx):
	ctx.receive(0)
	ctx.receive(0)


def _write_twice(ctx):
	ctx.send(0, Message("A"))
	ctx.send(0, Message("B"))


@pytest.mark.parametrize(
	"action",
	[
		_read_twice,
		_write_twice,
		lambda ctx: ctx.receive(7),
		lambda ctx: ctx.send(7, Message("A")),
	],
)
def test_contract_violations(action):
	net = pair()
	with pytest.raises(SimulationFault):
		run_round(net, on(1, action), reads="pull")
	net = pair(strict=False)
	run_round(net, on(1, action), reads="pull")
	assert net.violations == 1
	return


def test_lenient_double_write_keeps_first():
	net = pair(strict=False)
	got = []
	run_round(net, on(0, _write_twice), reads="pull")
	run_round(net, on(1, lambda ctx: got.append(ctx.receive(0))), reads="pull")
	assert got == [Message("A")]
	assert net.message_counter == 1
	return


def test_message_budget():
	net = pair(max_message_bits=cft.KIND_BITS + 2)
	with pytest.raises(BudgetFault) as e:
		run_round(net, on(0, lambda ctx: ctx.send(0, Message("X", (1, 2, 3)))))
	assert e.value.used == cft.KIND_BITS + 3
	assert e.value.budget == cft.KIND_BITS + 2
	return


def test_default_message_budget():
	net = pair()
	w = net.word_bits
	assert net.max_message_bits == cft.KIND_BITS + (cft.SMALL_MESSAGE_WORDS + w) * w
	return


def test_meter():
	meter = cft.MemoryMeter(3, word_bits=4, budget_words=5)
	cft.charge(meter, 4)
	cft.release(meter, 2)
	cft.charge(meter, 3)
	assert (meter.current_words, meter.peak_words) == (5, 5)
	with pytest.raises(BudgetFault) as e:
		cft.charge(meter, 1)
	assert (e.value.node, e.value.used, e.value.budget) == (3, 6, 5)
	with pytest.raises(AccountingFault):
		cft.release(meter, 7)
	with pytest.raises(ValueError):
		cft.charge(meter, -1)
	return


def test_budget_checked_after_handler():
	net = pair()
	cft.set_memory_budget(net, 2 * net.word_bits)

	def hog(ctx):
		ctx.node.meter.current_words += 3

	with pytest.raises(BudgetFault):
		run_round(net, on(0, hog))
	return


def test_broadcast_except_holds_list():
	net = cft.build_network([(0, 1), (0, 2), (0, 3)])
	run_round(net, on(0, lambda ctx: ctx.broadcast_except(Message("J"), [1])))
	assert sorted(net.nodes[0].out_buf) == [0, 2]
	meter = net.nodes[0].meter
	assert (meter.current_words, meter.peak_words) == (0, 1)
	run_round(net, on(0, lambda ctx: ctx.broadcast_except(Message("K"), lambda p: p < 2)))
	assert sorted(net.nodes[0].out_buf) == [2]
	return


def _fan_in(policy):
	"""Order in which the center of a star reads its leaves"""
	net = cft.build_network([(9, i) for i in range(6)])
	order = []
	run_round(net, lambda ctx: ctx.broadcast(Message("P", (ctx.id,))))

	def collect(ctx):
		if ctx.id == 9:
			order.extend(m.payload[0] for _, m in ctx.deliveries())
		else:
			list(ctx.deliveries())

	run_round(net, collect, policy=policy)
	return order


def test_node_chosen_order():
	assert _fan_in(cft.NodeChosen()) == [0, 1, 2, 3, 4, 5]
	return


def test_random_adversary_replay():
	first = _fan_in(cft.RandomAdversary(11))
	assert sorted(first) == [0, 1, 2, 3, 4, 5]
	assert _fan_in(cft.RandomAdversary(11)) == first
	orders = {tuple(_fan_in(cft.RandomAdversary(s))) for s in range(20)}
	assert len(orders) > 1
	return


def test_strong_adversary():
	assert _fan_in(cft.StrongAdversary(cft.parent_last)) == [5, 4, 3, 2, 1, 0]
	with pytest.raises(SimulationFault):
		_fan_in(cft.StrongAdversary(lambda v, pending: list(pending)[:1]))
	return


@pytest.mark.parametrize(
	"name, cls",
	[
		("node", cft.NodeChosen),
		("rand:7", cft.RandomAdversary),
		("strong", cft.StrongAdversary),
	],
)
def test_parse_policy(name, cls):
	policy = cft.parse_policy(name)
	assert isinstance(policy, cls)
	assert cft.parse_policy(policy) is policy
	return


@pytest.mark.parametrize("name", ["rand:", "rand:x", "random", ""])
def test_parse_policy_errors(name):
	with pytest.raises(ConfigurationError):
		cft.parse_policy(name)
	return


def test_pull_needs_deterministic_reads():
	net = pair()
	with pytest.raises(ConfigurationError):
		run_round(net, idle, policy=cft.RandomAdversary(1), reads="pull")
	with pytest.raises(ConfigurationError):
		run_round(net, lambda ctx: list(ctx.deliveries()), reads="pull")
	return


def test_lazy_rounds():
	net = cft.build_network([(0, 1), (1, 2)])
	stepped = []

	def step(ctx):
		stepped.append((ctx.round, ctx.id))
		if ctx.id == 0 and ctx.round == 1:
			ctx.send(0, Message("T"))
		list(ctx.deliveries())

	net.nodes[0].awake = True
	net.stage_origin = net.round_counter
	run_round(net, step, lazy=True)
	run_round(net, step, lazy=True)
	assert stepped == [(1, 0), (2, 1)]
	return


def test_run_protocol_fixed_rounds():
	net = cft.build_network([(0, 1), (1, 2)])

	def step(ctx):
		list(ctx.deliveries())
		if ctx.round == 1 and ctx.id == 0:
			ctx.charge_scratch(3)
			ctx.send(0, Message("T"))
		if ctx.round == 2 and ctx.id == 1:
			ctx.send(1, Message("T"))

	stats = cft.run_protocol(net, step, name="ping", rounds=5)
	assert stats.rounds_run == 5
	assert stats.rounds == 2
	assert stats.messages == 2
	assert stats.peak_memory_words == 3
	assert net.nodes[0].meter.current_words == 0
	assert net.quiescent()
	d = stats.to_dict()
	assert d["messages"] == 2 and d["faults"] == 0
	return


def test_run_protocol_stage_peak():
	net = cft.build_network([(0, 1)])

	def heavy(ctx):
		if ctx.round == 1 and ctx.id == 0:
			ctx.charge_scratch(9)

	def light(ctx):
		if ctx.round == 1 and ctx.id == 1:
			ctx.charge_scratch(2)

	net.nodes[0].meter.current_words = 1
	assert cft.run_protocol(net, heavy, name="first", rounds=1).peak_memory_words == 10
	assert cft.run_protocol(net, light, name="second", rounds=1).peak_memory_words == 2
	assert net.nodes[0].meter.peak_words == 1
	return


def test_run_protocol_drains_buffers():
	net = pair()

	def step(ctx):
		if ctx.round == 1:
			ctx.send(0, Message("T"))

	stats = cft.run_protocol(net, step, reads="pull", rounds=1)
	assert stats.messages == 2
	assert net.quiescent()
	assert not net.nodes[0].in_buf and not net.nodes[1].in_buf
	return


def test_run_protocol_errors():
	net = pair()
	with pytest.raises(ConfigurationError):
		cft.run_protocol(net, idle)

	def broken(ctx):
		if ctx.round == 3:
			raise ProtocolFault("broken")

	with pytest.raises(ProtocolFault) as e:
		cft.run_protocol(net, broken, name="broken", rounds=5)
	assert (e.value.stage, e.value.round) == ("broken", 3)
	with pytest.raises(ProtocolFault):
		cft.run_protocol(net, idle, done=lambda network: False, max_rounds=10)
	return


def test_transcript():
	net = pair(record=True)
	run_round(net, on(0, lambda ctx: ctx.send(0, Message("X", (4,)))))
	assert net.transcript == [(1, 0, 0, "X", (4,))]
	return
