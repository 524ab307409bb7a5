# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Experiments, bound verdicts and network snapshots

Runs the preprocessing on a configured graph, checks the measured
rounds, messages and message sizes of every stage against the bound
schedule and stores the labeled network for later routing and
deletion experiments.
"""
import csv
import json
from dataclasses import asdict, dataclass, field, replace
from logging import debug, info, warning as warn
from typing import List

from .config import bound_value, load_bounds
from .errors import ConfigurationError
from .graphs import generate_graph, graph_stats, load_graph
from .hft import search_ht
from .kernel import (
	KIND_BITS,
	SMALL_MESSAGE_WORDS,
	MemoryMeter,
	Network,
	Node,
	build_network,
	parse_policy,
)
from .protocols.pipeline import run_preprocessing_pipeline
from .protocols.vars import NodeVars, SubWill
from .routing import RTState, execute_will, simulate_route

__all__ = [
	"REPORT_SCHEMA",
	"SNAPSHOT_SCHEMA",
	"CSV_FIELDS",
	"Verdict",
	"MetricsReport",
	"bound_key",
	"message_bits_allowed",
	"check_bounds",
	"experiment_graph",
	"run_experiment",
	"run_sweep",
	"write_csv",
	"save_snapshot",
	"load_snapshot",
	"query_ht",
	"route",
	"delete",
]

REPORT_SCHEMA = 1
SNAPSHOT_SCHEMA = 1

CSV_FIELDS = [
	"graph", "n", "m", "D", "Delta", "b", "policy", "labels", "wills",
	"weights", "stage", "rounds", "rounds_run", "messages",
	"max_message_bits", "peak_memory_words", "faults", "passed",
]


@dataclass
class Verdict:
	"""Measured value of one stage metric against its allowed value"""
	stage: str
	metric: str
	measured: int
	allowed: int
	passed: bool

	def __str__(self):
		return "{0} {1}: measured {2}, allowed {3}, {4}".format(
			self.stage, self.metric, self.measured, self.allowed,
			"ok" if self.passed else "FAILED",
		)


@dataclass
class MetricsReport:
	"""Per-stage statistics, graph statistics and bound verdicts

	Attributes
	----------
	config: dict
		The experiment configuration.
	graph: dict
		Keys `n`, `m`, `D` and `Delta`.
	word_bits: int
		Bits per word of the network.
	stages: dict
		Stage name to the :class:`compactft.kernel.StageStats` dict,
		plus the `bound` key the stage was checked against.
	verdicts: list
		:class:`Verdict` entries.
	facts: dict
		Derived pipeline facts: BFS termination round, Will compute
		rounds and peak Will slots.
	"""
	config: dict
	graph: dict
	word_bits: int
	stages: dict = field(default_factory=dict)
	verdicts: List[Verdict] = field(default_factory=list)
	facts: dict = field(default_factory=dict)

	@property
	def passed(self):
		return all(v.passed for v in self.verdicts)

	@property
	def faults(self):
		return sum(s["faults"] for s in self.stages.values())

	def failures(self):
		return [v for v in self.verdicts if not v.passed]

	def to_dict(self):
		return {
			"schema": REPORT_SCHEMA,
			"config": self.config,
			"graph": self.graph,
			"word_bits": self.word_bits,
			"stages": self.stages,
			"verdicts": [asdict(v) for v in self.verdicts],
			"facts": self.facts,
			"passed": self.passed,
		}

	def to_json(self, **kwargs):
		return json.dumps(self.to_dict(), **kwargs)

	def to_rows(self):
		"""One CSV row per stage, see :data:`CSV_FIELDS`"""
		c = self.config
		source = c.get("graph") or c.get("generator")
		rows = []
		for name, s in self.stages.items():
			rows.append(dict(
				graph=source,
				b=c.get("b"),
				policy=c.get("read_policy"),
				labels=c.get("label_variant"),
				wills=c.get("will_variant"),
				weights=c.get("weight_mode"),
				stage=name,
				passed=all(v.passed for v in self.verdicts if v.stage == name),
				**self.graph,
				**{k: s[k] for k in (
					"rounds", "rounds_run", "messages", "max_message_bits",
					"peak_memory_words", "faults",
				)},
			))
		return rows


def write_csv(reports, file):
	"""Write the rows of all `reports` to `file`"""
	with open(file, "w", newline="") as f:
		writer = csv.DictWriter(f, fieldnames=CSV_FIELDS)
		writer.writeheader()
		for report in reports:
			writer.writerows(report.to_rows())


def bound_key(stage, config):
	"""Key of `stage` in the bound schedule for the configured variants"""
	if stage == "weights":
		return "weights_" + config.weight_mode
	if stage == "labels":
		key = "labels_" + config.label_variant
		if key == "labels_big" and parse_policy(config.read_policy).adversarial:
			key += "_adversarial"
		return key
	if stage == "wills":
		return "wills_" + config.will_variant
	return stage


def message_bits_allowed(key, word_bits):
	"""Message size bound, :math:`O(\\log^2 n)` only for big labels"""
	if key.startswith("labels_big"):
		return KIND_BITS + (SMALL_MESSAGE_WORDS + word_bits) * word_bits
	return KIND_BITS + SMALL_MESSAGE_WORDS * word_bits


def check_bounds(stats, graph, word_bits, config, bounds):
	"""Verdicts for one stage

	Parameters
	----------
	stats: StageStats
	graph: dict
		Graph statistics.
	word_bits: int
	config: ExperimentConfig
	bounds: dict
		The bound schedule from :func:`compactft.config.load_bounds`.

	Returns
	-------
	key: str
	verdicts: list of Verdict
	"""
	key = bound_key(stats.name, config)
	try:
		schedule = bounds[key]
	except KeyError:
		raise ConfigurationError("No bounds for stage {0!r}.".format(key))
	verdicts = []
	for metric in ("rounds", "messages"):
		allowed = bound_value(schedule[metric], graph)
		measured = getattr(stats, metric)
		verdicts.append(Verdict(stats.name, metric, measured, allowed, measured <= allowed))
	allowed = message_bits_allowed(key, word_bits)
	verdicts.append(Verdict(
		stats.name, "max_message_bits", stats.max_message_bits, allowed,
		stats.max_message_bits <= allowed,
	))
	for v in verdicts:
		if not v.passed:
			warn("bound check failed: %s (%s x %s)", v, schedule.get(v.metric), key)
	return key, verdicts


def experiment_graph(config):
	"""The edge list of the configured graph source"""
	if config.graph is not None:
		return load_graph(config.graph)
	return generate_graph(
		config.generator,
		config.generator_params,
		seed=config.seed,
		id_space=config.id_space,
	)


def run_experiment(config, edges=None):
	"""Preprocess one graph and check the bound schedule

	Parameters
	----------
	config: ExperimentConfig
	edges: list, optional
		Use these edges instead of the configured graph source.

	Returns
	-------
	report: MetricsReport
	network: Network
		The labeled network, ready for :func:`save_snapshot`.
	"""
	config.validate(source=edges is None)
	bounds = load_bounds(config.bounds)
	if edges is None:
		edges = experiment_graph(config)
	network = build_network(
		edges,
		port_assignment=config.port_assignment,
		seed=config.port_seed,
		strict=config.strict,
		budget_mult=config.memory_budget_multiplier,
		record=config.record,
	)
	graph = graph_stats(edges)
	pipeline = config.pipeline_config()
	pipeline.d_known = graph["D"]
	result = run_preprocessing_pipeline(network, pipeline)
	report = MetricsReport(
		config=config.to_dict(),
		graph=graph,
		word_bits=network.word_bits,
		facts={
			"bfs_termination_round": result.bfs_termination_round,
			"will_compute_rounds": result.will_compute_rounds,
			"will_peak_slots": result.will_peak_slots,
			"violations": network.violations,
		},
	)
	for stats in result.stages:
		key, verdicts = check_bounds(stats, graph, network.word_bits, config, bounds)
		report.stages[stats.name] = dict(stats.to_dict(), bound=key)
		report.verdicts.extend(verdicts)
	info(
		"experiment n=%d m=%d D=%d Delta=%d: %s",
		graph["n"], graph["m"], graph["D"], graph["Delta"],
		"all bounds hold" if report.passed
		else "{0} bound checks failed".format(len(report.failures())),
	)
	return report, network


def run_sweep(config, sizes, seeds):
	"""Run one experiment per size and seed

	The configured generator gets `n` from `sizes` and the seed from
	`seeds`, everything else is shared.  Experiments are independent.

	Returns
	-------
	reports: list of MetricsReport
	"""
	if config.generator is None:
		raise ConfigurationError("A sweep needs a generator.")
	reports = []
	for n in sizes:
		for seed in seeds:
			params = dict(config.generator_params, n=n)
			run = replace(config, generator_params=params, seed=seed)
			debug("sweep %s n=%d seed=%d", config.generator, n, seed)
			reports.append(run_experiment(run)[0])
	return reports


# snapshots

def _vars_to_dict(node_vars):
	d = asdict(node_vars)
	d["heavy_intervals"] = [list(iv) for iv in node_vars.heavy_intervals]
	return d


def _vars_from_dict(d):
	d = dict(d)
	if d.get("subwill") is not None:
		d["subwill"] = SubWill(**d["subwill"])
	d["heavy_intervals"] = [tuple(iv) for iv in d.get("heavy_intervals", [])]
	return NodeVars(**d)


def save_snapshot(network, file):
	"""Store the labeled network as JSON

	Stores word size, port maps, node variables and the healed
	overlay, if any.
	"""
	doc = {
		"schema": SNAPSHOT_SCHEMA,
		"word_bits": network.word_bits,
		"strict": network.strict,
		"max_message_bits": network.max_message_bits,
		"nodes": [
			{
				"id": nid,
				"budget_words": node.meter.budget_words,
				"ports": [[p, v, q] for p, (v, q) in sorted(node.ports.items())],
				"vars": _vars_to_dict(node.vars),
			}
			for nid, node in sorted(network.nodes.items())
		],
		"healing": (
			network.healing.to_dict() if network.healing is not None else None
		),
	}
	with open(file, "w") as f:
		json.dump(doc, f)
	debug("saved snapshot of %d nodes to %s", network.n, file)


def load_snapshot(file):
	"""Restore a network stored by :func:`save_snapshot`"""
	with open(file, "r") as f:
		doc = json.load(f)
	if doc.get("schema") != SNAPSHOT_SCHEMA:
		raise ConfigurationError(
			"{0}: unsupported snapshot schema {1!r}.".format(file, doc.get("schema"))
		)
	w = doc["word_bits"]
	nodes = {}
	for entry in doc["nodes"]:
		nid = entry["id"]
		node = Node(
			nid, MemoryMeter(nid, w, entry["budget_words"]),
			_vars_from_dict(entry["vars"]),
		)
		node.ports = {p: (v, q) for p, v, q in entry["ports"]}
		nodes[nid] = node
	network = Network(
		nodes, w, strict=doc["strict"], max_message_bits=doc["max_message_bits"],
	)
	if doc.get("healing") is not None:
		network.healing = RTState.from_dict(doc["healing"])
	return network


# command surface

def query_ht(y, a, b):
	"""Neighborhood of label `y` in :math:`HT([a, b])` as a dict"""
	nb = search_ht(y, a, b)

	def ref(r):
		return None if r is None else {"kind": r.kind, "label": r.label}

	return {
		"query": nb.query,
		"interval": [a, b],
		"leaf_parent": ref(nb.leaf_parent),
		"nonleaf_parent": ref(nb.nonleaf_parent),
		"nonleaf_left": ref(nb.nonleaf_left),
		"nonleaf_right": ref(nb.nonleaf_right),
	}


def _node(link):
	return list(link) if isinstance(link, tuple) else link


def route(network, source, target, max_hops=None):
	"""Route a packet and return its trace as a dict"""
	packet = simulate_route(network, source, target, max_hops=max_hops)
	return {
		"source": source,
		"target": target,
		"label": {
			"new_id": packet.target.new_id,
			"light_path": list(packet.target.light_path),
		},
		"delivered": packet.delivered,
		"hop_count": packet.hop_count,
		"trace": [[_node(at), _node(via)] for at, via in packet.trace],
	}


def delete(network, deleted, out=None):
	"""Delete a node, heal, and optionally save the healed snapshot

	Returns
	-------
	report: dict
		The :class:`compactft.routing.HealReport` as a dict.
	"""
	report = execute_will(network, deleted)
	if out is not None:
		save_snapshot(network, out)
	return report.to_dict()
