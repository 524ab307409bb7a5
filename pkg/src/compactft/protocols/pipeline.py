# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Preprocessing pipeline

Leader election, BFS tree, weights, DFS renaming, heavy intervals,
light paths and Will distribution, run back to back on one network.
"""
from dataclasses import dataclass, field
from logging import debug, info
from typing import List, Optional

from ..errors import ConfigurationError
from ..graphs import graph_stats
from ..kernel import parse_policy
from .heavy import WEIGHT_MODES, collect_heavy_intervals, convergecast_weights
from .leader import leader_election
from .lightpath import LABEL_VARIANTS, light_paths_big, light_paths_small
from .rename import dfs_rename
from .tree import bfs_tree
from .will import (
	WILL_VARIANTS,
	distribute_wills_adversarial,
	distribute_wills_one_round,
)

__all__ = [
	"STAGES",
	"PipelineConfig",
	"PipelineReport",
	"run_preprocessing_pipeline",
]

STAGES = ("leader", "bfs", "weights", "dfs", "intervals", "labels", "wills")


@dataclass
class PipelineConfig:
	"""Protocol variants of the preprocessing

	Attributes
	----------
	b: int
		Heaviness parameter.
	weight_mode: str
		``broadcast`` or ``poll``.
	label_variant: str
		``big`` or ``small``.
	will_variant: str
		``one_round`` (deterministic reads only) or ``adversarial``.
	policy:
		Read-order policy or policy string.
	d_known: int, optional
		Diameter bound for the leader election, computed if `None`.
	"""
	b: int = 2
	weight_mode: str = "broadcast"
	label_variant: str = "big"
	will_variant: str = "one_round"
	policy: object = "node"
	d_known: Optional[int] = None

	def validate(self):
		if self.b < 2:
			raise ConfigurationError("b must be at least 2, got {0}.".format(self.b))
		for value, allowed, what in [
			(self.weight_mode, WEIGHT_MODES, "weight mode"),
			(self.label_variant, LABEL_VARIANTS, "label variant"),
			(self.will_variant, WILL_VARIANTS, "will variant"),
		]:
			if value not in allowed:
				raise ConfigurationError(
					"Unknown {0} {1!r}, choose from {2}.".format(what, value, allowed)
				)
		policy = parse_policy(self.policy)
		if policy.adversarial and self.will_variant == "one_round":
			raise ConfigurationError(
				"The one-round will distribution needs deterministic reads."
			)
		return policy


@dataclass
class PipelineReport:
	"""Stage statistics and derived facts of one preprocessing run"""
	stages: List = field(default_factory=list)
	diameter: int = 0
	bfs_termination_round: int = 0
	will_compute_rounds: int = 0
	will_peak_slots: int = 0

	def stage(self, name):
		for s in self.stages:
			if s.name == name:
				return s
		raise KeyError(name)


def run_preprocessing_pipeline(network, config=None):
	"""Label the network and distribute the Wills

	Parameters
	----------
	network: Network
		A freshly built network.
	config: PipelineConfig, optional
		The protocol variants, defaults to :class:`PipelineConfig`.

	Returns
	-------
	report: PipelineReport
	"""
	config = config or PipelineConfig()
	policy = config.validate()
	d_known = config.d_known
	if d_known is None:
		d_known = graph_stats(network.edges(), network.nodes)["D"]
	report = PipelineReport(diameter=d_known)

	def run(stats):
		debug("%s: %s", stats.name, stats.to_dict())
		report.stages.append(stats)
		return stats

	run(leader_election(network, d_known, policy=policy))
	run(bfs_tree(network, policy=policy))
	report.bfs_termination_round = max(
		node.vars.terminate_round for node in network.nodes.values()
	)
	run(convergecast_weights(network, config.b, mode=config.weight_mode, policy=policy))
	run(dfs_rename(network, policy=policy))
	run(collect_heavy_intervals(network, policy=policy))
	if config.label_variant == "big":
		run(light_paths_big(network, policy=policy))
	else:
		run(light_paths_small(network, policy=policy))
	if config.will_variant == "one_round":
		wills = run(distribute_wills_one_round(network))
		report.will_compute_rounds = 1 if any(
			node.vars.n_child for node in network.nodes.values()
		) else 0
	else:
		wills = run(distribute_wills_adversarial(network, policy=policy))
		# parents compute from round 2 up to their last send
		report.will_compute_rounds = max(wills.rounds - 1, 0)
	report.will_peak_slots = max(
		node.vars.will_peak_slots for node in network.nodes.values()
	)
	info(
		"preprocessing n=%d m=%d D=%d: %d rounds, %d messages",
		network.n, network.m, d_known,
		sum(s.rounds_run for s in report.stages),
		sum(s.messages for s in report.stages),
	)
	return report
