# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Experiment configuration and bound schedules
"""
import json
from dataclasses import dataclass, field
from os import path
from typing import Optional

from .errors import ConfigurationError
from .kernel import DEFAULT_BUDGET_MULT, parse_policy
from .protocols.pipeline import PipelineConfig

__all__ = [
	"BOUNDS_FILE",
	"BOUNDS_PATH",
	"TERMS",
	"ExperimentConfig",
	"load_bounds",
	"bound_value",
]

BOUNDS_FILE = "bounds.json"
BOUNDS_PATH = path.join(path.dirname(__file__), "data", BOUNDS_FILE)

TERMS = {
	"1": lambda s: 1,
	"n": lambda s: s["n"],
	"m": lambda s: s["m"],
	"D+1": lambda s: s["D"] + 1,
	"D+2": lambda s: s["D"] + 2,
	"D+3": lambda s: s["D"] + 3,
	"Delta+1": lambda s: s["Delta"] + 1,
	"m+1": lambda s: s["m"] + 1,
	"m+n": lambda s: s["m"] + s["n"],
	"m(D+1)": lambda s: s["m"] * (s["D"] + 1),
	"n(D+3)": lambda s: s["n"] * (s["D"] + 3),
	"n(Delta+1)": lambda s: s["n"] * (s["Delta"] + 1),
}


def load_bounds(file=None):
	"""Read a bound schedule

	Parameters
	----------
	file: str, optional
		JSON bound schedule, defaults to the packaged one.

	Returns
	-------
	stages: dict
		Maps the stage key to ``{metric: {"coef": c, "term": t}}``.
	"""
	file = file or BOUNDS_PATH
	with open(file, "r") as f:
		doc = json.load(f)
	if doc.get("schema") != 1:
		raise ConfigurationError(
			"{0}: unsupported bound schema {1!r}.".format(file, doc.get("schema"))
		)
	stages = doc["stages"]
	for stage, metrics in stages.items():
		for metric, bound in metrics.items():
			if bound["term"] not in TERMS:
				raise ConfigurationError(
					"{0}: unknown term {1!r} for {2}/{3}.".format(
						file, bound["term"], stage, metric,
					)
				)
			if bound["coef"] < 0:
				raise ConfigurationError(
					"{0}: negative constant for {1}/{2}.".format(file, stage, metric)
				)
	return stages


def bound_value(bound, stats):
	"""Allowed value ``coef * term(stats)``"""
	return bound["coef"] * TERMS[bound["term"]](stats)


_VARIANT_NAMES = {"one-round": "one_round"}


@dataclass
class ExperimentConfig:
	"""Everything needed to reproduce one experiment

	Attributes
	----------
	graph: str, optional
		Edge-list file, exclusive with `generator`.
	generator: str, optional
		Generator name, see :func:`compactft.graphs.generate_graph`.
	generator_params: dict
		Generator parameters.
	seed: int, optional
		Generator seed.
	id_space: int, optional
		Relabel nodes with random ids below `id_space`.
	b: int
		Heaviness parameter, at least 2.
	read_policy: str
		``node``, ``rand:SEED`` or ``strong``.
	label_variant: str
		``big`` or ``small``.
	will_variant: str
		``one_round`` or ``adversarial``.
	weight_mode: str
		``broadcast`` or ``poll``.
	memory_budget_multiplier: float
		Per-node memory in units of :math:`\\log^2 n` bits.
	port_assignment: str
		``contiguous`` or ``gapped``.
	port_seed: int, optional
		Seed of the gapped port assignment.
	strict: bool
		Fault on contract violations.
	bounds: str, optional
		Bound schedule file.
	record: bool
		Record the message transcript.
	"""
	graph: Optional[str] = None
	generator: Optional[str] = None
	generator_params: dict = field(default_factory=dict)
	seed: Optional[int] = None
	id_space: Optional[int] = None
	b: int = 2
	read_policy: str = "node"
	label_variant: str = "big"
	will_variant: str = "one_round"
	weight_mode: str = "broadcast"
	memory_budget_multiplier: float = DEFAULT_BUDGET_MULT
	port_assignment: str = "contiguous"
	port_seed: Optional[int] = None
	strict: bool = True
	bounds: Optional[str] = None
	record: bool = False

	def __post_init__(self):
		self.will_variant = _VARIANT_NAMES.get(self.will_variant, self.will_variant)

	def pipeline_config(self):
		return PipelineConfig(
			b=self.b,
			weight_mode=self.weight_mode,
			label_variant=self.label_variant,
			will_variant=self.will_variant,
			policy=self.read_policy,
		)

	def validate(self, source=True):
		"""Raise :class:`ConfigurationError` for inconsistent settings

		The graph source is only checked if `source` is set.
		"""
		if source and (self.graph is None) == (self.generator is None):
			raise ConfigurationError("Give exactly one of graph file or generator.")
		if self.generator in ("gnp_connected", "random_tree") and self.seed is None:
			raise ConfigurationError(
				"Generator {0} needs a seed.".format(self.generator)
			)
		if self.port_assignment == "gapped" and self.port_seed is None:
			raise ConfigurationError("Gapped port assignment needs a port seed.")
		if self.memory_budget_multiplier <= 0:
			raise ConfigurationError("The memory budget multiplier must be positive.")
		parse_policy(self.read_policy)
		self.pipeline_config().validate()
		return self

	def to_dict(self):
		return {
			k: getattr(self, k) for k in self.__dataclass_fields__
		}
