# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Command line interface

Exit codes: 0 success, 1 internal fault, 2 usage or range error,
3 unsupported operation.
"""
import argparse
import json
import logging
import sys
from logging import error

from .config import ExperimentConfig
from .errors import CompactFTError, UnsupportedOperation
from .graphs import GENERATORS, generate_graph, save_graph
from .kernel import DEFAULT_BUDGET_MULT
from .experiment import (
	delete,
	load_snapshot,
	query_ht,
	route,
	run_experiment,
	run_sweep,
	save_snapshot,
	write_csv,
)

__all__ = ["EXIT_OK", "EXIT_FAULT", "EXIT_USAGE", "EXIT_UNSUPPORTED", "main"]

EXIT_OK = 0
EXIT_FAULT = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3


def _emit(doc, file=None):
	text = json.dumps(doc, indent=2)
	if file is None:
		print(text)
	else:
		with open(file, "w") as f:
			f.write(text + "\n")


def _generator_params(args):
	params = {}
	for key in ("n", "p", "depth", "arity"):
		value = getattr(args, key, None)
		if value is not None:
			params[key] = value
	return params


def _variant_flags(parser):
	parser.add_argument("--b", type=int, default=2, help="heaviness parameter")
	parser.add_argument(
		"--policy", default="node", help="read order: node, rand:SEED or strong",
	)
	parser.add_argument("--labels", choices=["big", "small"], default="big")
	parser.add_argument(
		"--wills", choices=["one-round", "adversarial"], default="one-round",
	)
	parser.add_argument("--weights", choices=["broadcast", "poll"], default="broadcast")
	parser.add_argument("--ports", choices=["contiguous", "gapped"], default="contiguous")
	parser.add_argument("--port-seed", type=int)
	parser.add_argument(
		"--budget-mult", type=float, default=DEFAULT_BUDGET_MULT,
		help="node memory in units of log^2 n bits",
	)
	parser.add_argument("--bounds", help="bound schedule (JSON)")
	strict = parser.add_mutually_exclusive_group()
	strict.add_argument("--strict", dest="strict", action="store_true", default=True)
	strict.add_argument("--lenient", dest="strict", action="store_false")


def _generator_flags(parser):
	parser.add_argument("--p", type=float)
	parser.add_argument("--depth", type=int)
	parser.add_argument("--arity", type=int)
	parser.add_argument("--id-space", type=int)


def _config(args, **kwargs):
	return ExperimentConfig(
		b=args.b,
		read_policy=args.policy,
		label_variant=args.labels,
		will_variant=args.wills,
		weight_mode=args.weights,
		memory_budget_multiplier=args.budget_mult,
		port_assignment=args.ports,
		port_seed=args.port_seed,
		strict=args.strict,
		bounds=args.bounds,
		**kwargs
	)


def cmd_gen(args):
	edges = generate_graph(
		args.name, _generator_params(args), seed=args.seed, id_space=args.id_space,
	)
	comment = "{0} {1} seed={2}".format(args.name, _generator_params(args), args.seed)
	if args.out is None:
		print("# " + comment)
		for u, v in edges:
			print(u, v)
	else:
		save_graph(edges, args.out, comment=comment)
	return EXIT_OK


def cmd_preprocess(args):
	report, network = run_experiment(_config(args, graph=args.graph))
	_emit(report.to_dict(), args.out)
	if args.snapshot is not None:
		save_snapshot(network, args.snapshot)
	if args.csv is not None:
		write_csv([report], args.csv)
	for v in report.failures():
		error("bound check failed: %s", v)
	return EXIT_OK


def cmd_query_ht(args):
	_emit(query_ht(args.y, args.a, args.b))
	return EXIT_OK


def cmd_route(args):
	network = load_snapshot(args.snapshot)
	_emit(route(network, args.source, args.target, max_hops=args.max_hops))
	return EXIT_OK


def cmd_delete(args):
	network = load_snapshot(args.snapshot)
	doc = {"heal": delete(network, args.x, out=args.out)}
	if args.route is not None:
		doc["route"] = route(network, *args.route)
	_emit(doc)
	return EXIT_OK


def cmd_sweep(args):
	config = _config(
		args, generator=args.name, generator_params=_generator_params(args),
		id_space=args.id_space,
	)
	reports = run_sweep(config, args.sizes, args.seeds)
	if args.out is None:
		for report in reports:
			print(report.to_json())
	else:
		write_csv(reports, args.out)
	failed = sum(not r.passed for r in reports)
	if failed:
		error("%d of %d experiments failed a bound check", failed, len(reports))
	return EXIT_OK


def build_parser():
	parser = argparse.ArgumentParser(
		prog="compactft",
		description="Compact message passing simulator with self-healing routing",
	)
	parser.add_argument(
		"-v", "--verbose", action="count", default=0,
		help="more output, repeat for debug messages",
	)
	sub = parser.add_subparsers(dest="command")
	sub.required = True

	p = sub.add_parser("gen", help="generate a graph edge list")
	p.add_argument("name", choices=sorted(GENERATORS))
	p.add_argument("--n", type=int)
	p.add_argument("--seed", type=int)
	_generator_flags(p)
	p.add_argument("--out", help="edge list file, default standard output")
	p.set_defaults(func=cmd_gen)

	p = sub.add_parser("preprocess", help="label a graph and distribute the wills")
	p.add_argument("--graph", required=True, help="edge list file")
	_variant_flags(p)
	p.add_argument("--out", help="JSON report, default standard output")
	p.add_argument("--snapshot", help="store the labeled network")
	p.add_argument("--csv", help="per-stage metrics as CSV")
	p.set_defaults(func=cmd_preprocess)

	p = sub.add_parser("query-ht", help="neighbourhood of y in HT([a, b])")
	p.add_argument("y", type=int)
	p.add_argument("a", type=int)
	p.add_argument("b", type=int)
	p.set_defaults(func=cmd_query_ht)

	p = sub.add_parser("route", help="route a packet in a snapshot")
	p.add_argument("--snapshot", required=True)
	p.add_argument("source", type=int)
	p.add_argument("target", type=int)
	p.add_argument("--max-hops", type=int)
	p.set_defaults(func=cmd_route)

	p = sub.add_parser("delete", help="delete a node and heal")
	p.add_argument("--snapshot", required=True)
	p.add_argument("x", type=int)
	p.add_argument("--out", help="store the healed snapshot")
	p.add_argument(
		"--route", nargs=2, type=int, metavar=("S", "T"),
		help="route a packet after healing",
	)
	p.set_defaults(func=cmd_delete)

	p = sub.add_parser("sweep", help="experiments over sizes and seeds")
	p.add_argument("name", choices=sorted(GENERATORS))
	p.add_argument("--sizes", type=int, nargs="+", required=True)
	p.add_argument("--seeds", type=int, nargs="+", required=True)
	_generator_flags(p)
	_variant_flags(p)
	p.add_argument("--out", help="CSV file, default JSON lines on standard output")
	p.set_defaults(func=cmd_sweep)
	return parser


def main(argv=None):
	"""Run the command line, returns the exit code"""
	parser = build_parser()
	try:
		args = parser.parse_args(argv)
	except SystemExit as e:
		return e.code
	logging.basicConfig(
		level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
		format="%(levelname)s %(name)s: %(message)s",
	)
	try:
		return args.func(args)
	except UnsupportedOperation as e:
		error("unsupported: %s", e)
		return EXIT_UNSUPPORTED
	except (ValueError, OSError) as e:
		error("%s", e)
		return EXIT_USAGE
	except CompactFTError as e:
		stage = getattr(e, "stage", None)
		if stage is not None:
			error("%s (stage %s, round %s)", e, stage, getattr(e, "round", None))
		else:
			error("%s", e)
		return EXIT_FAULT


if __name__ == "__main__":
	sys.exit(main())
