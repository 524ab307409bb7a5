# -*- coding: utf-8 -*-
import csv
import json

import pytest

import compactft as cft
from compactft.cli import EXIT_OK, EXIT_UNSUPPORTED, EXIT_USAGE, main

USAGE_ERRORS = [
	[],
	["frobnicate"],
	["query-ht", "13", "0", "12"],
	["query-ht", "1", "2"],
	["gen", "gnp_connected", "--n", "10", "--p", "0.3"],
	["gen", "hypercube", "--n", "4"],
	["preprocess", "--graph", "does-not-exist.txt"],
	["sweep", "path", "--sizes", "4"],
]


@pytest.fixture
def path_snapshot(tmp_path):
	"""Preprocessed path 0 - 1 - ... - 5 stored as a snapshot"""
	graph = str(tmp_path / "path.txt")
	snapshot = str(tmp_path / "path.json")
	assert main(["gen", "path", "--n", "6", "--out", graph]) == EXIT_OK
	assert main([
		"preprocess", "--graph", graph, "--snapshot", snapshot,
		"--out", str(tmp_path / "report.json"),
	]) == EXIT_OK
	return snapshot


def _json(capsys):
	return json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("argv", USAGE_ERRORS)
def test_usage_errors(argv):
	assert main(argv) == EXIT_USAGE
	return


def test_query_ht(capsys):
	assert main(["query-ht", "0", "0", "12"]) == EXIT_OK
	doc = _json(capsys)
	assert doc["leaf_parent"]["label"] == 0
	assert doc["nonleaf_parent"]["label"] == 1
	assert doc["nonleaf_left"] == {"kind": "leaf", "label": 0}
	assert main(["query-ht", "12", "0", "12"]) == EXIT_OK
	doc = _json(capsys)
	assert doc["nonleaf_parent"] is None
	assert doc["nonleaf_left"] is None
	assert doc["nonleaf_right"] is None
	return


def test_gen_stdout(capsys):
	assert main(["gen", "random_tree", "--n", "12", "--seed", "3"]) == EXIT_OK
	lines = capsys.readouterr().out.splitlines()
	assert lines[0].startswith("# random_tree")
	assert len(lines) == 12
	return


def test_gen_file(tmp_path):
	f = str(tmp_path / "g.txt")
	assert main([
		"gen", "gnp_connected", "--n", "30", "--p", "0.2", "--seed", "1",
		"--id-space", "1000", "--out", f,
	]) == EXIT_OK
	edges = cft.load_graph(f)
	assert len({u for e in edges for u in e}) == 30
	return


def test_preprocess_outputs(tmp_path, path_snapshot):
	doc = json.loads((tmp_path / "report.json").read_text())
	assert doc["passed"]
	assert list(doc["stages"]) == ["leader", "bfs", "weights", "dfs", "intervals", "labels", "wills"]
	f = str(tmp_path / "stages.csv")
	assert main([
		"preprocess", "--graph", str(tmp_path / "path.txt"), "--csv", f,
		"--labels", "small", "--weights", "poll", "--wills", "adversarial",
		"--policy", "rand:4", "--out", str(tmp_path / "r2.json"),
	]) == EXIT_OK
	with open(f, newline="") as fp:
		rows = list(csv.DictReader(fp))
	assert len(rows) == 7
	assert {r["wills"] for r in rows} == {"adversarial"}
	return


def test_route(capsys, path_snapshot):
	assert main(["route", "--snapshot", path_snapshot, "0", "5"]) == EXIT_OK
	doc = _json(capsys)
	assert doc["delivered"]
	assert doc["hop_count"] == 5
	assert main(["route", "--snapshot", path_snapshot, "0", "9"]) == EXIT_USAGE
	return


def test_delete(capsys, tmp_path, path_snapshot):
	assert main(["delete", "--snapshot", path_snapshot, "5"]) == EXIT_UNSUPPORTED
	assert main(["delete", "--snapshot", path_snapshot, "0"]) == EXIT_UNSUPPORTED
	capsys.readouterr()
	healed = str(tmp_path / "healed.json")
	assert main([
		"delete", "--snapshot", path_snapshot, "2", "--route", "0", "4",
		"--out", healed,
	]) == EXIT_OK
	doc = _json(capsys)
	assert doc["heal"]["deleted"] == 2
	assert doc["heal"]["parent"] == 3
	assert doc["route"]["delivered"]
	assert main(["route", "--snapshot", healed, "4", "0"]) == EXIT_OK
	assert _json(capsys)["delivered"]
	assert main(["delete", "--snapshot", healed, "3"]) == EXIT_UNSUPPORTED
	return


@pytest.mark.parametrize(
	"flags",
	[
		["--policy", "rand:x"],
		["--policy", "rand:1"],
		["--policy", "rand:1", "--wills", "one-round"],
		["--b", "1"],
		["--ports", "gapped"],
		["--budget-mult", "0"],
	],
)
def test_preprocess_config_errors(tmp_path, flags):
	graph = str(tmp_path / "g.txt")
	cft.save_graph([(0, 1), (1, 2)], graph)
	assert main(["preprocess", "--graph", graph] + flags) == EXIT_USAGE
	return


def test_preprocess_failed_bounds(tmp_path, capsys):
	stages = cft.load_bounds()
	stages["bfs"]["messages"]["coef"] = 0
	bounds = tmp_path / "bounds.json"
	bounds.write_text(json.dumps({"schema": 1, "stages": stages}))
	graph = str(tmp_path / "g.txt")
	cft.save_graph([(0, 1), (1, 2)], graph)
	assert main(["preprocess", "--graph", graph, "--bounds", str(bounds)]) == EXIT_OK
	doc = _json(capsys)
	assert not doc["passed"]
	return


def test_budget_fault(tmp_path):
	graph = str(tmp_path / "g.txt")
	cft.save_graph(cft.generate_graph("star", {"n": 300}), graph)
	argv = ["preprocess", "--graph", graph, "--budget-mult", "0.01"]
	assert main(argv) == 1
	return


def test_sweep_csv(tmp_path):
	f = str(tmp_path / "sweep.csv")
	assert main([
		"sweep", "random_tree", "--sizes", "16", "32", "--seeds", "1", "2",
		"--out", f,
	]) == EXIT_OK
	with open(f, newline="") as fp:
		rows = list(csv.DictReader(fp))
	assert len(rows) == 28
	assert sorted({r["n"] for r in rows}) == ["16", "32"]
	return


def test_sweep_stdout(capsys):
	assert main([
		"sweep", "gnp_connected", "--sizes", "20", "--seeds", "1", "2", "3",
		"--p", "0.3",
	]) == EXIT_OK
	lines = capsys.readouterr().out.splitlines()
	assert len(lines) == 3
	assert all(json.loads(line)["passed"] for line in lines)
	return
