# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Exception hierarchy

All faults raised by the simulator, the protocols and the healing code
derive from :class:`CompactFTError`; invalid arguments and configurations
are additionally :class:`ValueError` subclasses.
"""

__all__ = [
	"CompactFTError",
	"SimulationFault",
	"AccountingFault",
	"BudgetFault",
	"ProtocolFault",
	"RoutingFault",
	"UnsupportedOperation",
	"ConfigurationError",
	"GraphError",
]


class CompactFTError(Exception):
	"""Base class of all package errors"""


class SimulationFault(CompactFTError):
	"""Violation of the message passing contract"""


class AccountingFault(SimulationFault):
	"""Memory released below zero"""


class BudgetFault(SimulationFault):
	"""Memory or message size budget exceeded

	Parameters
	----------
	message: str
		The error message.
	node: int, optional
		The id of the offending node.
	phase: str, optional
		The protocol stage that was running.
	used: int, optional
		The measured amount (words or bits).
	budget: int, optional
		The allowed amount (same unit as `used`).
	"""
	def __init__(self, message, node=None, phase=None, used=None, budget=None):
		super(BudgetFault, self).__init__(message)
		self.node = node
		self.phase = phase
		self.used = used
		self.budget = budget


class ProtocolFault(CompactFTError):
	"""A protocol reached an inconsistent state"""
	def __init__(self, message, stage=None, round=None):
		super(ProtocolFault, self).__init__(message)
		self.stage = stage
		self.round = round


class RoutingFault(CompactFTError):
	"""Malformed label or dangling link while routing"""


class UnsupportedOperation(CompactFTError):
	"""Operation outside the supported healing scope"""


class ConfigurationError(CompactFTError, ValueError):
	"""Invalid experiment or protocol configuration"""


class GraphError(CompactFTError, ValueError):
	"""Invalid graph input

	Parameters
	----------
	message: str
		The error message.
	line: int, optional
		The 1-based line number for parse errors.
	witnesses: tuple, optional
		One node of each of two disconnected components.
	"""
	def __init__(self, message, line=None, witnesses=None):
		super(GraphError, self).__init__(message)
		self.line = line
		self.witnesses = witnesses
