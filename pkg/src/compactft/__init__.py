# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Compact message passing with self-healing routing

Simulates synchronous networks whose nodes read and write their ports
one at a time under a polylogarithmic memory budget, and runs the
preprocessing for compact fault-tolerant routing on them: leader
election, BFS tree, heavy-light weights, DFS renaming, light-path
routing labels and the distribution of the half-full tree Wills that
let the children of a deleted node take its place.
"""
__version__ = "0.1.0.dev0"

from .errors import *
from .hft import *
from .kernel import *
from .graphs import *
from .protocols import *
from .routing import *
from .config import *
from .experiment import *
